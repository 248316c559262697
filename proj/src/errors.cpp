/*
 * Copyright 2026 The trilab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "trilab/errors.hpp"

namespace trilab {

ReplicationErrors::ReplicationErrors(std::vector<Entry> entries)
    : std::runtime_error([&] {
          std::string msg = std::to_string(entries.size()) + " replication(s) failed";
          for (std::size_t i = 0; i < entries.size() && i < 5; ++i)
              msg += "; rep " + std::to_string(entries[i].rep_index) + ": " + entries[i].message;
          return msg;
      }()),
      entries_(std::move(entries)) {}

}  // namespace trilab
