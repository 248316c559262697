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


#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trilab {

/// Invalid experiment or family parameter. `field()` is the dotted path of the
/// offending key (e.g. "distribution.rate").
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A numerical procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Argument outside the domain of a function.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, double x) : std::domain_error(what), x_(x) {}

    double x() const noexcept { return x_; }

private:
    double x_;
};

/// Point outside the neighbourhood where a Taylor bound holds.
class NeighborhoodError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A counterexample atom is too large to represent as a double.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Operation called outside its documented preconditions.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Aggregate of per-replication failures, each tagged with its rep index.
class ReplicationErrors : public std::runtime_error {
public:
    struct Entry {
        std::size_t rep_index;
        std::string message;
    };

    explicit ReplicationErrors(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    std::vector<Entry> entries_;
};

}  // namespace trilab
