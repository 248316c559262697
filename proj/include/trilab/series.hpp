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

#include <cstdint>

namespace trilab {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kZeta2 = kPi * kPi / 6.0;

/// Largest n for which harmonic numbers are summed term by term.
inline constexpr std::uint64_t kHarmonicDirectLimit = 10'000'000;

/// H_n = sum_{k<=n} 1/k. Direct summation up to kHarmonicDirectLimit, then
/// log n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4).
double harmonic(std::uint64_t n);

/// H at n = floor(e^log_n), valid for n far beyond the integer range.
double harmonic_at_log(double log_n);

/// sum_{j>=m} 1/j^2 for m >= 1, by direct summation plus an Euler-Maclaurin
/// remainder accurate well below 1e-14.
double zeta2_tail(std::uint64_t m);

}  // namespace trilab
