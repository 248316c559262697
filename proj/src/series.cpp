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


#include "trilab/series.hpp"

#include <cmath>

namespace trilab {

namespace {

double harmonic_asymptotic(double n, double log_n) {
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    return log_n + kEulerGamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0;
}

// sum_{j>J} 1/j^2
double zeta2_remainder(double J) {
    const double inv = 1.0 / J;
    const double inv2 = inv * inv;
    return inv - 0.5 * inv2 + inv2 * inv / 6.0 - inv2 * inv2 * inv / 30.0 +
           inv2 * inv2 * inv2 * inv / 42.0;
}

constexpr std::uint64_t kZetaDirect = 1000;

}  // namespace

double harmonic(std::uint64_t n) {
    if (n <= kHarmonicDirectLimit) {
        double sum = 0.0;
        for (std::uint64_t k = n; k >= 1; --k) sum += 1.0 / static_cast<double>(k);
        return sum;
    }
    const double x = static_cast<double>(n);
    return harmonic_asymptotic(x, std::log(x));
}

double harmonic_at_log(double log_n) {
    // 2^53: beyond this floor(e^L) is not representable and log(floor) == L.
    constexpr double kExactLog = 36.7;
    if (log_n < kExactLog) {
        const double n = std::floor(std::exp(log_n));
        if (n <= static_cast<double>(kHarmonicDirectLimit)) return harmonic(static_cast<std::uint64_t>(n));
        return harmonic_asymptotic(n, std::log(n));
    }
    return log_n + kEulerGamma;
}

double zeta2_tail(std::uint64_t m) {
    if (m == 0) m = 1;
    if (m > kZetaDirect) return zeta2_remainder(static_cast<double>(m - 1));
    double sum = zeta2_remainder(static_cast<double>(kZetaDirect));
    for (std::uint64_t j = kZetaDirect; j >= m; --j) {
        const double x = static_cast<double>(j);
        sum += 1.0 / (x * x);
    }
    return sum;
}

}  // namespace trilab
