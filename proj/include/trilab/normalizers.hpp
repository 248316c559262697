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
#include <iosfwd>
#include <span>
#include <vector>

#include "trilab/distributions.hpp"
#include "trilab/functions.hpp"

namespace trilab {

/// Centering and scaling sequences on a grid of n, plus c_k for every
/// k <= max(n_grid). Natural logarithms throughout.
struct NormalizerTable {
    std::vector<std::uint64_t> n_grid;
    std::vector<double> a;        // sqrt(log n)
    std::vector<double> b;        // n f(mu) + f''(mu)/2 sum_{k<=n} c_k/k
    std::vector<double> b_tilde;  // n f(mu) + f''(mu) sigma^2/2 log n
    std::vector<double> q;        // sum_{k<=n} (sigma^2 - c_k)/k
    std::vector<double> q_tilde;  // E|X-mu|^2 log+(n ^ |X-mu|/sigma)
    std::vector<double> c;        // c_k at index k-1
    // b - n f(mu) and b_tilde - n f(mu), kept separately so the statistic can
    // be formed from sum_k (f(S_k/k) - f(mu)) without cancelling n f(mu).
    std::vector<double> b_correction;
    std::vector<double> b_tilde_correction;

    double f_mu = 0.0;
    double f2_mu = 0.0;
    double sigma2 = 0.0;

    /// Grid position of n; PreconditionError when n is not on the grid.
    std::size_t index_of(std::uint64_t n) const;
    std::uint64_t max_n() const noexcept { return n_grid.empty() ? 0 : n_grid.back(); }
};

/// Builds the table. n_grid must be non-empty, strictly ascending, n >= 1,
/// and f must be defined at mu.
NormalizerTable build_table(const DistributionSpec& spec, const FunctionSpec& fs,
                            std::span<const std::uint64_t> n_grid);

/// Q_n by direct (compensated) summation of tail moments; the lattice
/// counterexample uses its piecewise-constant breakpoint structure instead.
double q_n(const DistributionSpec& spec, std::uint64_t n);

/// Q~_n = E|X-mu|^2 log+(n ^ |X-mu|/sigma).
double q_tilde_n(const DistributionSpec& spec, std::uint64_t n);

/// Q_n for the counterexample by breakpoint sums of harmonic-number
/// differences. Exact for any n representable as uint64.
double counterexample_q(double epsilon, std::uint64_t n);

/// Same at n = floor(e^log_n), for n far outside the integer range.
double counterexample_q_at_log(double epsilon, double log_n);

struct CounterexamplePoint {
    std::uint64_t m = 0;
    double log_n = 0.0;  // log floor(k_M)
    double q = 0.0;
    double ratio = 0.0;  // Q / sqrt(log n)
};

/// Q_n / sqrt(log n) at n = floor(k_M) = floor(exp(M^(2+eps))). Requires M >= 2.
CounterexamplePoint counterexample_q_ratio(double epsilon, std::uint64_t m);

/// CSV with header n,a_n,b_n,b_tilde_n,Q_n,Q_tilde_n.
void write_normalizer_csv(const NormalizerTable& table, std::ostream& out);

}  // namespace trilab
