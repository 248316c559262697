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


#include "trilab/normalizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "trilab/errors.hpp"
#include "trilab/io.hpp"
#include "trilab/series.hpp"

namespace trilab {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

constexpr double kLogUint64Max = 44.3;  // log(2^64) ~ 44.36

// floor(k_m) as an integer, saturating.
std::uint64_t lattice_breakpoint(double log_atom) {
    if (log_atom >= kLogUint64Max) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::floor(std::exp(log_atom)));
}

}  // namespace

std::size_t NormalizerTable::index_of(std::uint64_t n) const {
    const auto it = std::lower_bound(n_grid.begin(), n_grid.end(), n);
    if (it == n_grid.end() || *it != n)
        throw PreconditionError("normalizer table does not cover n = " + std::to_string(n));
    return static_cast<std::size_t>(it - n_grid.begin());
}

NormalizerTable build_table(const DistributionSpec& spec, const FunctionSpec& fs,
                            std::span<const std::uint64_t> n_grid) {
    if (n_grid.empty()) throw PreconditionError("n_grid must be non-empty");
    if (n_grid.front() < 1) throw PreconditionError("n_grid entries must be >= 1");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw PreconditionError("n_grid must be strictly ascending");

    NormalizerTable table;
    table.n_grid.assign(n_grid.begin(), n_grid.end());
    table.sigma2 = spec.sigma2();
    table.f_mu = eval(fs, spec.mu());
    table.f2_mu = eval_d2(fs, spec.mu());

    const std::uint64_t max_n = n_grid.back();
    table.c.resize(max_n);
    CompensatedSum within;
    CompensatedSum tail;
    std::size_t next = 0;
    for (std::uint64_t k = 1; k <= max_n; ++k) {
        const double kd = static_cast<double>(k);
        table.c[k - 1] = truncated_second_central_moment(spec, k);
        within.add(table.c[k - 1] / kd);
        tail.add(tail_second_central_moment(spec, k) / kd);
        if (k == n_grid[next]) {
            const double n = kd;
            const double log_n = std::log(n);
            table.a.push_back(std::sqrt(log_n));
            table.b_correction.push_back(0.5 * table.f2_mu * within.value());
            table.b_tilde_correction.push_back(0.5 * table.f2_mu * table.sigma2 * log_n);
            table.b.push_back(n * table.f_mu + table.b_correction.back());
            table.b_tilde.push_back(n * table.f_mu + table.b_tilde_correction.back());
            table.q.push_back(spec.lattice() ? counterexample_q(spec.lattice()->epsilon, k) : tail.value());
            table.q_tilde.push_back(q_tilde_n(spec, k));
            ++next;
        }
    }
    return table;
}

double q_n(const DistributionSpec& spec, std::uint64_t n) {
    if (n == 0) throw PreconditionError("n must be >= 1");
    if (const LatticeAtomTable* lattice = spec.lattice()) return counterexample_q(lattice->epsilon, n);
    CompensatedSum sum;
    for (std::uint64_t k = 1; k <= n; ++k)
        sum.add(tail_second_central_moment(spec, k) / static_cast<double>(k));
    return sum.value();
}

double q_tilde_n(const DistributionSpec& spec, std::uint64_t n) { return capped_log_second_moment(spec, n); }

double counterexample_q(double epsilon, std::uint64_t n) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
    if (n == 0) throw PreconditionError("n must be >= 1");
    // tail(k) = C zeta2_tail(m) for floor(k_{m-1}) < k <= floor(k_m), floor(k_0) = 0
    double q = 0.0;
    std::uint64_t lower = 0;
    double h_lower = 0.0;
    for (std::uint64_t m = 1; lower < n; ++m) {
        const std::uint64_t upper = std::min(n, lattice_breakpoint(std::pow(static_cast<double>(m), 2.0 + epsilon)));
        if (upper <= lower) continue;
        const double h_upper = harmonic(upper);
        q += kLatticeC * zeta2_tail(m) * (h_upper - h_lower);
        lower = upper;
        h_lower = h_upper;
    }
    return q;
}

double counterexample_q_at_log(double epsilon, double log_n) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
    if (log_n < kLogUint64Max) return counterexample_q(epsilon, lattice_breakpoint(log_n));
    double q = 0.0;
    double h_lower = 0.0;
    for (std::uint64_t m = 1;; ++m) {
        const double log_atom = std::pow(static_cast<double>(m), 2.0 + epsilon);
        const double h_upper = harmonic_at_log(std::min(log_atom, log_n));
        q += kLatticeC * zeta2_tail(m) * (h_upper - h_lower);
        if (log_atom >= log_n) break;
        h_lower = h_upper;
    }
    return q;
}

CounterexamplePoint counterexample_q_ratio(double epsilon, std::uint64_t m) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon", "must be > 0");
    if (m < 2) throw ConfigError("M", "must be >= 2");
    CounterexamplePoint point;
    point.m = m;
    const double log_atom = std::pow(static_cast<double>(m), 2.0 + epsilon);
    if (log_atom < kLogUint64Max) {
        const std::uint64_t n = lattice_breakpoint(log_atom);
        point.log_n = std::log(static_cast<double>(n));
        point.q = counterexample_q(epsilon, n);
    } else {
        point.log_n = log_atom;
        point.q = counterexample_q_at_log(epsilon, log_atom);
    }
    point.ratio = point.q / std::sqrt(point.log_n);
    return point;
}

void write_normalizer_csv(const NormalizerTable& table, std::ostream& out) {
    out << "n,a_n,b_n,b_tilde_n,Q_n,Q_tilde_n\n";
    for (std::size_t i = 0; i < table.n_grid.size(); ++i) {
        out << table.n_grid[i] << ',' << format_double(table.a[i]) << ',' << format_double(table.b[i]) << ','
            << format_double(table.b_tilde[i]) << ',' << format_double(table.q[i]) << ','
            << format_double(table.q_tilde[i]) << '\n';
    }
}

}  // namespace trilab
