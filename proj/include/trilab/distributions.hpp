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
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trilab/random.hpp"

namespace trilab {

// Family descriptors. Parameters are validated by make_spec.
struct PointMass {
    double value = 0.0;
};
struct Rademacher {};
struct Exponential {
    double rate = 1.0;
};
struct Uniform {
    double lo = 0.0;
    double hi = 1.0;
};
struct Normal {
    double mean = 0.0;
    double sd = 1.0;
};
/// P(X = +-k_m) = C / (2 k_m^2 m^2), k_m = exp(m^(2+epsilon)), C = 6/pi^2,
/// remaining mass at 0. Mean 0, variance 1, E X^2 (log+|X|)^(1/2) = infinity.
struct LatticeCounterexample {
    double epsilon = 0.5;
};
struct Atom {
    double value = 0.0;
    double probability = 0.0;
};
struct FiniteDiscrete {
    std::vector<Atom> atoms;
};

using Family = std::variant<PointMass, Rademacher, Exponential, Uniform, Normal,
                            LatticeCounterexample, FiniteDiscrete>;

inline constexpr double kLatticeC = 6.0 / (3.14159265358979323846 * 3.14159265358979323846);

/// Breakpoint table of the lattice counterexample, all in log space.
/// Index i holds atom m = i + 1.
struct LatticeAtomTable {
    double epsilon = 0.0;
    std::vector<double> log_atoms;            // ln k_m = m^(2+eps)
    std::vector<double> atom_log_probs;       // ln P(|X| = k_m)
    std::vector<double> tail_second_moments;  // E X^2 1{|X| > k}, k in [k_{m-1}, k_m)
    double log_atom_mass = 0.0;               // ln sum_m P(|X| = k_m)
    double prob_zero = 0.0;                   // P(X = 0)

    std::size_t size() const noexcept { return log_atoms.size(); }
};

/// Builds the table for atoms m = 1..max_atoms. Requires epsilon > 0 and
/// max_atoms >= 2.
LatticeAtomTable counterexample_tail_table(double epsilon, std::size_t max_atoms);

/// exp(ln k_m), or OverflowError when k_m exceeds the double range.
double lattice_atom_value(const LatticeAtomTable& table, std::size_t m);

/// 1-based index of the smallest atom strictly larger than `threshold`
/// (threshold >= 1), i.e. the first m with m^(2+eps) > ln threshold.
std::uint64_t lattice_first_atom_above(double epsilon, double threshold);

/// Same for a threshold given by its logarithm.
std::uint64_t lattice_first_atom_above_log(double epsilon, double log_threshold);

/// A sampleable law together with its exact moments.
class DistributionSpec {
public:
    const Family& family() const noexcept { return family_; }
    std::string family_name() const;

    double mu() const noexcept { return mu_; }
    double sigma2() const noexcept { return sigma2_; }
    double sigma() const noexcept { return sigma_; }
    /// sigma / mu, absent when mu == 0.
    std::optional<double> gamma() const noexcept { return gamma_; }
    bool positive_support() const noexcept { return positive_support_; }
    bool log_moment_finite() const noexcept { return log_moment_finite_; }
    bool is_continuous() const noexcept;

    /// Analytic-mode table; non-null only for LatticeCounterexample.
    const LatticeAtomTable* lattice() const noexcept { return lattice_.get(); }

private:
    friend DistributionSpec make_spec(Family family);
    friend double sample(const DistributionSpec& spec, RandomStream& stream);

    Family family_;
    double mu_ = 0.0;
    double sigma2_ = 0.0;
    double sigma_ = 0.0;
    std::optional<double> gamma_;
    bool positive_support_ = false;
    bool log_moment_finite_ = true;
    std::shared_ptr<const LatticeAtomTable> lattice_;
    std::vector<double> cumulative_;  // FiniteDiscrete sampling
};

/// Atoms tabulated for the counterexample; all higher atoms have
/// probability below the smallest subnormal double.
inline constexpr std::size_t kLatticeAtoms = 64;

/// Validates parameters and fills the closed-form moments. Throws ConfigError
/// naming the bad field. Normal(m, 0) and single-atom FiniteDiscrete are
/// canonicalised to PointMass so that sigma2 == 0 exactly for point masses.
DistributionSpec make_spec(Family family);

/// One draw. Throws OverflowError if a counterexample atom beyond the double
/// range is selected (use the analytic functions instead).
double sample(const DistributionSpec& spec, RandomStream& stream);

/// c_k = E|X - mu|^2 1{|X - mu| <= sigma k} for k >= 1, from closed forms.
double truncated_second_central_moment(const DistributionSpec& spec, std::uint64_t k);

/// sigma^2 - c_k = E|X - mu|^2 1{|X - mu| > sigma k}, computed without
/// cancellation.
double tail_second_central_moment(const DistributionSpec& spec, std::uint64_t k);

/// c_k by adaptive quadrature of the density (continuous families only).
/// Absolute tolerance 1e-10; NumericError if it is not met.
double truncated_second_central_moment_quadrature(const DistributionSpec& spec, std::uint64_t k);

/// E|X - mu|^2 log+(n ^ |X - mu|/sigma): exact atom sums for discrete laws,
/// quadrature for continuous ones.
double capped_log_second_moment(const DistributionSpec& spec, std::uint64_t n);

/// E|X - mu|^p, or nullopt when infinite. p >= 1.
std::optional<double> central_abs_moment(const DistributionSpec& spec, double p);

}  // namespace trilab
