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
#include <optional>
#include <utility>
#include <vector>

#include "trilab/distributions.hpp"
#include "trilab/functions.hpp"
#include "trilab/normalizers.hpp"
#include "trilab/random.hpp"

namespace trilab {

enum class Centering { UseB, UseBTilde };

/// How a row sum S_{k,k} is produced. Summed adds k fresh draws; ExactLaw
/// draws S_{k,k} from its closed-form law where one exists (Exponential ->
/// Gamma, Normal -> Normal, Rademacher -> shifted Binomial, PointMass) and
/// falls back to Summed otherwise. Rows are independent in both modes.
enum class RowSampling { Summed, ExactLaw };

struct LindebergOptions {
    double r = 0.5;
    std::vector<std::uint64_t> n_values;
    std::uint64_t replications = 1000;
};

struct HsuRobbinsOptions {
    double t = 0.5;
    std::uint64_t horizon = 100;
    std::vector<std::uint64_t> term_grid;  // optional sparse grid for single terms
    std::uint64_t replications = 1000;
};

struct RosenthalOptions {
    double p = 4.0;
    std::vector<std::uint64_t> n_values{2, 8, 32, 128};
    std::uint64_t replications = 1000;
};

struct DiagnosticFlags {
    bool remainders = false;
    std::optional<LindebergOptions> lindeberg;
    std::optional<HsuRobbinsOptions> hsu_robbins;
    std::optional<RosenthalOptions> rosenthal;
};

struct ExperimentConfig {
    DistributionSpec spec;
    FunctionSpec fs;
    std::uint64_t n = 2;
    std::uint64_t replications = 1;
    std::uint64_t master_seed = 0;
    Centering centering = Centering::UseB;
    RowSampling row_sampling = RowSampling::Summed;
    DiagnosticFlags diagnostics;
};

/// ConfigError for n < 2, replications < 1, r <= 0, t <= 0, p <= 2.
void validate(const ExperimentConfig& config);

struct ReplicationResult {
    std::uint64_t rep_index = 0;
    double t_stat = 0.0;
    std::optional<double> product_stat;
    std::optional<double> r1;
    std::optional<double> r2;
    std::uint64_t out_of_neighborhood_count = 0;
    bool domain_violation = false;
};

/// Sum of k independent draws; takes exactly k variates from the stream.
double row_sum(const DistributionSpec& spec, std::uint64_t k, RandomStream& stream);

/// Row sum under the chosen sampling mode.
double row_sum(const DistributionSpec& spec, std::uint64_t k, RandomStream& stream, RowSampling mode);

/// Gamma(shape, 1) by Marsaglia-Tsang, shape >= 1.
double gamma_variate(double shape, RandomStream& stream);

/// One replication of the triangular array of depth config.n. The stream
/// is derived from (master_seed, rep_index) only.
ReplicationResult replicate(const ExperimentConfig& config, const NormalizerTable& table,
                            std::uint64_t rep_index);

/// (n^(gamma^2/2) prod_k S_{k,k}/(k mu))^(1/(gamma sqrt(log n))) for replication
/// rep_index, evaluated in log space. Requires positive support and sigma > 0.
double product_statistic(const ExperimentConfig& config, const NormalizerTable& table,
                         std::uint64_t rep_index);

/// (r1, r2) = (sum_k [((S-k mu)/k)^2 - c_k/k], sum_k |(S-k mu)/k|^3) for
/// replication rep_index.
std::pair<double, double> remainder_sums(const ExperimentConfig& config, const NormalizerTable& table,
                                         std::uint64_t rep_index);

/// All replications, ordered by rep_index. The output does not depend on
/// `threads`. Failing replications are collected into ReplicationErrors.
std::vector<ReplicationResult> run_experiment(const ExperimentConfig& config, const NormalizerTable& table,
                                              unsigned threads = 1);
std::vector<ReplicationResult> run_experiment(const ExperimentConfig& config, unsigned threads = 1);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t replications = 0;
};

/// (1/log n) sum_{k<=n} E (S_k/k)^2 1{|S_k/k| > r sqrt(log n)} for the law
/// standardised to mean 0, variance 1.
MonteCarloEstimate lindeberg_value(const DistributionSpec& spec, std::uint64_t n, double r,
                                   std::uint64_t replications, std::uint64_t seed,
                                   RowSampling mode = RowSampling::Summed, unsigned threads = 1);

/// Partial sums sum_{m<=n} P^(|S_m/m| > t), n = 1..horizon, for the centred law.
std::vector<double> hsu_robbins_partial(const DistributionSpec& spec, double t, std::uint64_t horizon,
                                        std::uint64_t replications, std::uint64_t seed,
                                        RowSampling mode = RowSampling::Summed, unsigned threads = 1);

/// Individual terms P^(|S_n/n| > t) on a sparse grid of n.
std::vector<MonteCarloEstimate> hsu_robbins_terms(const DistributionSpec& spec, double t,
                                                  const std::vector<std::uint64_t>& grid,
                                                  std::uint64_t replications, std::uint64_t seed,
                                                  RowSampling mode = RowSampling::Summed, unsigned threads = 1);

/// Empirical E|S_n|^p / (n E|X|^p + n^(p/2) (E X^2)^(p/2)) for the centred law.
/// p > 2 and E|X|^p < infinity, else PreconditionError.
MonteCarloEstimate rosenthal_ratio(const DistributionSpec& spec, std::uint64_t n, double p,
                                   std::uint64_t replications, std::uint64_t seed,
                                   RowSampling mode = RowSampling::Summed, unsigned threads = 1);

/// The same ratio evaluated exactly: p = 4 for any law with a finite fourth
/// moment (E S^4 = n m4 + 3n(n-1) m2^2), any p > 2 for Rademacher.
double rosenthal_ratio_exact(const DistributionSpec& spec, std::uint64_t n, double p);

}  // namespace trilab
