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


#include "trilab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "trilab/errors.hpp"

namespace trilab {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions are
// recorded per index and rethrown together after all workers finish.
template <class Body>
void parallel_for(std::uint64_t count, unsigned threads, Body body) {
    std::vector<ReplicationErrors::Entry> errors;
    std::mutex errors_mutex;
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (const std::exception& e) {
                std::lock_guard lock(errors_mutex);
                errors.push_back({i, e.what()});
            }
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end(), [](const auto& a, const auto& b) { return a.rep_index < b.rep_index; });
        throw ReplicationErrors(std::move(errors));
    }
}

MonteCarloEstimate mean_estimate(const std::vector<double>& values, double scale) {
    const auto m = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = values.size() > 1 ? ss / (m - 1.0) : 0.0;
    return {mean * scale, std::sqrt(var / m) * scale, values.size()};
}

struct RowPass {
    double sum_f = 0.0;  // sum_k (f(S_k/k) - f(mu))
    double log_product = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    std::uint64_t out_of_neighborhood = 0;
    bool domain_violation = false;
};

RowPass run_rows(const ExperimentConfig& config, const NormalizerTable& table, std::uint64_t rep_index,
                 bool want_product) {
    const DistributionSpec& spec = config.spec;
    const FunctionSpec& fs = config.fs;
    const double mu = spec.mu();
    const bool degenerate = spec.sigma2() == 0.0;
    RandomStream stream = RandomStream::derive(config.master_seed, StreamPurpose::Replication, rep_index);
    RowPass pass;
    for (std::uint64_t k = 1; k <= config.n; ++k) {
        const double kd = static_cast<double>(k);
        const double s = row_sum(spec, k, stream, config.row_sampling);
        const double x = degenerate ? mu : s / kd;
        const double d = x - mu;
        if (fs.in_domain(x))
            pass.sum_f += eval(fs, x) - table.f_mu;
        else
            pass.domain_violation = true;
        if (!(std::abs(d) < fs.neighborhood_radius)) ++pass.out_of_neighborhood;
        pass.r1 += d * d - table.c[k - 1] / kd;
        pass.r2 += std::abs(d) * d * d;
        if (want_product) {
            if (!(s > 0.0))
                throw std::logic_error("nonpositive row sum " + std::to_string(s) + " at k = " + std::to_string(k) +
                                       " for a law labelled positive");
            pass.log_product += std::log(x / mu);
        }
    }
    return pass;
}

bool product_available(const DistributionSpec& spec) {
    return spec.positive_support() && spec.mu() > 0.0 && spec.sigma() > 0.0;
}

double log_product_statistic(const DistributionSpec& spec, std::uint64_t n, double log_product) {
    const double gamma = *spec.gamma();
    const double log_n = std::log(static_cast<double>(n));
    return (0.5 * gamma * gamma * log_n + log_product) / (gamma * std::sqrt(log_n));
}

}  // namespace

void validate(const ExperimentConfig& config) {
    if (config.n < 2) throw ConfigError("n", "must be >= 2 (a_1 = 0 makes the statistic undefined)");
    if (config.replications < 1) throw ConfigError("replications", "must be >= 1");
    const DiagnosticFlags& d = config.diagnostics;
    if (d.lindeberg) {
        if (!(d.lindeberg->r > 0.0)) throw ConfigError("diagnostics.lindeberg.r", "must be > 0");
        if (d.lindeberg->replications < 1) throw ConfigError("diagnostics.lindeberg.replications", "must be >= 1");
        for (std::uint64_t n : d.lindeberg->n_values)
            if (n < 2) throw ConfigError("diagnostics.lindeberg.n", "entries must be >= 2");
    }
    if (d.hsu_robbins) {
        if (!(d.hsu_robbins->t > 0.0)) throw ConfigError("diagnostics.hsu_robbins.t", "must be > 0");
        if (d.hsu_robbins->horizon < 1) throw ConfigError("diagnostics.hsu_robbins.N", "must be >= 1");
        if (d.hsu_robbins->replications < 1)
            throw ConfigError("diagnostics.hsu_robbins.replications", "must be >= 1");
    }
    if (d.rosenthal) {
        if (!(d.rosenthal->p > 2.0)) throw ConfigError("diagnostics.rosenthal.p", "must be > 2");
        if (d.rosenthal->n_values.empty()) throw ConfigError("diagnostics.rosenthal.n", "must be non-empty");
        if (d.rosenthal->replications < 1) throw ConfigError("diagnostics.rosenthal.replications", "must be >= 1");
    }
}

double row_sum(const DistributionSpec& spec, std::uint64_t k, RandomStream& stream) {
    if (const auto* p = std::get_if<PointMass>(&spec.family())) {
        stream.tally(k);
        return static_cast<double>(k) * p->value;
    }
    double s = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) s += sample(spec, stream);
    return s;
}

double gamma_variate(double shape, RandomStream& stream) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = stream.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.uniform_pos();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double row_sum(const DistributionSpec& spec, std::uint64_t k, RandomStream& stream, RowSampling mode) {
    if (mode == RowSampling::Summed) return row_sum(spec, k, stream);
    const double kd = static_cast<double>(k);
    const Family& family = spec.family();
    if (const auto* p = std::get_if<PointMass>(&family)) return kd * p->value;
    if (const auto* e = std::get_if<Exponential>(&family)) return gamma_variate(kd, stream) / e->rate;
    if (const auto* n = std::get_if<Normal>(&family)) return kd * n->mean + std::sqrt(kd) * n->sd * stream.normal();
    if (std::holds_alternative<Rademacher>(family)) {
        std::binomial_distribution<std::int64_t> heads(static_cast<std::int64_t>(k), 0.5);
        return 2.0 * static_cast<double>(heads(stream)) - kd;
    }
    return row_sum(spec, k, stream);
}

ReplicationResult replicate(const ExperimentConfig& config, const NormalizerTable& table, std::uint64_t rep_index) {
    const std::size_t idx = table.index_of(config.n);
    if (table.c.size() < config.n) throw PreconditionError("normalizer table shorter than n");
    const bool want_product =
        std::holds_alternative<LogProduct>(config.fs.kind) && product_available(config.spec);
    const RowPass pass = run_rows(config, table, rep_index, want_product);

    ReplicationResult result;
    result.rep_index = rep_index;
    const double center =
        config.centering == Centering::UseB ? table.b_correction[idx] : table.b_tilde_correction[idx];
    result.t_stat = pass.domain_violation ? std::numeric_limits<double>::quiet_NaN()
                                          : (pass.sum_f - center) / table.a[idx];
    result.domain_violation = pass.domain_violation;
    result.out_of_neighborhood_count = pass.out_of_neighborhood;
    if (want_product) result.product_stat = std::exp(log_product_statistic(config.spec, config.n, pass.log_product));
    if (config.diagnostics.remainders) {
        result.r1 = pass.r1;
        result.r2 = pass.r2;
    }
    return result;
}

double product_statistic(const ExperimentConfig& config, const NormalizerTable& table, std::uint64_t rep_index) {
    if (!product_available(config.spec))
        throw PreconditionError("product statistic needs a positive-support law with mu > 0 and sigma > 0");
    const RowPass pass = run_rows(config, table, rep_index, true);
    return std::exp(log_product_statistic(config.spec, config.n, pass.log_product));
}

std::pair<double, double> remainder_sums(const ExperimentConfig& config, const NormalizerTable& table,
                                         std::uint64_t rep_index) {
    if (table.c.size() < config.n) throw PreconditionError("normalizer table shorter than n");
    const RowPass pass = run_rows(config, table, rep_index, false);
    return {pass.r1, pass.r2};
}

std::vector<ReplicationResult> run_experiment(const ExperimentConfig& config, const NormalizerTable& table,
                                              unsigned threads) {
    validate(config);
    std::vector<ReplicationResult> results(config.replications);
    parallel_for(config.replications, threads, [&](std::uint64_t i) { results[i] = replicate(config, table, i); });
    return results;
}

std::vector<ReplicationResult> run_experiment(const ExperimentConfig& config, unsigned threads) {
    validate(config);
    const std::uint64_t grid[] = {config.n};
    return run_experiment(config, build_table(config.spec, config.fs, grid), threads);
}

MonteCarloEstimate lindeberg_value(const DistributionSpec& spec, std::uint64_t n, double r,
                                   std::uint64_t replications, std::uint64_t seed, RowSampling mode,
                                   unsigned threads) {
    if (!(r > 0.0)) throw PreconditionError("Lindeberg threshold r must be > 0");
    if (n < 2) throw PreconditionError("Lindeberg functional needs n >= 2");
    if (!(spec.sigma() > 0.0)) throw PreconditionError("Lindeberg functional needs sigma > 0");
    if (replications < 1) throw PreconditionError("replications must be >= 1");
    const double log_n = std::log(static_cast<double>(n));
    const double threshold = r * std::sqrt(log_n);
    std::vector<double> values(replications);
    parallel_for(replications, threads, [&](std::uint64_t rep) {
        RandomStream stream = RandomStream::derive(seed, StreamPurpose::Lindeberg, rep, n);
        double v = 0.0;
        for (std::uint64_t k = 1; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            const double z = (row_sum(spec, k, stream, mode) - kd * spec.mu()) / (spec.sigma() * kd);
            if (std::abs(z) > threshold) v += z * z;
        }
        values[rep] = v;
    });
    return mean_estimate(values, 1.0 / log_n);
}

std::vector<double> hsu_robbins_partial(const DistributionSpec& spec, double t, std::uint64_t horizon,
                                        std::uint64_t replications, std::uint64_t seed, RowSampling mode,
                                        unsigned threads) {
    if (!(t > 0.0)) throw PreconditionError("Hsu-Robbins threshold t must be > 0");
    if (replications < 1) throw PreconditionError("replications must be >= 1");
    // exceed[rep * horizon + (n-1)]
    std::vector<unsigned char> exceed(replications * horizon);
    parallel_for(replications, threads, [&](std::uint64_t rep) {
        RandomStream stream = RandomStream::derive(seed, StreamPurpose::HsuRobbins, rep);
        for (std::uint64_t n = 1; n <= horizon; ++n) {
            const double nd = static_cast<double>(n);
            const double mean = (row_sum(spec, n, stream, mode) - nd * spec.mu()) / nd;
            exceed[rep * horizon + n - 1] = std::abs(mean) > t;
        }
    });
    std::vector<double> partial(horizon);
    double running = 0.0;
    for (std::uint64_t n = 0; n < horizon; ++n) {
        std::uint64_t hits = 0;
        for (std::uint64_t rep = 0; rep < replications; ++rep) hits += exceed[rep * horizon + n];
        running += static_cast<double>(hits) / static_cast<double>(replications);
        partial[n] = running;
    }
    return partial;
}

std::vector<MonteCarloEstimate> hsu_robbins_terms(const DistributionSpec& spec, double t,
                                                  const std::vector<std::uint64_t>& grid,
                                                  std::uint64_t replications, std::uint64_t seed,
                                                  RowSampling mode, unsigned threads) {
    if (!(t > 0.0)) throw PreconditionError("Hsu-Robbins threshold t must be > 0");
    if (replications < 1) throw PreconditionError("replications must be >= 1");
    std::vector<MonteCarloEstimate> out;
    for (std::uint64_t n : grid) {
        if (n < 1) throw PreconditionError("grid entries must be >= 1");
        std::vector<double> hits(replications);
        const double nd = static_cast<double>(n);
        parallel_for(replications, threads, [&](std::uint64_t rep) {
            RandomStream stream = RandomStream::derive(seed, StreamPurpose::HsuRobbins, rep, n);
            hits[rep] = std::abs((row_sum(spec, n, stream, mode) - nd * spec.mu()) / nd) > t ? 1.0 : 0.0;
        });
        out.push_back(mean_estimate(hits, 1.0));
    }
    return out;
}

namespace {

double rosenthal_denominator(const DistributionSpec& spec, std::uint64_t n, double p) {
    const std::optional<double> abs_p = central_abs_moment(spec, p);
    if (!abs_p) throw PreconditionError(spec.family_name() + " has no finite moment of order p");
    const double nd = static_cast<double>(n);
    return nd * *abs_p + std::pow(nd, 0.5 * p) * std::pow(spec.sigma2(), 0.5 * p);
}

}  // namespace

MonteCarloEstimate rosenthal_ratio(const DistributionSpec& spec, std::uint64_t n, double p,
                                   std::uint64_t replications, std::uint64_t seed, RowSampling mode,
                                   unsigned threads) {
    if (!(p > 2.0)) throw PreconditionError("Rosenthal exponent p must be > 2");
    if (n < 1 || replications < 1) throw PreconditionError("n and replications must be >= 1");
    const double denominator = rosenthal_denominator(spec, n, p);
    std::vector<double> values(replications);
    const double nd = static_cast<double>(n);
    parallel_for(replications, threads, [&](std::uint64_t rep) {
        RandomStream stream = RandomStream::derive(seed, StreamPurpose::Rosenthal, rep, n);
        values[rep] = std::pow(std::abs(row_sum(spec, n, stream, mode) - nd * spec.mu()), p);
    });
    if (denominator == 0.0) return {0.0, 0.0, replications};  // point mass: numerator is 0 too
    return mean_estimate(values, 1.0 / denominator);
}

double rosenthal_ratio_exact(const DistributionSpec& spec, std::uint64_t n, double p) {
    if (!(p > 2.0)) throw PreconditionError("Rosenthal exponent p must be > 2");
    if (n < 1) throw PreconditionError("n must be >= 1");
    const double denominator = rosenthal_denominator(spec, n, p);
    if (denominator == 0.0) return 0.0;
    const double nd = static_cast<double>(n);
    if (p == 4.0) {
        const double m2 = spec.sigma2();
        const double m4 = *central_abs_moment(spec, 4.0);
        return (nd * m4 + 3.0 * nd * (nd - 1.0) * m2 * m2) / denominator;
    }
    if (std::holds_alternative<Rademacher>(spec.family())) {
        // S_n = 2j - n with j ~ Binomial(n, 1/2)
        double moment = 0.0;
        const double log_half_n = nd * std::log(0.5);
        for (std::uint64_t j = 0; j <= n; ++j) {
            const double jd = static_cast<double>(j);
            const double s = std::abs(2.0 * jd - nd);
            if (s == 0.0) continue;
            const double log_weight =
                std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) + log_half_n;
            moment += std::exp(log_weight + p * std::log(s));
        }
        return moment / denominator;
    }
    throw PreconditionError("exact Rosenthal ratio is available for p = 4 or the Rademacher law");
}

}  // namespace trilab
