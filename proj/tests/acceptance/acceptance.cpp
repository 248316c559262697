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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "trilab/cli.hpp"
#include "trilab/engine.hpp"
#include "trilab/normalizers.hpp"
#include "trilab/stats.hpp"

using namespace trilab;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

ExperimentConfig experiment(DistributionSpec spec, FunctionSpec fs, std::uint64_t n, std::uint64_t reps,
                            Centering centering, RowSampling mode) {
    ExperimentConfig c;
    c.spec = std::move(spec);
    c.fs = std::move(fs);
    c.n = n;
    c.replications = reps;
    c.master_seed = kSeed;
    c.centering = centering;
    c.row_sampling = mode;
    return c;
}

std::vector<double> column(const std::vector<ReplicationResult>& results,
                           const std::function<double(const ReplicationResult&)>& pick) {
    std::vector<double> out;
    out.reserve(results.size());
    for (const auto& r : results) out.push_back(pick(r));
    return out;
}

double iqr(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(xs.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, xs.size() - 1);
        return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
    };
    return quantile(0.75) - quantile(0.25);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Linear f: t_stat is the Lindeberg array statistic, limit N(0, 1).
Outcome criterion1() {
    const auto spec = make_spec(Exponential{1.0});
    const auto t = column(run_experiment(experiment(spec, make_linear(1.0), 1000, 10000, Centering::UseB,
                                                    RowSampling::Summed),
                                         worker_count()),
                          [](const ReplicationResult& r) { return r.t_stat; });
    const double var = summarize(t).variance;
    const double ks = ks_one_sample(t, 0.0, 1.0).statistic;
    return {var >= 0.85 && var <= 1.15 && ks < 0.03,
            "var=" + fmt("%.4f", var) + " (need [0.85,1.15]), KS=" + fmt("%.4f", ks) + " (need < 0.03)"};
}

// 2. and 3. share the log-product runs: f = log with centering b for the sum statistic,
// and the product statistic from the log-product kind with centering b-tilde.
struct LogRuns {
    std::vector<double> t_small;
    std::vector<double> t_large;
    std::vector<double> logprod_small;
    std::vector<double> logprod_large;
    double max_identity_gap = 0.0;
};

LogRuns log_runs() {
    const auto spec = make_spec(Exponential{1.0});
    LogRuns runs;
    for (std::uint64_t n : {200, 2000}) {
        const auto sum_form = run_experiment(
            experiment(spec, make_natural_log(1.0), n, 5000, Centering::UseB, RowSampling::ExactLaw), worker_count());
        const auto prod_form = run_experiment(
            experiment(spec, make_log_product(1.0), n, 5000, Centering::UseBTilde, RowSampling::ExactLaw),
            worker_count());
        std::vector<double> logprod;
        for (const auto& r : prod_form) {
            const double lp = std::log(r.product_stat.value());
            runs.max_identity_gap = std::max(runs.max_identity_gap, std::abs(lp - r.t_stat / spec.sigma()));
            logprod.push_back(lp);
        }
        auto t = column(sum_form, [](const ReplicationResult& r) { return r.t_stat; });
        (n == 200 ? runs.t_small : runs.t_large) = std::move(t);
        (n == 200 ? runs.logprod_small : runs.logprod_large) = std::move(logprod);
    }
    return runs;
}

Outcome criterion2(const LogRuns& runs) {
    const double ks_small = ks_one_sample(runs.t_small, 0.0, 1.0).statistic;
    const double ks_large = ks_one_sample(runs.t_large, 0.0, 1.0).statistic;
    const Summary s = summarize(runs.t_large);
    return {ks_large < 0.06 && ks_large < ks_small,
            "KS(n=2000)=" + fmt("%.4f", ks_large) + " (need < 0.06), KS(n=200)=" + fmt("%.4f", ks_small) +
                " (need > KS(n=2000)); mean=" + fmt("%.4f", s.mean) + " var=" + fmt("%.4f", s.variance) +
                " at n=2000"};
}

Outcome criterion3(const LogRuns& runs) {
    const double ks_small = ks_one_sample(runs.logprod_small, 0.0, 1.0).statistic;
    const double ks_large = ks_one_sample(runs.logprod_large, 0.0, 1.0).statistic;
    const bool identity = runs.max_identity_gap <= 1e-10;
    return {identity && ks_large < 0.06 && ks_large < ks_small,
            "max |log(product) - sum form|=" + fmt("%.3g", runs.max_identity_gap) + " (need <= 1e-10); KS(n=2000)=" +
                fmt("%.4f", ks_large) + " (need < 0.06), KS(n=200)=" + fmt("%.4f", ks_small) +
                " (need > KS(n=2000))"};
}

Outcome criterion4() {
    const std::vector<std::uint64_t> grid{1000, 10000, 100000, 1000000};
    bool pass = true;
    std::string detail;
    for (const auto& [name, spec] : {std::pair{"Exponential(1)", make_spec(Exponential{1.0})},
                                     std::pair{"Normal(0,1)", make_spec(Normal{0.0, 1.0})}}) {
        const auto t = build_table(spec, make_quadratic(1.0, 0.0, 0.0, spec.mu()), grid);
        std::string qs;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double qr = t.q[i] / t.a[i];
            const double gap = std::abs(t.b_tilde[i] - t.b[i]) / t.a[i];
            qs += (i ? "," : "") + fmt("%.5f", qr);
            if (i > 0) {
                pass = pass && qr < t.q[i - 1] / t.a[i - 1];
                pass = pass && gap < std::abs(t.b_tilde[i - 1] - t.b[i - 1]) / t.a[i - 1];
            }
        }
        detail += std::string(detail.empty() ? "" : "; ") + name + " Q/sqrt(log n)=" + qs;
    }
    return {pass, detail};
}

Outcome criterion5() {
    std::vector<double> ratios;
    for (std::uint64_t m = 2; m <= 8; ++m) ratios.push_back(counterexample_q_ratio(0.5, m).ratio);
    bool increasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
    const double growth = ratios.back() / ratios.front();
    constexpr double kOracleM2 = 1.4113198880747901;  // arbitrary-precision brute force over k <= 286
    const double oracle_gap = std::abs(ratios.front() - kOracleM2);
    return {increasing && growth > 3.0 && oracle_gap <= 1e-6,
            std::string("strictly increasing=") + (increasing ? "yes" : "no") + ", ratio(8)/ratio(2)=" +
                fmt("%.4f", growth) + " (need > 3), ratio(2)=" + fmt("%.10f", ratios.front()) + " vs oracle " +
                fmt("%.10f", kOracleM2) + " (gap " + fmt("%.2g", oracle_gap) + ", need <= 1e-6)"};
}

Outcome criterion6() {
    const auto spec = make_spec(Exponential{1.0});
    double iqr_r1[2];
    double iqr_r2[2];
    int i = 0;
    for (std::uint64_t n : {1000, 10000}) {
        auto c = experiment(spec, make_linear(1.0), n, 2000, Centering::UseB, RowSampling::ExactLaw);
        c.diagnostics.remainders = true;
        const auto results = run_experiment(c, worker_count());
        iqr_r1[i] = iqr(column(results, [](const ReplicationResult& r) { return *r.r1; }));
        iqr_r2[i] = iqr(column(results, [](const ReplicationResult& r) { return *r.r2; }));
        ++i;
    }
    auto within = [](double a, double b) { return std::max(a, b) / std::min(a, b) <= 1.5; };
    return {within(iqr_r1[0], iqr_r1[1]) && within(iqr_r2[0], iqr_r2[1]),
            "IQR r1 " + fmt("%.4f", iqr_r1[0]) + " -> " + fmt("%.4f", iqr_r1[1]) + ", IQR r2 " +
                fmt("%.4f", iqr_r2[0]) + " -> " + fmt("%.4f", iqr_r2[1]) + " (n=1e3 -> 1e4, need ratio <= 1.5)"};
}

Outcome criterion7() {
    const auto spec = make_spec(Exponential{1.0});
    const auto small = lindeberg_value(spec, 100, 0.5, 10000, kSeed, RowSampling::ExactLaw, worker_count());
    const auto large = lindeberg_value(spec, 10000, 0.5, 10000, kSeed, RowSampling::ExactLaw, worker_count());
    const bool factor = large.value * 2.0 <= small.value;
    const bool separated = large.value + 2.0 * large.std_error < small.value - 2.0 * small.std_error;
    return {factor && separated, "L(1e2)=" + fmt("%.5f", small.value) + "+-" + fmt("%.5f", small.std_error) +
                                     ", L(1e4)=" + fmt("%.5f", large.value) + "+-" + fmt("%.5f", large.std_error) +
                                     " (need factor >= 2 and disjoint 2-SE intervals)"};
}

Outcome criterion8() {
    const auto terms = hsu_robbins_terms(make_spec(Exponential{1.0}), 0.5, {20, 200}, 100000, kSeed,
                                         RowSampling::ExactLaw, worker_count());
    return {terms[1].value < terms[0].value / 10.0,
            "P(n=20)=" + fmt("%.5f", terms[0].value) + ", P(n=200)=" + fmt("%.6f", terms[1].value) +
                " (need < one tenth)"};
}

Outcome criterion9() {
    const auto rad = make_spec(Rademacher{});
    double worst = 0.0;
    double largest = 0.0;
    for (double n : {2.0, 8.0, 32.0, 128.0}) {
        const double got = rosenthal_ratio_exact(rad, static_cast<std::uint64_t>(n), 4.0);
        worst = std::max(worst, std::abs(got - (3.0 * n * n - 2.0 * n) / (n * n + n)));
        largest = std::max(largest, got);
    }
    return {worst <= 1e-12 && largest <= 3.0,
            "max deviation=" + fmt("%.3g", worst) + " (need <= 1e-12), max ratio=" + fmt("%.6f", largest)};
}

Outcome criterion10() {
    const std::string text = R"({"distribution": {"family": "exponential", "rate": 1},
        "function": {"kind": "log_product"}, "n": 300, "replications": 400, "seed": 42,
        "diagnostics": {"remainders": true,
          "lindeberg": {"r": 0.5, "n": [100], "replications": 300},
          "hsu_robbins": {"t": 0.5, "N": 30, "grid": [20], "replications": 1000},
          "rosenthal": {"p": 4, "n": [2, 8], "replications": 500}}})";
    const auto root = std::filesystem::temp_directory_path() / "trilab_acceptance_determinism";
    std::filesystem::remove_all(root);
    std::vector<RunManifest> manifests;
    std::vector<std::filesystem::path> dirs;
    for (unsigned threads : {1u, 4u, 1u, 4u}) {
        dirs.push_back(root / ("run" + std::to_string(dirs.size()) + "_t" + std::to_string(threads)));
        manifests.push_back(run_simulate(parse_config(text), dirs.back(), threads));
    }
    bool same = true;
    std::size_t compared = 0;
    for (std::size_t run = 1; run < manifests.size(); ++run) {
        same = same && manifests[run].config_digest == manifests[0].config_digest &&
               manifests[run].outputs.size() == manifests[0].outputs.size();
        for (std::size_t i = 0; same && i < manifests[0].outputs.size(); ++i) {
            same = same && slurp(dirs[run] / manifests[run].outputs[i].path) ==
                               slurp(dirs[0] / manifests[0].outputs[i].path);
            ++compared;
        }
    }
    std::filesystem::remove_all(root);
    return {same, std::to_string(compared) + " artifact comparisons over 4 runs (threads 1,4,1,4)"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Outcome()>& check) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("criterion %2d %s: %s | %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
        std::fflush(stdout);
    };
    report(1, "linear f, Exponential(1), n=1000, 1e4 reps", criterion1);
    LogRuns runs;
    bool have_runs = false;
    auto ensure_runs = [&]() -> const LogRuns& {
        if (!have_runs) {
            runs = log_runs();
            have_runs = true;
        }
        return runs;
    };
    report(2, "log f, centering b_n, n=2000 vs 200, 5000 reps", [&] { return criterion2(ensure_runs()); });
    report(3, "product statistic identity and lognormal limit", [&] { return criterion3(ensure_runs()); });
    report(4, "Q_n and b-tilde gap decay, exact", criterion4);
    report(5, "counterexample ratio divergence", criterion5);
    report(6, "remainder sums O_P(1) proxy", criterion6);
    report(7, "Lindeberg functional decay", criterion7);
    report(8, "Hsu-Robbins term decay", criterion8);
    report(9, "Rosenthal exact ratio, Rademacher p=4", criterion9);
    report(10, "determinism across runs and thread counts", criterion10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
