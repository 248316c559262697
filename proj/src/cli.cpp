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


#include "trilab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "trilab/errors.hpp"
#include "trilab/io.hpp"
#include "trilab/stats.hpp"

namespace trilab {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(join(path, key), "unknown key");
    }
}

const json& field(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
    return *it;
}

double get_double(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
    return v.get<double>();
}

double get_double_or(const json& obj, const char* key, const std::string& path, double fallback) {
    return obj.contains(key) ? get_double(obj, key, path) : fallback;
}

std::uint64_t as_uint(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) throw ConfigError(where, "must be non-negative");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(where, "expected a non-negative integer");
}

std::uint64_t get_uint(const json& obj, const char* key, const std::string& path) {
    return as_uint(field(obj, key, path), join(path, key));
}

std::vector<std::uint64_t> get_uint_list(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    const std::string where = join(path, key);
    if (!v.is_array()) throw ConfigError(where, "expected an array of integers");
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_uint(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

// Re-labels ConfigErrors from the core with the section prefix.
template <class F>
auto with_prefix(const std::string& prefix, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        const auto colon = what.find(": ");
        if (e.field().rfind(prefix + ".", 0) == 0) throw;
        throw ConfigError(join(prefix, e.field()), colon == std::string::npos ? what : what.substr(colon + 2));
    }
}

DistributionSpec parse_distribution(const json& d) {
    const std::string path = "distribution";
    const std::string family = get_string(d, "family", path);
    return with_prefix(path, [&]() -> DistributionSpec {
        if (family == "point_mass") {
            check_keys(d, {"family", "value"}, path);
            return make_spec(PointMass{get_double(d, "value", path)});
        }
        if (family == "rademacher") {
            check_keys(d, {"family"}, path);
            return make_spec(Rademacher{});
        }
        if (family == "exponential") {
            check_keys(d, {"family", "rate"}, path);
            return make_spec(Exponential{get_double(d, "rate", path)});
        }
        if (family == "uniform") {
            check_keys(d, {"family", "lo", "hi"}, path);
            return make_spec(Uniform{get_double(d, "lo", path), get_double(d, "hi", path)});
        }
        if (family == "normal") {
            check_keys(d, {"family", "mean", "sd"}, path);
            return make_spec(Normal{get_double(d, "mean", path), get_double(d, "sd", path)});
        }
        if (family == "lattice_counterexample") {
            check_keys(d, {"family", "epsilon"}, path);
            return make_spec(LatticeCounterexample{get_double(d, "epsilon", path)});
        }
        if (family == "finite_discrete") {
            check_keys(d, {"family", "atoms"}, path);
            const json& atoms = field(d, "atoms", path);
            if (!atoms.is_array()) throw ConfigError("atoms", "expected an array");
            FiniteDiscrete fd;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                const std::string where = path + ".atoms[" + std::to_string(i) + "]";
                check_keys(atoms[i], {"value", "probability"}, where);
                fd.atoms.push_back({get_double(atoms[i], "value", where), get_double(atoms[i], "probability", where)});
            }
            return make_spec(std::move(fd));
        }
        throw ConfigError("family", "unknown family '" + family + "'");
    });
}

FunctionSpec parse_function(const json& f, const DistributionSpec& spec) {
    const std::string path = "function";
    const std::string kind = get_string(f, "kind", path);
    const double mu = spec.mu();
    return with_prefix(path, [&]() -> FunctionSpec {
        if (kind == "natural_log") {
            check_keys(f, {"kind", "radius"}, path);
            return make_natural_log(mu, get_double_or(f, "radius", path, 0.0));
        }
        if (kind == "log_product") {
            check_keys(f, {"kind", "radius"}, path);
            return make_log_product(mu, get_double_or(f, "radius", path, 0.0));
        }
        if (kind == "quadratic") {
            check_keys(f, {"kind", "a", "b", "c"}, path);
            return make_quadratic(get_double(f, "a", path), get_double_or(f, "b", path, 0.0),
                                  get_double_or(f, "c", path, 0.0), mu);
        }
        if (kind == "linear") {
            check_keys(f, {"kind"}, path);
            return make_linear(mu);
        }
        if (kind == "cubic_window") {
            check_keys(f, {"kind", "coeffs", "lo", "hi", "radius"}, path);
            const json& c = field(f, "coeffs", path);
            if (!c.is_array() || c.size() != 4 || !std::all_of(c.begin(), c.end(), [](const json& x) { return x.is_number(); }))
                throw ConfigError("coeffs", "expected four numbers");
            return make_cubic_window({c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), c[3].get<double>()},
                                     get_double(f, "lo", path), get_double(f, "hi", path), mu,
                                     get_double(f, "radius", path));
        }
        throw ConfigError("kind", "unknown function kind '" + kind + "'");
    });
}

DiagnosticFlags parse_diagnostics(const json& d) {
    const std::string path = "diagnostics";
    check_keys(d, {"remainders", "lindeberg", "hsu_robbins", "rosenthal"}, path);
    DiagnosticFlags flags;
    if (d.contains("remainders")) {
        if (!d["remainders"].is_boolean()) throw ConfigError("diagnostics.remainders", "expected a boolean");
        flags.remainders = d["remainders"].get<bool>();
    }
    if (d.contains("lindeberg")) {
        const json& l = d["lindeberg"];
        const std::string p = path + ".lindeberg";
        check_keys(l, {"r", "n", "replications"}, p);
        flags.lindeberg = LindebergOptions{get_double(l, "r", p), get_uint_list(l, "n", p), get_uint(l, "replications", p)};
    }
    if (d.contains("hsu_robbins")) {
        const json& h = d["hsu_robbins"];
        const std::string p = path + ".hsu_robbins";
        check_keys(h, {"t", "N", "grid", "replications"}, p);
        HsuRobbinsOptions options;
        options.t = get_double(h, "t", p);
        options.horizon = get_uint(h, "N", p);
        if (h.contains("grid")) options.term_grid = get_uint_list(h, "grid", p);
        options.replications = get_uint(h, "replications", p);
        flags.hsu_robbins = options;
    }
    if (d.contains("rosenthal")) {
        const json& r = d["rosenthal"];
        const std::string p = path + ".rosenthal";
        check_keys(r, {"p", "n", "replications"}, p);
        flags.rosenthal = RosenthalOptions{get_double(r, "p", p), get_uint_list(r, "n", p), get_uint(r, "replications", p)};
    }
    return flags;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Writes `body` to out_dir/name and records it with `rows` data rows.
void write_artifact(RunManifest& manifest, const std::filesystem::path& out_dir, const std::string& name,
                    const std::string& file, const std::string& body, std::size_t rows) {
    const std::filesystem::path target = out_dir / file;
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + target.string() + " for writing");
    out << body;
    out.close();
    if (!out) throw std::ios_base::failure("failed writing " + target.string());
    manifest.outputs.push_back({name, file, rows});
}

void write_manifest(RunManifest& manifest, const std::filesystem::path& out_dir) {
    manifest.finished = utc_now();
    nlohmann::ordered_json j;
    j["config_digest"] = manifest.config_digest;
    j["tool_version"] = manifest.tool_version;
    j["started"] = manifest.started;
    j["finished"] = manifest.finished;
    j["outputs"] = nlohmann::ordered_json::array();
    for (const ArtifactRecord& a : manifest.outputs)
        j["outputs"].push_back({{"name", a.name}, {"path", a.path}, {"rows", a.rows}});
    std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write manifest.json");
    out << j.dump(2) << '\n';
}

RunManifest start_run(const AnalysisPlan& plan, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunManifest manifest;
    manifest.config_digest = fnv1a_hex(plan.canonical);
    manifest.started = utc_now();
    return manifest;
}

const DistributionSpec& need_spec(const AnalysisPlan& plan) {
    if (!plan.spec) throw ConfigError("distribution", "missing required field");
    return *plan.spec;
}

std::uint64_t need_seed(const AnalysisPlan& plan) {
    if (!plan.seed) throw ConfigError("seed", "missing required field");
    return *plan.seed;
}

void write_diagnostics(RunManifest& manifest, const std::filesystem::path& out_dir, const DistributionSpec& spec,
                       const DiagnosticFlags& flags, std::uint64_t seed, RowSampling mode, std::uint64_t default_n,
                       unsigned threads) {
    if (flags.lindeberg) {
        std::vector<std::uint64_t> ns = flags.lindeberg->n_values;
        if (ns.empty() && default_n >= 2) ns.push_back(default_n);
        if (ns.empty()) throw ConfigError("diagnostics.lindeberg.n", "missing required field");
        std::ostringstream csv;
        csv << "n,r,value,std_error,replications\n";
        for (std::uint64_t n : ns) {
            const MonteCarloEstimate est =
                lindeberg_value(spec, n, flags.lindeberg->r, flags.lindeberg->replications, seed, mode, threads);
            csv << n << ',' << format_double(flags.lindeberg->r) << ',' << format_double(est.value) << ','
                << format_double(est.std_error) << ',' << est.replications << '\n';
        }
        write_artifact(manifest, out_dir, "lindeberg", "lindeberg.csv", csv.str(), ns.size());
    }
    if (flags.hsu_robbins) {
        const HsuRobbinsOptions& h = flags.hsu_robbins.value();
        const std::vector<double> partial =
            hsu_robbins_partial(spec, h.t, h.horizon, h.replications, seed, mode, threads);
        std::ostringstream csv;
        csv << "n,partial_sum\n";
        for (std::size_t i = 0; i < partial.size(); ++i) csv << (i + 1) << ',' << format_double(partial[i]) << '\n';
        write_artifact(manifest, out_dir, "hsu_robbins", "hsu_robbins.csv", csv.str(), partial.size());
        if (!h.term_grid.empty()) {
            const auto terms = hsu_robbins_terms(spec, h.t, h.term_grid, h.replications, seed, mode, threads);
            std::ostringstream tcsv;
            tcsv << "n,p_hat,std_error,replications\n";
            for (std::size_t i = 0; i < terms.size(); ++i)
                tcsv << h.term_grid[i] << ',' << format_double(terms[i].value) << ','
                     << format_double(terms[i].std_error) << ',' << terms[i].replications << '\n';
            write_artifact(manifest, out_dir, "hsu_robbins_terms", "hsu_robbins_terms.csv", tcsv.str(), terms.size());
        }
    }
    if (flags.rosenthal) {
        const RosenthalOptions& r = flags.rosenthal.value();
        std::ostringstream csv;
        csv << "n,p,ratio,std_error,replications,exact_ratio\n";
        for (std::uint64_t n : r.n_values) {
            const MonteCarloEstimate est = rosenthal_ratio(spec, n, r.p, r.replications, seed, mode, threads);
            std::string exact;
            try {
                exact = format_double(rosenthal_ratio_exact(spec, n, r.p));
            } catch (const PreconditionError&) {
            }
            csv << n << ',' << format_double(r.p) << ',' << format_double(est.value) << ','
                << format_double(est.std_error) << ',' << est.replications << ',' << exact << '\n';
        }
        write_artifact(manifest, out_dir, "rosenthal", "rosenthal.csv", csv.str(), r.n_values.size());
    }
}

}  // namespace

AnalysisPlan parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    check_keys(root,
               {"distribution", "function", "n", "replications", "seed", "centering", "row_sampling",
                "normalizer_grid", "diagnostics", "counterexample"},
               "");
    AnalysisPlan plan;
    if (root.contains("distribution")) plan.spec = parse_distribution(root["distribution"]);
    if (root.contains("function")) {
        if (!plan.spec) throw ConfigError("function", "requires a distribution section");
        plan.fs = parse_function(root["function"], *plan.spec);
    }
    if (root.contains("n")) {
        plan.n = get_uint(root, "n", "");
        if (*plan.n < 2) throw ConfigError("n", "must be >= 2: a_1 = 0 makes the statistic undefined");
    }
    if (root.contains("replications")) {
        plan.replications = get_uint(root, "replications", "");
        if (*plan.replications < 1) throw ConfigError("replications", "must be >= 1");
    }
    if (root.contains("seed")) plan.seed = get_uint(root, "seed", "");
    if (root.contains("centering")) {
        const std::string c = get_string(root, "centering", "");
        if (c == "b")
            plan.centering = Centering::UseB;
        else if (c == "b_tilde")
            plan.centering = Centering::UseBTilde;
        else
            throw ConfigError("centering", "expected \"b\" or \"b_tilde\"");
    }
    if (root.contains("row_sampling")) {
        const std::string r = get_string(root, "row_sampling", "");
        if (r == "summed")
            plan.row_sampling = RowSampling::Summed;
        else if (r == "exact_law")
            plan.row_sampling = RowSampling::ExactLaw;
        else
            throw ConfigError("row_sampling", "expected \"summed\" or \"exact_law\"");
    }
    if (root.contains("normalizer_grid")) {
        plan.normalizer_grid = get_uint_list(root, "normalizer_grid", "");
        for (std::uint64_t n : plan.normalizer_grid)
            if (n < 1) throw ConfigError("normalizer_grid", "entries must be >= 1");
    }
    if (root.contains("diagnostics")) plan.diagnostics = parse_diagnostics(root["diagnostics"]);
    if (root.contains("counterexample")) {
        const json& c = root["counterexample"];
        check_keys(c, {"epsilon", "M_min", "M_max"}, "counterexample");
        CounterexampleOptions options;
        options.epsilon = get_double(c, "epsilon", "counterexample");
        if (!(options.epsilon > 0.0)) throw ConfigError("counterexample.epsilon", "must be > 0");
        options.m_min = c.contains("M_min") ? get_uint(c, "M_min", "counterexample") : 2;
        options.m_max = get_uint(c, "M_max", "counterexample");
        if (options.m_min < 2) throw ConfigError("counterexample.M_min", "must be >= 2");
        if (options.m_max < options.m_min) throw ConfigError("counterexample.M_max", "must be >= M_min");
        plan.counterexample = options;
    }
    // Validate diagnostics ranges through the engine rules.
    ExperimentConfig probe;
    probe.diagnostics = plan.diagnostics;
    probe.n = 2;
    validate(probe);
    plan.canonical = root.dump();
    return plan;
}

void override_seed(AnalysisPlan& plan, std::uint64_t seed) {
    plan.seed = seed;
    json root = json::parse(plan.canonical);
    root["seed"] = seed;
    plan.canonical = root.dump();
}

ExperimentConfig experiment_config(const AnalysisPlan& plan) {
    ExperimentConfig config;
    config.spec = need_spec(plan);
    if (!plan.fs) throw ConfigError("function", "missing required field");
    if (!plan.n) throw ConfigError("n", "missing required field");
    if (!plan.replications) throw ConfigError("replications", "missing required field");
    config.fs = *plan.fs;
    config.n = *plan.n;
    config.replications = *plan.replications;
    config.master_seed = need_seed(plan);
    config.centering = plan.centering;
    config.row_sampling = plan.row_sampling;
    config.diagnostics = plan.diagnostics;
    validate(config);
    return config;
}

RunManifest run_simulate(const AnalysisPlan& plan, const std::filesystem::path& out_dir, unsigned threads) {
    const ExperimentConfig config = experiment_config(plan);
    RunManifest manifest = start_run(plan, out_dir);

    std::set<std::uint64_t> grid(plan.normalizer_grid.begin(), plan.normalizer_grid.end());
    for (std::uint64_t p = 10; p < config.n; p *= 10) grid.insert(p);
    grid.insert(config.n);
    const std::vector<std::uint64_t> grid_vec(grid.begin(), grid.end());
    const NormalizerTable table = build_table(config.spec, config.fs, grid_vec);
    {
        std::ostringstream csv;
        write_normalizer_csv(table, csv);
        write_artifact(manifest, out_dir, "normalizers", "normalizers.csv", csv.str(), grid_vec.size());
    }

    const std::vector<ReplicationResult> results = run_experiment(config, table, threads);
    std::vector<double> t_stats;
    t_stats.reserve(results.size());
    {
        std::ostringstream csv;
        csv << kReplicationColumns << '\n';
        for (const ReplicationResult& r : results) {
            csv << r.rep_index << ',' << format_double(r.t_stat) << ',' << format_optional(r.product_stat) << ','
                << format_optional(r.r1) << ',' << format_optional(r.r2) << ',' << r.out_of_neighborhood_count << ','
                << (r.domain_violation ? 1 : 0) << '\n';
            t_stats.push_back(r.t_stat);
        }
        write_artifact(manifest, out_dir, "replications", "replications.csv", csv.str(), results.size());
    }

    const double target_sd = config.spec.sigma() * std::abs(eval_d1(config.fs, config.spec.mu()));
    const auto finite = std::count_if(t_stats.begin(), t_stats.end(), [](double x) { return std::isfinite(x); });
    if (finite >= 2) {
        const bool testable = target_sd > 0.0 && finite >= 10;
        const GofReport report = goodness_of_fit(t_stats, 0.0, testable ? target_sd : 0.0);
        write_artifact(manifest, out_dir, "gof", "gof.json", gof_to_json(report), 1);
        if (!report.qq.empty()) {
            std::ostringstream csv;
            csv << "theoretical,empirical\n";
            for (const auto& [theoretical, empirical] : report.qq)
                csv << format_double(theoretical) << ',' << format_double(empirical) << '\n';
            write_artifact(manifest, out_dir, "qq", "qq.csv", csv.str(), report.qq.size());
        }
    }

    write_diagnostics(manifest, out_dir, config.spec, config.diagnostics, config.master_seed, config.row_sampling,
                      config.n, threads);
    write_manifest(manifest, out_dir);
    return manifest;
}

RunManifest run_normalizers(const AnalysisPlan& plan, const std::filesystem::path& out_dir) {
    const DistributionSpec& spec = need_spec(plan);
    if (!plan.fs) throw ConfigError("function", "missing required field");
    std::set<std::uint64_t> grid(plan.normalizer_grid.begin(), plan.normalizer_grid.end());
    if (plan.n) grid.insert(*plan.n);
    if (grid.empty()) throw ConfigError("normalizer_grid", "missing required field");
    const std::vector<std::uint64_t> grid_vec(grid.begin(), grid.end());
    RunManifest manifest = start_run(plan, out_dir);
    const NormalizerTable table = build_table(spec, *plan.fs, grid_vec);
    std::ostringstream csv;
    write_normalizer_csv(table, csv);
    write_artifact(manifest, out_dir, "normalizers", "normalizers.csv", csv.str(), grid_vec.size());
    write_manifest(manifest, out_dir);
    return manifest;
}

RunManifest run_counterexample(const AnalysisPlan& plan, const std::filesystem::path& out_dir) {
    if (!plan.counterexample) throw ConfigError("counterexample", "missing required field");
    const CounterexampleOptions& c = *plan.counterexample;
    RunManifest manifest = start_run(plan, out_dir);
    std::ostringstream csv;
    csv << kCounterexampleColumns << '\n';
    for (std::uint64_t m = c.m_min; m <= c.m_max; ++m) {
        const CounterexamplePoint point = counterexample_q_ratio(c.epsilon, m);
        csv << m << ',' << format_double(point.log_n) << ',' << format_double(point.q) << ','
            << format_double(point.ratio) << '\n';
    }
    write_artifact(manifest, out_dir, "counterexample", "counterexample.csv", csv.str(), c.m_max - c.m_min + 1);
    write_manifest(manifest, out_dir);
    return manifest;
}

RunManifest run_diagnostics(const AnalysisPlan& plan, const std::filesystem::path& out_dir, unsigned threads) {
    const DistributionSpec& spec = need_spec(plan);
    const std::uint64_t seed = need_seed(plan);
    const DiagnosticFlags& flags = plan.diagnostics;
    if (!flags.lindeberg && !flags.hsu_robbins && !flags.rosenthal)
        throw ConfigError("diagnostics", "enable at least one of lindeberg, hsu_robbins, rosenthal");
    RunManifest manifest = start_run(plan, out_dir);
    write_diagnostics(manifest, out_dir, spec, flags, seed, plan.row_sampling, plan.n.value_or(0), threads);
    write_manifest(manifest, out_dir);
    return manifest;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for sums of a function of independent normalized row sums"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub, bool parallel) {
        sub->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        if (parallel) sub->add_option("--threads", threads, "worker threads (does not affect results)")->capture_default_str();
    };
    CLI::App* simulate = app.add_subcommand("simulate", "run replications, goodness of fit and enabled diagnostics");
    CLI::App* normalizers = app.add_subcommand("normalizers", "tabulate a_n, b_n, b~_n, Q_n, Q~_n");
    CLI::App* counterexample = app.add_subcommand("counterexample", "Q_n / sqrt(log n) along the counterexample breakpoints");
    CLI::App* diagnostics = app.add_subcommand("diagnostics", "Lindeberg, Hsu-Robbins and Rosenthal checks");
    add_common(simulate, true);
    add_common(normalizers, false);
    add_common(counterexample, false);
    add_common(diagnostics, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw std::ios_base::failure("cannot read " + config_path);
        std::stringstream text;
        text << in.rdbuf();
        AnalysisPlan plan = parse_config(text.str());
        if (seed) override_seed(plan, *seed);

        RunManifest manifest;
        if (simulate->parsed())
            manifest = run_simulate(plan, out_dir, threads);
        else if (normalizers->parsed())
            manifest = run_normalizers(plan, out_dir);
        else if (counterexample->parsed())
            manifest = run_counterexample(plan, out_dir);
        else
            manifest = run_diagnostics(plan, out_dir, threads);
        for (const ArtifactRecord& a : manifest.outputs)
            std::cout << a.name << ": " << (std::filesystem::path(out_dir) / a.path).string() << " (" << a.rows
                      << " rows)\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const OverflowError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const NeighborhoodError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const ReplicationErrors& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace trilab
