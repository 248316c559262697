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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trilab/engine.hpp"

namespace trilab {

inline constexpr const char* kToolVersion = "0.1.0";

struct CounterexampleOptions {
    double epsilon = 0.5;
    std::uint64_t m_min = 2;
    std::uint64_t m_max = 8;
};

/// Everything a config file can ask for. Sections are optional at parse
/// time; each subcommand checks for the ones it needs.
struct AnalysisPlan {
    std::optional<DistributionSpec> spec;
    std::optional<FunctionSpec> fs;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> seed;
    Centering centering = Centering::UseB;
    RowSampling row_sampling = RowSampling::Summed;
    std::vector<std::uint64_t> normalizer_grid;
    DiagnosticFlags diagnostics;
    std::optional<CounterexampleOptions> counterexample;

    /// Canonical JSON text of the config (sorted keys, overrides applied).
    std::string canonical;
};

/// Parses and validates a JSON config. Unknown keys, missing or mistyped
/// fields and out-of-range values raise ConfigError with the key path.
AnalysisPlan parse_config(const std::string& text);

/// Replaces the seed (and the canonical text) after parsing.
void override_seed(AnalysisPlan& plan, std::uint64_t seed);

/// The simulate section as an ExperimentConfig; ConfigError if incomplete.
ExperimentConfig experiment_config(const AnalysisPlan& plan);

struct ArtifactRecord {
    std::string name;
    std::string path;  // relative to the output directory
    std::size_t rows = 0;
};

struct RunManifest {
    std::string config_digest;
    std::string tool_version = kToolVersion;
    std::string started;
    std::string finished;
    std::vector<ArtifactRecord> outputs;
};

// Subcommands. Each writes its artifacts plus manifest.json into out_dir.
RunManifest run_simulate(const AnalysisPlan& plan, const std::filesystem::path& out_dir, unsigned threads);
RunManifest run_normalizers(const AnalysisPlan& plan, const std::filesystem::path& out_dir);
RunManifest run_counterexample(const AnalysisPlan& plan, const std::filesystem::path& out_dir);
RunManifest run_diagnostics(const AnalysisPlan& plan, const std::filesystem::path& out_dir, unsigned threads);

/// Column headers, fixed.
inline constexpr const char* kReplicationColumns =
    "rep_index,t_stat,product_stat,r1,r2,out_of_neighborhood_count,domain_violation";
inline constexpr const char* kCounterexampleColumns = "M,n_log,Q,ratio";

/// Entry point used by the executable; returns the process exit code
/// (0 ok, 1 I/O, 2 config error, 3 numeric failure).
int cli_main(int argc, char** argv);

}  // namespace trilab
