// Copyright 2026 The tdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Reproducible experiment runner: scaling studies, the Bernoulli probe and
// lemma certification, with JSON and CSV output.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdesign/channel_norms.hpp"
#include "tdesign/ensembles.hpp"
#include "tdesign/json_io.hpp"

namespace tdesign {

enum class ExperimentKind { scaling_t_fold, scaling_u_ubar, scaling_theta, scaling_crypto, bernoulli_probe, certify_lemmas };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string &text);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::scaling_t_fold;
    int t = 1;
    int d = 2;
    std::vector<int> n_grid;
    std::vector<std::uint64_t> seeds;
    int restarts = 16;
    /// Known keys: diamond_tol, p_width.
    std::map<std::string, double> tolerances;
    /// "pauli", "clifford", "clifford(m)", "haar", or "file:<path>".
    std::string source = "pauli";
    /// Use the whole source instead of a subsample; every n must equal its size.
    bool exhaustive = false;
    /// Random-input cross-check sample size for the 1->1 and 1->inf searches.
    long cross_check_samples = 10000;
    /// Bernoulli probe sign vectors.
    int sign_vectors = 1000;

    /// Throws ConfigError.
    void validate() const;
};

/// Throws ConfigError on unknown fields or bad values.
ExperimentConfig config_from_json(const Json &j);
Json to_json(const ExperimentConfig &cfg);

/// Resolves a source string against the dimension d; throws ConfigError.
UnitaryEnsemble resolve_source(const std::string &source, int d);

struct ScalingRow {
    int n = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
    NormKind norm_kind = NormKind::exact;
    double wall_ms = 0.0;
    std::vector<std::pair<std::string, double>> terms;
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    /// n values whose median was zero.
    std::vector<int> excluded_n;
    std::vector<std::pair<int, double>> medians;
};

/// OLS of log(median over seeds) on log n. Throws ConfigError with fewer than
/// three distinct n, or fewer than two usable medians.
ScalingFit fit_scaling(const std::vector<ScalingRow> &rows);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ScalingRow> rows;
    std::optional<ScalingFit> fit;
    /// Why no fit was produced, if none was.
    std::string fit_note;
    /// Kind-specific summary (lemma checks, probe constant, source certificate).
    Json report = Json::object();
};

ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// One (n, seed) cell, identical to the corresponding row of run_experiment.
ScalingRow run_cell(const ExperimentConfig &cfg, int n, std::uint64_t seed);

/// Canonical report; omits wall-clock times.
Json to_json(const ExperimentResult &r);
/// Header kind,d,t,n,seed,value,norm_kind,wall_ms.
std::string to_csv(const ExperimentResult &r);

}  // namespace tdesign
