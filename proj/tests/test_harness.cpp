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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "tdesign/errors.hpp"
#include "tdesign/harness.hpp"
#include "tdesign/json_io.hpp"

using namespace tdesign;

namespace {

std::vector<ScalingRow> synthetic(const std::function<double(int)> &f) {
    std::vector<ScalingRow> rows;
    for (int n : {4, 16, 64, 256}) {
        for (std::uint64_t s = 0; s < 3; ++s) {
            ScalingRow r;
            r.n = n;
            r.seed = s;
            r.value = f(n);
            rows.push_back(r);
        }
    }
    return rows;
}

ExperimentConfig small_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.d = 2;
    cfg.n_grid = {2, 4, 8};
    cfg.seeds = {1, 2};
    cfg.restarts = 4;
    cfg.cross_check_samples = 2000;
    return cfg;
}

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("tdesign_test_" + name)).string();
}

}  // namespace

TEST(fit, inverse_square_root) {
    auto fit = fit_scaling(synthetic([](int n) { return 4.0 / std::sqrt(n); }));
    EXPECT_NEAR(fit.slope, -0.5, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(4.0), 1e-12);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(fit, constant_has_zero_slope) {
    auto fit = fit_scaling(synthetic([](int) { return 0.3; }));
    EXPECT_NEAR(fit.slope, 0.0, 1e-12);
}

TEST(fit, order_independent) {
    auto rows = synthetic([](int n) { return 1.0 / n + 0.01 * (n % 3); });
    rows[0].value = 2.0;
    auto a = fit_scaling(rows);
    std::reverse(rows.begin(), rows.end());
    std::rotate(rows.begin(), rows.begin() + 5, rows.end());
    auto b = fit_scaling(rows);
    EXPECT_EQ(a.slope, b.slope);
    EXPECT_EQ(a.intercept, b.intercept);
    EXPECT_EQ(a.r2, b.r2);
}

TEST(fit, zero_medians_are_excluded) {
    auto fit = fit_scaling(synthetic([](int n) { return n == 256 ? 0.0 : 1.0 / n; }));
    ASSERT_EQ(fit.excluded_n.size(), 1u);
    EXPECT_EQ(fit.excluded_n[0], 256);
    EXPECT_NEAR(fit.slope, -1.0, 1e-12);
}

TEST(fit, needs_three_distinct_n) {
    std::vector<ScalingRow> rows(4);
    rows[0].n = rows[1].n = 2;
    rows[2].n = rows[3].n = 4;
    for (auto &r : rows) r.value = 1.0;
    EXPECT_THROW(fit_scaling(rows), ConfigError);
}

TEST(config, parses_and_validates) {
    Json j = Json::parse(R"J({"kind": "scaling-t-fold(2)", "d": 3, "n_grid": [4, 8, 16], "seeds": [0, 1],
                            "restarts": 8, "tolerances": {"diamond_tol": 1e-6}, "source": "pauli"})J");
    auto cfg = config_from_json(j);
    EXPECT_EQ(cfg.kind, ExperimentKind::scaling_t_fold);
    EXPECT_EQ(cfg.t, 2);
    EXPECT_EQ(cfg.d, 3);
    EXPECT_EQ(cfg.tolerances.at("diamond_tol"), 1e-6);
    auto again = config_from_json(to_json(cfg));
    EXPECT_EQ(dump(to_json(again)), dump(to_json(cfg)));
}

TEST(config, rejects_bad_input) {
    const char *bad[] = {
        R"J({"kind": "scaling-x", "n_grid": [1], "seeds": [0]})J",
        R"J({"kind": "scaling-u-ubar", "n_grid": [4, 2], "seeds": [0]})J",
        R"J({"kind": "scaling-u-ubar", "n_grid": [2, 4], "seeds": []})J",
        R"J({"kind": "scaling-u-ubar", "n_grid": [], "seeds": [0]})J",
        R"J({"kind": "scaling-u-ubar", "n_grid": [2], "seeds": [0], "colour": 1})J",
        R"J({"kind": "scaling-u-ubar", "n_grid": [2], "seeds": [0], "tolerances": {"foo": 1}})J",
        R"J({"kind": "scaling-u-ubar", "n_grid": "2", "seeds": [0]})J",
        R"J({"kind": "scaling-theta", "d": 5, "n_grid": [2], "seeds": [0]})J",
        R"J({"kind": "scaling-t-fold", "d": 6, "t": 3, "n_grid": [2], "seeds": [0]})J",
        R"J({"n_grid": [2], "seeds": [0]})J",
        R"J([1, 2])J",
    };
    for (const char *text : bad) {
        EXPECT_THROW(config_from_json(Json::parse(text)), ConfigError) << text;
    }
}

TEST(source, resolves_specs) {
    EXPECT_EQ(resolve_source("pauli", 3).size(), 9u);
    EXPECT_EQ(resolve_source("clifford", 2).size(), 24u);
    EXPECT_EQ(resolve_source("clifford(1)", 2).size(), 24u);
    EXPECT_EQ(resolve_source("haar(7)", 3).size(), 7u);
    EXPECT_THROW(resolve_source("clifford(1)", 4), ConfigError);
    EXPECT_THROW(resolve_source("clifford", 3), ConfigError);
    EXPECT_THROW(resolve_source("magic", 2), ConfigError);
    EXPECT_THROW(resolve_source("file:/nonexistent/x.json", 2), ConfigError);
}

TEST(json_io, ensemble_round_trip_is_exact) {
    auto ens = haar_ensemble(3, 5, 17);
    const std::string path = temp_path("ens.json");
    save_ensemble(ens, path);
    auto back = load_ensemble(path);
    EXPECT_EQ(back.provenance, ens.provenance);
    ASSERT_EQ(back.size(), ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        EXPECT_EQ(back.elements[i], ens.elements[i]);
        EXPECT_EQ(back.weights[i], ens.weights[i]);
    }
    EXPECT_EQ(dump(ensemble_to_json(back)), dump(ensemble_to_json(ens)));
    EXPECT_EQ(resolve_source("file:" + path, 3).size(), 5u);
    EXPECT_THROW(resolve_source("file:" + path, 2), ConfigError);
    std::remove(path.c_str());
}

TEST(json_io, rejects_malformed_ensembles) {
    EXPECT_THROW(ensemble_from_json(Json::parse(R"J({"d": 2})J")), ConfigError);
    EXPECT_THROW(ensemble_from_json(Json::parse(R"J({"d": 2, "elements": [[[1, 0]]]})J")), ConfigError);
    EXPECT_THROW(ensemble_from_json(Json::parse(R"J({"d": 1, "elements": [[[2, 0]]]})J")), ConfigError);
    EXPECT_THROW(ensemble_from_json(Json::parse(R"J({"d": 1, "elements": [[[1, 0]]], "weights": [0.5]})J")),
                 ConfigError);
}

TEST(json_io, norm_report_fields) {
    NormReport r;
    r.kind = NormKind::certified;
    r.value = 0.25;
    r.gap = 1e-9;
    r.witness = StateVector::Ones(2);
    r.terms = {{"a", 1.0}};
    Json j = to_json(r);
    EXPECT_EQ(j["kind"], "certified");
    EXPECT_EQ(j["value"], 0.25);
    EXPECT_EQ(j["gap"], 1e-9);
    EXPECT_EQ(j["witness"].size(), 2u);
    EXPECT_EQ(j["terms"]["a"], 1.0);
    EXPECT_EQ(to_json(NormReport{}).at("kind"), "exact");
}

TEST(json_io, shortest_round_trip_doubles) {
    Json j = {{"x", 0.1}, {"y", 1.0 / 3.0}};
    EXPECT_EQ(j.dump(), R"J({"x":0.1,"y":0.3333333333333333})J");
    EXPECT_EQ(Json::parse(j.dump())["y"].get<double>(), 1.0 / 3.0);
}

TEST(experiment, rows_cover_grid_and_cells_reproduce) {
    auto cfg = small_config(ExperimentKind::scaling_t_fold);
    auto r = run_experiment(cfg);
    ASSERT_EQ(r.rows.size(), cfg.n_grid.size() * cfg.seeds.size());
    std::set<std::pair<int, std::uint64_t>> seen;
    for (const auto &row : r.rows) {
        EXPECT_TRUE(seen.insert({row.n, row.seed}).second);
        EXPECT_EQ(run_cell(cfg, row.n, row.seed).value, row.value);
    }
    ASSERT_TRUE(r.fit.has_value());
    EXPECT_EQ(dump(to_json(run_experiment(cfg))), dump(to_json(r)));
}

TEST(experiment, csv_schema) {
    auto cfg = small_config(ExperimentKind::scaling_t_fold);
    cfg.n_grid = {2};
    auto csv = to_csv(run_experiment(cfg));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,d,t,n,seed,value,norm_kind,wall_ms");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(csv.find("scaling-t-fold,2,1,2,1,"), std::string::npos);
}

TEST(experiment, exhaustive_clifford_u_ubar_vanishes) {
    auto cfg = small_config(ExperimentKind::scaling_u_ubar);
    cfg.source = "clifford";
    cfg.exhaustive = true;
    cfg.n_grid = {24};
    cfg.seeds = {0};
    auto r = run_experiment(cfg);
    for (const auto &row : r.rows) {
        EXPECT_LE(row.value, 1e-9);
        for (const auto &[name, v] : row.terms) EXPECT_LE(v, 1e-9) << name;
    }
    cfg.n_grid = {23};
    EXPECT_THROW(run_experiment(cfg), ConfigError);
}

TEST(experiment, triangle_terms_bound_the_deviation) {
    auto cfg = small_config(ExperimentKind::scaling_t_fold);
    cfg.source = "haar(32)";
    cfg.restarts = 8;
    auto r = run_experiment(cfg);
    for (const auto &row : r.rows) {
        ASSERT_EQ(row.terms.size(), 3u);
        EXPECT_EQ(row.terms[2].first, "triangle_bound");
        EXPECT_LE(row.value, row.terms[2].second + 1e-6);
    }
    EXPECT_TRUE(r.report["source"].contains("deviation"));
}

TEST(experiment, certify_lemmas_report) {
    auto cfg = small_config(ExperimentKind::certify_lemmas);
    cfg.d = 4;
    cfg.t = 2;
    cfg.n_grid = {1, 2};
    cfg.seeds = {0};
    auto r = run_experiment(cfg);
    const Json &check = r.report["lemmas"]["search_check"];
    EXPECT_NEAR(check["closed_form"].get<double>(), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(check["search"].get<double>(), 1.0 / 6.0, 1e-9);
    bool found = false;
    for (const auto &row : r.report["lemmas"]["twirl_one_to_infty"]) {
        if (row["t"] == 2 && row["d"] == 4) {
            found = true;
            EXPECT_EQ(row["one_to_infty_exact"], "1/6");
            EXPECT_EQ(row["bound"], 1.0);
            EXPECT_TRUE(row["holds"].get<bool>());
        }
    }
    EXPECT_TRUE(found);
    EXPECT_TRUE(r.report["rank_bound_holds"].get<bool>());
    EXPECT_FALSE(r.fit.has_value());
}

TEST(experiment, other_kinds_run) {
    for (auto kind : {ExperimentKind::scaling_theta, ExperimentKind::scaling_crypto, ExperimentKind::bernoulli_probe,
                      ExperimentKind::scaling_u_ubar}) {
        auto cfg = small_config(kind);
        cfg.sign_vectors = 50;
        cfg.source = "clifford";
        auto r = run_experiment(cfg);
        EXPECT_EQ(r.rows.size(), 6u) << to_string(kind);
        for (const auto &row : r.rows) EXPECT_TRUE(std::isfinite(row.value));
        if (kind == ExperimentKind::bernoulli_probe) {
            EXPECT_TRUE(r.report["fitted_constant"].is_number());
        }
        if (kind == ExperimentKind::scaling_crypto) {
            EXPECT_EQ(r.rows[0].terms[0].first, "nm_max");
        }
    }
}
