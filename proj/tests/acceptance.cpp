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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tdesign/channel_norms.hpp"
#include "tdesign/crypto.hpp"
#include "tdesign/harness.hpp"
#include "tdesign/json_io.hpp"
#include "tdesign/schur_weyl.hpp"

using namespace tdesign;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Operator random_operator(int n, Rng &rng) {
    Operator m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    return m;
}

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

std::vector<double> medians_by_n(const ExperimentResult &r) {
    std::vector<double> out;
    for (int n : r.config.n_grid) {
        std::vector<double> vals;
        for (const auto &row : r.rows)
            if (row.n == n) vals.push_back(row.value);
        out.push_back(median(vals));
    }
    return out;
}

std::vector<std::uint64_t> seeds(int count) {
    std::vector<std::uint64_t> s;
    for (int i = 0; i < count; ++i) s.push_back(i);
    return s;
}

Outcome twirl_formula() {
    double worst = 0.0;
    Rng rng(101);
    for (int d : {2, 3, 4, 5}) {
        const auto c = canonical_operators(d);
        const double ds = d * (d + 1) / 2.0;
        const double da = d * (d - 1) / 2.0;
        for (int i = 0; i < 25; ++i) {
            const Operator x = random_operator(d * d, rng);
            const Operator formula = (c.sym_proj * x).trace() / ds * c.sym_proj +
                                     (c.antisym_proj * x).trace() / da * c.antisym_proj;
            worst = std::max(worst, (exact_twirl(x, 2, d) - formula).cwiseAbs().maxCoeff());
        }
    }
    return {worst <= 1e-12, "max abs error " + fmt("%.3g", worst)};
}

Outcome twirl_11_identity() {
    double worst = 0.0;
    Rng rng(202);
    for (int d : {2, 3}) {
        const TensorShape shape({d, d});
        for (int i = 0; i < 25; ++i) {
            const Operator x = random_operator(d * d, rng);
            const Operator via = partial_transpose(exact_twirl(partial_transpose(x, shape, 1), 2, d), shape, 1);
            worst = std::max(worst, (exact_twirl_11(x, d) - via).cwiseAbs().maxCoeff());
        }
    }
    return {worst <= 1e-12, "max abs error " + fmt("%.3g", worst)};
}

Outcome twirl_norm_rational() {
    int checked = 0;
    bool ok = true;
    double search_err = 0.0;
    SearchOptions so;
    so.restarts = 16;
    so.cross_check_samples = 0;
    for (int d = 2; d <= 6; ++d) {
        for (int t = 1; t < d; ++t) {
            std::uint64_t min_dim = UINT64_MAX;
            for (const auto &lambda : partitions(t, d)) min_dim = std::min(min_dim, weyl_dimension(lambda, d));
            const Rational expected(1, static_cast<long long>(min_dim));
            const Rational computed = twirl_one_to_infty_norm(t, d);
            ok = ok && computed == expected && computed <= twirl_one_to_infty_bound(t, d);
            if (std::pow(d, t) <= 16) {
                const double v = one_to_infty_distance(exact_twirl_map(t, d), so).value;
                search_err = std::max(search_err, std::abs(v - static_cast<double>(computed)));
            }
            ++checked;
        }
    }
    ok = ok && search_err <= 1e-9;
    return {ok, std::to_string(checked) + " (t,d) pairs, numerical search error " + fmt("%.3g", search_err)};
}

Outcome orthogonal_subspace() {
    double worst = 0.0;
    for (int d : {2, 3}) {
        const double v =
            one_to_infty_distance(exact_twirl_11_map(d), SearchOptions{}, InputSubspace::orthogonal_to_psi).value;
        worst = std::max(worst, std::abs(v - 1.0 / (d * d - 1.0)));
    }
    return {worst <= 1e-9, "max abs error " + fmt("%.3g", worst)};
}

Outcome psi_fixing() {
    const auto cl = clifford_ensemble(1);
    const Operator psi = canonical_operators(2).psi_proj;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto sub = subsample(cl, 1 + i % 16, 500 + i);
        worst = std::max(worst, (sampled_twirl_apply(sub, psi, TwirlMode::u_ubar) - psi).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-13, "max abs error " + fmt("%.3g", worst)};
}

Outcome design_certificates() {
    double pauli = 0.0;
    for (int d : {2, 3, 4, 5}) pauli = std::max(pauli, design_order_defect(pauli_ensemble(d), 1).defect);
    const auto c1 = clifford_ensemble(1);
    const double c1_2 = design_order_defect(c1, 2).defect;
    const double c1_3 = design_order_defect(c1, 3).defect;
    const double c2_2 = design_order_defect(clifford_ensemble(2), 2).defect;
    const bool ok = pauli <= 1e-12 && c1_2 <= 1e-10 && c1_3 <= 1e-10 && c2_2 <= 1e-9;
    return {ok, "pauli " + fmt("%.3g", pauli) + ", clifford1 t2 " + fmt("%.3g", c1_2) + " t3 " + fmt("%.3g", c1_3) +
                    ", clifford2 t2 " + fmt("%.3g", c2_2)};
}

Outcome diamond_oracle() {
    double err = 0.0;
    double gap = 0.0;
    for (int d : {2, 3}) {
        const auto m = map_difference(identity_map(d), depolarizing_map(d));
        const auto r = diamond_distance(m);
        err = std::max(err, std::abs(r.value - oracle::brute_force_diamond(m.choi, d, d, 20000, 7 + d)));
        gap = std::max(gap, r.gap);
    }
    Rng rng(303);
    for (int i = 0; i < 3; ++i) {
        const Operator u = ginibre_unitary(2, rng);
        const Operator v = ginibre_unitary(2, rng);
        const auto m = map_difference(map_from_kraus(2, 2, {u}), map_from_kraus(2, 2, {v}));
        const auto r = diamond_distance(m);
        err = std::max(err, std::abs(r.value - oracle::brute_force_diamond(m.choi, 2, 2, 20000, 40 + i)));
        err = std::max(err, std::abs(r.value - oracle::unitary_difference_diamond_2(u, v)));
        gap = std::max(gap, r.gap);
    }
    return {err <= 1e-5 && gap <= 1e-7, "max oracle error " + fmt("%.3g", err) + ", max gap " + fmt("%.3g", gap)};
}

Outcome t_fold_trend() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::scaling_t_fold;
    cfg.d = 2;
    cfg.t = 1;
    cfg.source = "pauli";
    cfg.n_grid = {4, 16, 64, 256};
    cfg.seeds = seeds(20);
    const auto r = run_experiment(cfg);
    const double slope = r.fit ? r.fit->slope : NAN;
    return {r.fit && slope >= -0.65 && slope <= -0.35, "slope " + fmt("%.4f", slope)};
}

Outcome u_ubar_and_theta_trend() {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.source = "clifford";
    cfg.n_grid = {8, 32, 128};
    cfg.seeds = seeds(20);
    cfg.kind = ExperimentKind::scaling_u_ubar;
    const auto uu = medians_by_n(run_experiment(cfg));
    cfg.kind = ExperimentKind::scaling_theta;
    const auto th = medians_by_n(run_experiment(cfg));
    const bool ok = uu[0] > uu[1] && uu[1] > uu[2] && th[0] > th[1] && th[1] > th[2];
    std::string detail = "u-ubar medians";
    for (double v : uu) detail += " " + fmt("%.4g", v);
    detail += "; theta upper medians";
    for (double v : th) detail += " " + fmt("%.4g", v);
    return {ok, detail};
}

Outcome rank_bound() {
    double worst = INFINITY;
    for (int d : {8, 16}) {
        const auto pauli = pauli_ensemble(d);
        for (int n : {1, 2, 4}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                SearchOptions so;
                so.restarts = 16;
                so.seed = seed;
                const double v = one_to_one_distance(t_fold_deviation(subsample(pauli, n, seed), 1), so).value;
                worst = std::min(worst, v - (1.0 - n * (2.0 / d) - 0.05));
            }
        }
    }
    return {worst >= 0.0, "min margin over the bound " + fmt("%.4g", worst)};
}

Outcome crypto_equivalences() {
    CryptoOptions co;
    co.search.restarts = 16;
    const auto pauli = build_scheme(pauli_ensemble(2));
    double indist = 0.0;
    for (auto mode : {SecurityMode::no_side_info(), SecurityMode::k_bounded(1), SecurityMode::full()})
        indist = std::max(indist, indistinguishability_defect(pauli, mode, co).value);
    const auto cl = build_scheme(clifford_ensemble(1));
    const auto suite = attack_suite(2);
    double nm = 0.0;
    double p_err = 0.0;
    double id_err = 0.0;
    const auto rep = security_report(cl, suite, SecurityMode::no_side_info(), co);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto &row = rep.nm_defects[i];
        nm = std::max(nm, row.defect.value);
        p_err = std::max(p_err, std::abs(row.p_star - channel_twirl_coefficient(suite[i].choi, 2)));
        if (row.label == "identity") id_err = std::max(id_err, std::abs(row.p_star - 1.0));
        if (row.label == "depolarizing") id_err = std::max(id_err, std::abs(row.p_star));
    }
    for (const auto &ens : {pauli_ensemble(2), haar_ensemble(2, 4, 9)}) {
        const auto s = build_scheme(ens);
        id_err = std::max(id_err, std::abs(non_malleability_defect(s, suite[0], {}, co).p_star - 1.0));
        id_err = std::max(id_err, std::abs(non_malleability_defect(s, suite[3], {}, co).p_star));
    }
    const bool ok = indist <= 1e-10 && nm <= 1e-8 && p_err <= 1e-6 && id_err <= 1e-6;
    return {ok, "indist " + fmt("%.3g", indist) + ", nm " + fmt("%.3g", nm) + ", p_star error " + fmt("%.3g", p_err) +
                    ", identity/depolarizing p_star error " + fmt("%.3g", id_err)};
}

Outcome k_bounded_consistency() {
    ThetaOptions th;
    th.search.restarts = 8;
    th.channel_restarts = 4;
    th.ascent_rounds = 6;
    const auto cl = clifford_ensemble(1);
    double worst = -INFINITY;
    for (int i = 0; i < 10; ++i) {
        const auto ens = subsample(cl, 4 + 2 * i, 700 + i);
        th.search.seed = i;
        const double upper = theta_upper_bound(ens, th).value;
        for (int k : {1, 2}) {
            const double est = k_bounded_theta_estimate(ens, k, th).value;
            worst = std::max(worst, est - (k * k * upper + 1e-6));
        }
    }
    return {worst <= 0.0, "max excess over k^2 * upper " + fmt("%.4g", worst)};
}

std::string suite_json() {
    Json all = Json::array();
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.n_grid = {2, 4, 8};
    cfg.seeds = {11, 12};
    cfg.restarts = 4;
    cfg.sign_vectors = 100;
    cfg.source = "clifford";
    for (auto kind : {ExperimentKind::scaling_t_fold, ExperimentKind::scaling_u_ubar, ExperimentKind::scaling_theta,
                      ExperimentKind::scaling_crypto, ExperimentKind::bernoulli_probe,
                      ExperimentKind::certify_lemmas}) {
        cfg.kind = kind;
        all.push_back(to_json(run_experiment(cfg)));
    }
    CryptoOptions co;
    co.search.restarts = 4;
    co.theta.search.restarts = 4;
    const auto s = build_scheme(subsample(clifford_ensemble(1), 6, 13));
    all.push_back(to_json(security_report(s, attack_suite(2, 13), SecurityMode::k_bounded(2), co)));
    return dump(all);
}

Outcome determinism() {
    const std::string a = suite_json();
    const std::string b = suite_json();
    return {a == b, std::to_string(a.size()) + " bytes per run, identical: " + (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "t=2 twirl matches the symmetric/antisymmetric formula", 10, twirl_formula},
        {2, "U (x) conj U twirl equals partial transpose of the t=2 twirl", 5, twirl_11_identity},
        {3, "twirl 1->inf norm is 1/min m_lambda and below (2t/d)^t", 5, twirl_norm_rational},
        {4, "psi-orthogonal 1->inf norm of the U (x) conj U twirl is 1/(d^2-1)", 60, orthogonal_subspace},
        {5, "Clifford subsamples fix the maximally entangled state", 10, psi_fixing},
        {6, "exact design certificates for Pauli and Clifford groups", 600, design_certificates},
        {7, "diamond SDP agrees with the search oracle and closed forms", 60, diamond_oracle},
        {8, "t-fold 1->inf deviation decays with slope near -1/2", 300, t_fold_trend},
        {9, "u-ubar 1->1 deviation and theta upper bound decrease in n", 900, u_ubar_and_theta_trend},
        {10, "rank bound on the 1->1 deviation of small Pauli subsamples", 120, rank_bound},
        {11, "crypto indistinguishability and non-malleability identities", 300, crypto_equivalences},
        {12, "k-bounded estimates stay below k^2 times the theta upper bound", 300, k_bounded_consistency},
        {13, "identical seeds give byte-identical JSON reports", 600, determinism},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %2d %s: %s | %s | %.2f s of %.0f s%s\n", c.id, pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : " (over budget)");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
