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


#include "tdesign/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "tdesign/crypto.hpp"
#include "tdesign/errors.hpp"
#include "tdesign/schur_weyl.hpp"

namespace tdesign {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKindNames = {
    {ExperimentKind::scaling_t_fold, "scaling-t-fold"},   {ExperimentKind::scaling_u_ubar, "scaling-u-ubar"},
    {ExperimentKind::scaling_theta, "scaling-theta"},     {ExperimentKind::scaling_crypto, "scaling-crypto"},
    {ExperimentKind::bernoulli_probe, "bernoulli-probe"}, {ExperimentKind::certify_lemmas, "certify-lemmas"},
};

double ipow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i) {
        out *= base;
    }
    return out;
}

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string cell_context(const ExperimentConfig &cfg, int n, std::uint64_t seed) {
    return " [kind=" + to_string(cfg.kind) + ", d=" + std::to_string(cfg.d) + ", t=" + std::to_string(cfg.t) +
           ", n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + "]";
}

// Shared per-experiment state: the resolved source and, for sources that are
// not exact designs, the source's own deviation used by the triangle terms.
struct Context {
    UnitaryEnsemble source;
    std::optional<DesignCertificate> certificate;
    bool source_exact = false;
    std::optional<double> source_deviation;
};

SearchOptions cell_search(const ExperimentConfig &cfg, std::uint64_t seed) {
    SearchOptions so;
    so.restarts = cfg.restarts;
    so.seed = seed;
    so.cross_check_samples = cfg.cross_check_samples;
    return so;
}

DiamondOptions diamond_options(const ExperimentConfig &cfg) {
    DiamondOptions o;
    if (auto it = cfg.tolerances.find("diamond_tol"); it != cfg.tolerances.end()) {
        o.tol = it->second;
    }
    return o;
}

int triangle_order(const ExperimentConfig &cfg) {
    switch (cfg.kind) {
        case ExperimentKind::scaling_t_fold:
            return cfg.t;
        case ExperimentKind::scaling_u_ubar:
            return 2;
        default:
            return 0;
    }
}

NormReport kind_norm(const ExperimentConfig &cfg, const HermitianPreservingMap &m, const SearchOptions &so) {
    return cfg.kind == ExperimentKind::scaling_t_fold ? one_to_infty_distance(m, so) : one_to_one_distance(m, so);
}

HermitianPreservingMap kind_average(const ExperimentConfig &cfg, const UnitaryEnsemble &ens) {
    return cfg.kind == ExperimentKind::scaling_t_fold ? map_from_ensemble(ens, TwirlMode::t_fold, cfg.t)
                                                      : map_from_ensemble(ens, TwirlMode::u_ubar);
}

HermitianPreservingMap kind_deviation(const ExperimentConfig &cfg, const UnitaryEnsemble &ens) {
    return cfg.kind == ExperimentKind::scaling_t_fold ? t_fold_deviation(ens, cfg.t) : u_ubar_deviation(ens);
}

Context make_context(const ExperimentConfig &cfg) {
    Context ctx;
    ctx.source = resolve_source(cfg.source, cfg.d);
    const int order = triangle_order(cfg);
    if (order > 0) {
        try {
            ctx.certificate = design_order_defect(ctx.source, order);
            ctx.source_exact = ctx.certificate->verdict == DesignVerdict::exact;
        } catch (const CapError &) {
            ctx.source_exact = false;
        }
        if (!ctx.source_exact) {
            ctx.source_deviation = kind_norm(cfg, kind_deviation(cfg, ctx.source), cell_search(cfg, 0)).value;
        }
    } else if (cfg.kind == ExperimentKind::scaling_theta || cfg.kind == ExperimentKind::scaling_crypto) {
        ctx.certificate = design_order_defect(ctx.source, 2);
    }
    return ctx;
}

UnitaryEnsemble cell_ensemble(const ExperimentConfig &cfg, const Context &ctx, int n, std::uint64_t sample_seed) {
    if (cfg.exhaustive) {
        if (static_cast<std::size_t>(n) != ctx.source.size()) {
            throw ConfigError("exhaustive runs need n equal to the source size " + std::to_string(ctx.source.size()));
        }
        return ctx.source;
    }
    return subsample(ctx.source, n, sample_seed);
}

ScalingRow compute_cell(const ExperimentConfig &cfg, const Context &ctx, int n, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    Rng stream = Rng(seed).derive(static_cast<std::uint64_t>(n));
    const std::uint64_t sample_seed = stream.next_u64();
    const std::uint64_t search_seed = stream.next_u64();
    const UnitaryEnsemble ens = cell_ensemble(cfg, ctx, n, sample_seed);
    const SearchOptions so = cell_search(cfg, search_seed);
    ScalingRow row;
    row.n = n;
    row.seed = seed;
    switch (cfg.kind) {
        case ExperimentKind::scaling_t_fold:
        case ExperimentKind::scaling_u_ubar: {
            const NormReport r = kind_norm(cfg, kind_deviation(cfg, ens), so);
            row.value = r.value;
            row.norm_kind = r.kind;
            if (cfg.kind == ExperimentKind::scaling_u_ubar) {
                SearchOptions perp = so;
                perp.cross_check_samples = 0;
                row.terms.emplace_back(
                    "one_to_infty_perp",
                    one_to_infty_distance(u_ubar_deviation(ens), perp, InputSubspace::orthogonal_to_psi).value);
            }
            if (ctx.source_deviation) {
                const auto from_source = map_difference(kind_average(cfg, ens), kind_average(cfg, ctx.source));
                const double eps = kind_norm(cfg, from_source, so).value;
                row.terms.emplace_back("source_deviation", *ctx.source_deviation);
                row.terms.emplace_back("subsample_from_source", eps);
                row.terms.emplace_back("triangle_bound", *ctx.source_deviation + eps);
            }
            break;
        }
        case ExperimentKind::scaling_theta: {
            ThetaOptions th;
            th.search = so;
            th.diamond = diamond_options(cfg);
            const NormReport r = theta_upper_bound(ens, th);
            row.value = r.value;
            row.norm_kind = r.kind;
            row.terms = r.terms;
            break;
        }
        case ExperimentKind::scaling_crypto: {
            CryptoOptions co;
            co.search = so;
            co.diamond = diamond_options(cfg);
            if (auto it = cfg.tolerances.find("p_width"); it != cfg.tolerances.end()) {
                co.p_width = it->second;
            }
            const auto scheme = build_scheme(ens);
            const auto report = security_report(scheme, attack_suite(cfg.d), SecurityMode::no_side_info(), co);
            row.value = report.indist_defect.value;
            row.norm_kind = report.indist_defect.kind;
            double nm_max = 0.0;
            for (const auto &nm : report.nm_defects) {
                nm_max = std::max(nm_max, nm.defect.value);
            }
            row.terms.emplace_back("nm_max", nm_max);
            for (const auto &nm : report.nm_defects) {
                row.terms.emplace_back("nm_" + nm.label, nm.defect.value);
            }
            break;
        }
        case ExperimentKind::bernoulli_probe: {
            const NormReport adv = one_to_infty_distance(t_fold_deviation(ens, cfg.t), so);
            const Operator rho = *adv.witness * adv.witness->adjoint();
            std::vector<Operator> images;
            Operator total = Operator::Zero(rho.rows(), rho.cols());
            for (const auto &u : ens.elements) {
                const Operator v = kron_power(u, cfg.t);
                images.push_back(v * rho * v.adjoint());
                total += images.back();
            }
            Rng signs = Rng(search_seed).derive(0xB0);
            double acc = 0.0;
            for (int s = 0; s < cfg.sign_vectors; ++s) {
                Operator sum = Operator::Zero(rho.rows(), rho.cols());
                for (const auto &x : images) {
                    if (signs.next_u64() & 1U) {
                        sum += x;
                    } else {
                        sum -= x;
                    }
                }
                Eigen::SelfAdjointEigenSolver<Operator> eig(0.5 * (sum + sum.adjoint()), Eigen::EigenvaluesOnly);
                acc += eig.eigenvalues().cwiseAbs().maxCoeff();
            }
            Eigen::SelfAdjointEigenSolver<Operator> eig(0.5 * (total + total.adjoint()), Eigen::EigenvaluesOnly);
            const double sum_norm = eig.eigenvalues().cwiseAbs().maxCoeff();
            const double shape = std::pow(cfg.t * std::log(static_cast<double>(cfg.d)), 2.5) *
                                 std::sqrt(std::log(static_cast<double>(n))) * std::sqrt(sum_norm);
            row.value = acc / cfg.sign_vectors;
            row.norm_kind = NormKind::heuristic_lower;
            row.terms = {{"rhs_shape", shape}, {"sum_norm", sum_norm}, {"adversarial_deviation", adv.value}};
            break;
        }
        case ExperimentKind::certify_lemmas: {
            const NormReport r = one_to_one_distance(t_fold_deviation(ens, 1), so);
            const double bound = 1.0 - n * (2.0 / cfg.d);
            row.value = r.value;
            row.norm_kind = r.kind;
            row.terms = {{"rank_bound", bound}, {"margin", r.value - bound}};
            break;
        }
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

ScalingRow guarded_cell(const ExperimentConfig &cfg, const Context &ctx, int n, std::uint64_t seed) {
    try {
        return compute_cell(cfg, ctx, n, seed);
    } catch (const CapError &e) {
        throw CapError(e.what() + cell_context(cfg, n, seed));
    } catch (const ConvergenceError &e) {
        throw ConvergenceError(e.what() + cell_context(cfg, n, seed), e.lower_bound, e.upper_bound);
    }
}

Json lemma_report(const ExperimentConfig &cfg, const SearchOptions &so) {
    Json table = Json::array();
    for (int d = 2; d <= cfg.d; ++d) {
        for (int t = 1; t < d; ++t) {
            const Rational norm = twirl_one_to_infty_norm(t, d);
            const Rational bound = twirl_one_to_infty_bound(t, d);
            table.push_back({{"t", t},
                             {"d", d},
                             {"one_to_infty", static_cast<double>(norm)},
                             {"one_to_infty_exact", norm.str()},
                             {"bound", static_cast<double>(bound)},
                             {"bound_exact", bound.str()},
                             {"holds", norm <= bound}});
        }
    }
    Json out{{"twirl_one_to_infty", std::move(table)}};
    if (cfg.t < cfg.d && ipow(cfg.d, 2 * cfg.t) <= static_cast<double>(kDefaultMomentCap)) {
        const Rational norm = twirl_one_to_infty_norm(cfg.t, cfg.d);
        const NormReport r = one_to_infty_distance(exact_twirl_map(cfg.t, cfg.d), so);
        out["search_check"] = {{"t", cfg.t},
                               {"d", cfg.d},
                               {"closed_form", static_cast<double>(norm)},
                               {"search", r.value},
                               {"abs_error", std::abs(r.value - static_cast<double>(norm))}};
    }
    if (cfg.d <= 4) {
        const NormReport r =
            one_to_infty_distance(exact_twirl_11_map(cfg.d), so, InputSubspace::orthogonal_to_psi);
        const double expected = 1.0 / (static_cast<double>(cfg.d) * cfg.d - 1.0);
        out["orthogonal_subspace"] = {
            {"d", cfg.d}, {"expected", expected}, {"search", r.value}, {"abs_error", std::abs(r.value - expected)}};
    }
    return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto &[k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string &text) {
    for (const auto &[k, name] : kKindNames) {
        if (name == text) {
            return k;
        }
    }
    throw ConfigError("unknown experiment kind '" + text + "'");
}

void ExperimentConfig::validate() const {
    if (d < 2) {
        throw ConfigError("d must be at least 2");
    }
    if (t < 1) {
        throw ConfigError("t must be at least 1");
    }
    if (n_grid.empty()) {
        throw ConfigError("n_grid must be nonempty");
    }
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) {
            throw ConfigError("n_grid entries must be positive");
        }
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
            throw ConfigError("n_grid must be strictly ascending");
        }
    }
    if (seeds.empty()) {
        throw ConfigError("seeds must be nonempty");
    }
    if (restarts < 1) {
        throw ConfigError("restarts must be at least 1");
    }
    if (sign_vectors < 1) {
        throw ConfigError("sign_vectors must be at least 1");
    }
    for (const auto &[key, value] : tolerances) {
        if (key != "diamond_tol" && key != "p_width") {
            throw ConfigError("unknown tolerance '" + key + "'");
        }
        if (!(value > 0.0)) {
            throw ConfigError("tolerance '" + key + "' must be positive");
        }
    }
    const double moment = ipow(d, 2 * t);
    switch (kind) {
        case ExperimentKind::scaling_t_fold:
        case ExperimentKind::bernoulli_probe:
            if (moment > static_cast<double>(kDefaultMomentCap)) {
                throw ConfigError("d^{2t} exceeds the moment cap " + std::to_string(kDefaultMomentCap));
            }
            break;
        case ExperimentKind::scaling_u_ubar:
            if (ipow(d, 4) > static_cast<double>(kDefaultMomentCap)) {
                throw ConfigError("d^4 exceeds the moment cap " + std::to_string(kDefaultMomentCap));
            }
            break;
        case ExperimentKind::scaling_theta:
            if (d > ThetaOptions{}.max_dimension) {
                throw ConfigError("scaling-theta supports d <= " + std::to_string(ThetaOptions{}.max_dimension));
            }
            break;
        case ExperimentKind::scaling_crypto:
            if (static_cast<long>(d) * d > kDefaultDiamondCap) {
                throw ConfigError("d * d exceeds the diamond cap " + std::to_string(kDefaultDiamondCap));
            }
            break;
        case ExperimentKind::certify_lemmas:
            if (d > 16) {
                throw ConfigError("certify-lemmas supports d <= 16");
            }
            break;
    }
}

ExperimentConfig config_from_json(const Json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> known = {"kind",     "t",          "d",      "n_grid",
                                                "seeds",    "restarts",   "tolerances", "source",
                                                "exhaustive", "cross_check_samples", "sign_vectors"};
    for (const auto &item : j.items()) {
        if (!known.count(item.key())) {
            throw ConfigError("unknown config field '" + item.key() + "'");
        }
    }
    if (!j.contains("kind")) {
        throw ConfigError("config needs a \"kind\"");
    }
    ExperimentConfig cfg;
    try {
        std::string kind = j.at("kind").get<std::string>();
        // "scaling-t-fold(t)" carries t inline.
        if (const auto open = kind.find('('); open != std::string::npos && kind.back() == ')') {
            cfg.t = std::stoi(kind.substr(open + 1, kind.size() - open - 2));
            kind = kind.substr(0, open);
        }
        cfg.kind = parse_experiment_kind(kind);
        cfg.t = j.value("t", cfg.t);
        cfg.d = j.value("d", cfg.d);
        cfg.n_grid = j.value("n_grid", cfg.n_grid);
        cfg.seeds = j.value("seeds", cfg.seeds);
        cfg.restarts = j.value("restarts", cfg.restarts);
        cfg.tolerances = j.value("tolerances", cfg.tolerances);
        cfg.source = j.value("source", cfg.source);
        cfg.exhaustive = j.value("exhaustive", cfg.exhaustive);
        cfg.cross_check_samples = j.value("cross_check_samples", cfg.cross_check_samples);
        cfg.sign_vectors = j.value("sign_vectors", cfg.sign_vectors);
    } catch (const Json::exception &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::logic_error &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

Json to_json(const ExperimentConfig &cfg) {
    return {{"kind", to_string(cfg.kind)},
            {"t", cfg.t},
            {"d", cfg.d},
            {"n_grid", cfg.n_grid},
            {"seeds", cfg.seeds},
            {"restarts", cfg.restarts},
            {"tolerances", cfg.tolerances},
            {"source", cfg.source},
            {"exhaustive", cfg.exhaustive},
            {"cross_check_samples", cfg.cross_check_samples},
            {"sign_vectors", cfg.sign_vectors}};
}

UnitaryEnsemble resolve_source(const std::string &source, int d) {
    auto check_d = [&](const UnitaryEnsemble &ens) {
        if (ens.d != d) {
            throw ConfigError("source '" + source + "' has dimension " + std::to_string(ens.d) + ", expected " +
                              std::to_string(d));
        }
        return ens;
    };
    auto argument = [&](const std::string &name) -> std::optional<int> {
        if (source.rfind(name + "(", 0) != 0 || source.back() != ')') {
            return std::nullopt;
        }
        const std::string digits = source.substr(name.size() + 1, source.size() - name.size() - 2);
        if (digits.empty() || digits.size() > 7 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
            throw ConfigError("bad source argument in '" + source + "'");
        }
        return std::stoi(digits);
    };
    if (source == "pauli") {
        return pauli_ensemble(d);
    }
    if (source == "clifford" || source.rfind("clifford(", 0) == 0) {
        int m = 0;
        if (auto arg = argument("clifford")) {
            m = *arg;
        } else {
            m = d == 2 ? 1 : d == 4 ? 2 : 0;
        }
        if (m != 1 && m != 2) {
            throw ConfigError("clifford sources exist for 1 or 2 qubits only");
        }
        return check_d(clifford_ensemble(m));
    }
    if (source == "haar" || source.rfind("haar(", 0) == 0) {
        const int size = argument("haar").value_or(1024);
        if (size < 1) {
            throw ConfigError("haar source needs a positive size");
        }
        return haar_ensemble(d, size, 0);
    }
    if (source.rfind("file:", 0) == 0) {
        return check_d(load_ensemble(source.substr(5)));
    }
    throw ConfigError("unknown source '" + source + "'");
}

ScalingFit fit_scaling(const std::vector<ScalingRow> &rows) {
    std::map<int, std::vector<double>> by_n;
    for (const auto &r : rows) {
        by_n[r.n].push_back(r.value);
    }
    if (by_n.size() < 3) {
        throw ConfigError("fit_scaling needs at least 3 distinct n values");
    }
    ScalingFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto &[n, values] : by_n) {
        std::sort(values.begin(), values.end());
        const std::size_t m = values.size();
        const double median = m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
        fit.medians.emplace_back(n, median);
        if (median <= 0.0) {
            fit.excluded_n.push_back(n);
            continue;
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(median));
    }
    if (xs.size() < 2) {
        throw ConfigError("fit_scaling: fewer than 2 nonzero medians");
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / k;
        my += ys[i] / k;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

ScalingRow run_cell(const ExperimentConfig &cfg, int n, std::uint64_t seed) {
    cfg.validate();
    return guarded_cell(cfg, make_context(cfg), n, seed);
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    ExperimentResult result;
    result.config = cfg;
    const Context ctx = make_context(cfg);
    std::vector<std::pair<int, std::uint64_t>> cells;
    for (int n : cfg.n_grid) {
        for (std::uint64_t seed : cfg.seeds) {
            cells.emplace_back(n, seed);
        }
    }
    result.rows.resize(cells.size());
    detail::parallel_for(static_cast<int>(cells.size()), [&](int i) {
        result.rows[i] = guarded_cell(cfg, ctx, cells[i].first, cells[i].second);
    });

    result.report["source"] = {{"provenance", ctx.source.provenance}, {"size", ctx.source.size()}};
    if (ctx.certificate) {
        result.report["source"]["certificate"] = to_json(*ctx.certificate);
    }
    if (ctx.source_deviation) {
        result.report["source"]["deviation"] = *ctx.source_deviation;
    }
    if (cfg.kind == ExperimentKind::certify_lemmas) {
        result.report["lemmas"] = lemma_report(cfg, cell_search(cfg, cfg.seeds.front()));
        bool holds = true;
        for (const auto &row : result.rows) {
            holds = holds && row.terms[1].second >= -0.05;
        }
        result.report["rank_bound_holds"] = holds;
        result.fit_note = "certify-lemmas rows are not a scaling study";
        return result;
    }
    if (cfg.kind == ExperimentKind::bernoulli_probe) {
        double num = 0.0;
        double den = 0.0;
        for (const auto &row : result.rows) {
            const double shape = row.terms[0].second;
            num += row.value * shape;
            den += shape * shape;
        }
        result.report["fitted_constant"] = den > 0.0 ? Json(num / den) : Json(nullptr);
        result.report["note"] = "shape probe at a single adversarial state, not a bound verification";
    }
    try {
        result.fit = fit_scaling(result.rows);
        if (!result.fit->excluded_n.empty()) {
            result.fit_note = "n values with zero median excluded";
        }
    } catch (const ConfigError &e) {
        result.fit_note = e.what();
    }
    return result;
}

Json to_json(const ExperimentResult &r) {
    Json rows = Json::array();
    for (const auto &row : r.rows) {
        Json terms = Json::object();
        for (const auto &[name, value] : row.terms) {
            terms[name] = value;
        }
        rows.push_back({{"n", row.n},
                        {"seed", row.seed},
                        {"value", row.value},
                        {"norm_kind", to_string(row.norm_kind)},
                        {"terms", std::move(terms)}});
    }
    Json fit = nullptr;
    if (r.fit) {
        Json medians = Json::array();
        for (const auto &[n, m] : r.fit->medians) {
            medians.push_back({{"n", n}, {"median", m}});
        }
        fit = {{"slope", r.fit->slope},
               {"intercept", r.fit->intercept},
               {"r2", r.fit->r2},
               {"excluded_n", r.fit->excluded_n},
               {"medians", std::move(medians)}};
    }
    return {{"config", to_json(r.config)},
            {"rows", std::move(rows)},
            {"fit", std::move(fit)},
            {"fit_note", r.fit_note},
            {"report", r.report}};
}

std::string to_csv(const ExperimentResult &r) {
    std::ostringstream out;
    out << "kind,d,t,n,seed,value,norm_kind,wall_ms\n";
    char ms[32];
    for (const auto &row : r.rows) {
        std::snprintf(ms, sizeof(ms), "%.3f", row.wall_ms);
        out << to_string(r.config.kind) << ',' << r.config.d << ',' << r.config.t << ',' << row.n << ','
            << row.seed << ',' << shortest(row.value) << ',' << to_string(row.norm_kind) << ',' << ms << '\n';
    }
    return out.str();
}

}  // namespace tdesign
