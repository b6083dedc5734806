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


// tdesign command line: gen, certify, scale, crypto, version.
// Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tdesign/crypto.hpp"
#include "tdesign/errors.hpp"
#include "tdesign/harness.hpp"
#include "tdesign/json_io.hpp"

#ifndef TDESIGN_VERSION
#define TDESIGN_VERSION "0.0.0"
#endif

using namespace tdesign;

namespace {

struct SourceArgs {
    std::string source = "pauli";
    int d = 2;
    std::optional<int> m;
    std::optional<int> n;
    std::uint64_t seed = 0;

    void add_to(CLI::App *app) {
        app->add_option("--source", source, "pauli | clifford | haar[(N)] | file:<path>");
        app->add_option("--d", d, "dimension");
        app->add_option("--m", m, "qubit count for clifford sources (sets d = 2^m)");
        app->add_option("--n", n, "subsample size (default: the whole source)");
        app->add_option("--seed", seed, "subsample seed");
    }

    UnitaryEnsemble resolve() const {
        UnitaryEnsemble ens;
        if (source.rfind("file:", 0) == 0) {
            ens = load_ensemble(source.substr(5));
        } else {
            int dim = d;
            std::string spec = source;
            if (m) {
                if (source != "clifford") {
                    throw ConfigError("--m applies to clifford sources only");
                }
                if (*m < 1 || *m > 2) {
                    throw ConfigError("clifford sources exist for 1 or 2 qubits only");
                }
                dim = 1 << *m;
                spec = "clifford(" + std::to_string(*m) + ")";
            }
            ens = resolve_source(spec, dim);
        }
        if (n) {
            ens = subsample(ens, *n, seed);
        }
        return ens;
    }
};

void emit(const std::string &text, const std::string &out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) {
        throw ConfigError("cannot open '" + out + "' for writing");
    }
    f << text;
}

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Unitary design and channel-twirl toolkit"};
    app.require_subcommand(1);

    SourceArgs gen_src;
    std::string gen_out;
    auto *gen = app.add_subcommand("gen", "write an ensemble to a JSON file");
    gen_src.add_to(gen);
    gen->add_option("--out", gen_out, "output path (default stdout)");

    SourceArgs cert_src;
    int cert_t = 1;
    bool cert_lemmas = false;
    std::vector<int> cert_n_grid = {1, 2, 4};
    int cert_restarts = 16;
    std::string cert_out;
    auto *certify = app.add_subcommand("certify", "design-order certificate or lemma suite");
    cert_src.add_to(certify);
    certify->add_option("--t", cert_t, "design order");
    certify->add_flag("--lemmas", cert_lemmas, "run the lemma suite instead of a design certificate");
    certify->add_option("--n-grid", cert_n_grid, "subsample sizes for the rank-bound check")->delimiter(',');
    certify->add_option("--restarts", cert_restarts, "search restarts");
    certify->add_option("--out", cert_out, "output path (default stdout)");

    std::string scale_config;
    std::string scale_out;
    std::string scale_format;
    auto *scale = app.add_subcommand("scale", "run an experiment from a JSON config");
    scale->add_option("--config", scale_config, "experiment config path")->required();
    scale->add_option("--out", scale_out, "output path (default stdout)");
    scale->add_option("--format", scale_format, "json | csv (default: from --out extension)")
        ->check(CLI::IsMember({"json", "csv"}));

    SourceArgs crypto_src;
    std::string crypto_mode = "no-side-info";
    int crypto_restarts = 16;
    std::uint64_t crypto_attack_seed = 0;
    std::string crypto_out;
    auto *crypto = app.add_subcommand("crypto", "security report of the scheme built from an ensemble");
    crypto_src.add_to(crypto);
    crypto->add_option("--mode", crypto_mode, "no-side-info | k-bounded(k) | full");
    crypto->add_option("--restarts", crypto_restarts, "search restarts");
    crypto->add_option("--attack-seed", crypto_attack_seed, "seed of the attack suite");
    crypto->add_option("--out", crypto_out, "output path (default stdout)");

    auto *version = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*gen) {
            emit(dump(ensemble_to_json(gen_src.resolve())), gen_out);
        } else if (*certify) {
            if (cert_lemmas) {
                ExperimentConfig cfg;
                cfg.kind = ExperimentKind::certify_lemmas;
                cfg.d = cert_src.d;
                cfg.t = cert_t;
                cfg.source = cert_src.source;
                cfg.n_grid = cert_n_grid;
                cfg.seeds = {cert_src.seed};
                cfg.restarts = cert_restarts;
                emit(dump(to_json(run_experiment(cfg))), cert_out);
            } else {
                const UnitaryEnsemble ens = cert_src.resolve();
                Json j{{"provenance", ens.provenance},
                       {"d", ens.d},
                       {"size", ens.size()},
                       {"certificate", to_json(design_order_defect(ens, cert_t))}};
                emit(dump(j), cert_out);
            }
        } else if (*scale) {
            const ExperimentConfig cfg = config_from_json(read_json_file(scale_config));
            const ExperimentResult result = run_experiment(cfg);
            const bool csv = scale_format == "csv" || (scale_format.empty() && ends_with(scale_out, ".csv"));
            emit(csv ? to_csv(result) : dump(to_json(result)), scale_out);
        } else if (*crypto) {
            CryptoOptions co;
            co.search.restarts = crypto_restarts;
            co.search.seed = crypto_src.seed;
            co.theta.search = co.search;
            const EncryptionScheme scheme = build_scheme(crypto_src.resolve());
            const auto report = security_report(scheme, attack_suite(scheme.d, crypto_attack_seed),
                                                parse_security_mode(crypto_mode), co);
            emit(dump(to_json(report)), crypto_out);
        } else if (*version) {
            emit(dump(Json{{"name", "tdesign"}, {"version", TDESIGN_VERSION}}), "");
        }
    } catch (const ConvergenceError &e) {
        std::cerr << "error: " << e.what() << " (bounds " << e.lower_bound << ", " << e.upper_bound << ")\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
