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


#include "tdesign/crypto.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "tdesign/errors.hpp"
#include "tdesign/schur_weyl.hpp"

namespace tdesign {

UnitaryEnsemble EncryptionScheme::ensemble() const { return make_ensemble(d, keys, {}, provenance); }

EncryptionScheme build_scheme(const UnitaryEnsemble &ens) {
    ens.validate();
    if (!ens.has_uniform_weights()) {
        throw ConfigError("build_scheme: keys must be uniformly weighted");
    }
    EncryptionScheme s;
    s.d = ens.d;
    s.keys = ens.elements;
    s.key_bits = std::log2(static_cast<double>(ens.size()));
    s.provenance = ens.provenance;
    for (std::size_t x = 0; x < s.keys.size(); ++x) {
        const Operator &u = s.keys[x];
        for (int i = 0; i < s.d; ++i) {
            for (int j = 0; j < s.d; ++j) {
                const Operator e = matrix_unit(s.d, i, j);
                const Operator back = u.adjoint() * (u * e * u.adjoint()) * u;
                if ((back - e).cwiseAbs().maxCoeff() > 1e-12) {
                    throw ConfigError("build_scheme: Dec o Enc is not the identity for key " + std::to_string(x));
                }
            }
        }
    }
    return s;
}

void AttackChannel::validate(int d, double tol) const {
    const long dim = static_cast<long>(d) * d_E;
    if (choi.rows() != dim * dim || choi.cols() != dim * dim) {
        throw DimensionError("attack '" + label + "': Choi matrix has the wrong dimension");
    }
    if (!map_from_choi(static_cast<int>(dim), static_cast<int>(dim), choi).is_channel(tol)) {
        throw NotAChannelError("attack '" + label + "' is not a channel within tolerance");
    }
}

std::vector<AttackChannel> attack_suite(int d, std::uint64_t seed) {
    if (d < 2) {
        throw DimensionError("attack_suite: d must be at least 2");
    }
    if (static_cast<long>(d) * d > kDefaultDiamondCap) {
        throw CapError("attack_suite: d * d exceeds the diamond cap " + std::to_string(kDefaultDiamondCap));
    }
    const Rng rng(seed);
    Operator shift = Operator::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        shift((j + 1) % d, j) = 1.0;
    }
    Rng haar_stream = rng.derive(1);
    Rng channel_stream = rng.derive(2);
    std::vector<Operator> dephase;
    for (int i = 0; i < d; ++i) {
        dephase.push_back(matrix_unit(d, i, i));
    }
    std::vector<AttackChannel> out;
    out.push_back({"identity", identity_map(d).choi, 1});
    out.push_back({"shift-conjugation", choi_of_conjugation(shift), 1});
    out.push_back({"haar-conjugation", choi_of_conjugation(ginibre_unitary(d, haar_stream)), 1});
    out.push_back({"depolarizing", depolarizing_map(d).choi, 1});
    out.push_back({"measure-and-replace", choi_from_kraus(d, d, dephase), 1});
    out.push_back({"random-channel", random_channel_choi(d, d, d * d, channel_stream), 1});
    return out;
}

std::string to_string(const SecurityMode &mode) {
    switch (mode.kind) {
        case SecurityMode::Kind::no_side_info:
            return "no-side-info";
        case SecurityMode::Kind::k_bounded:
            return "k-bounded(" + std::to_string(mode.k) + ")";
        case SecurityMode::Kind::full:
            return "full";
    }
    return "unknown";
}

SecurityMode parse_security_mode(const std::string &text) {
    if (text == "no-side-info") {
        return SecurityMode::no_side_info();
    }
    if (text == "full") {
        return SecurityMode::full();
    }
    const std::string prefix = "k-bounded(";
    if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size() + 1 && text.back() == ')') {
        const std::string digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 4) {
            const int k = std::stoi(digits);
            if (k >= 1) {
                return SecurityMode::k_bounded(k);
            }
        }
    }
    throw ConfigError("unknown security mode '" + text + "'");
}

NormReport indistinguishability_defect(const EncryptionScheme &s, const SecurityMode &mode,
                                       const CryptoOptions &options) {
    const auto delta = t_fold_deviation(s.ensemble(), 1);
    switch (mode.kind) {
        case SecurityMode::Kind::no_side_info:
            return one_to_one_distance(delta, options.search);
        case SecurityMode::Kind::k_bounded:
            return k_bounded_diamond_distance(delta, mode.k, options.search, options.diamond);
        case SecurityMode::Kind::full:
            return diamond_distance(delta, options.diamond);
    }
    throw ConfigError("unknown security mode");
}

Operator effective_attack_choi(const EncryptionScheme &s, const Operator &attack_choi) {
    const long dim = static_cast<long>(s.d) * s.d;
    if (attack_choi.rows() != dim || attack_choi.cols() != dim) {
        throw DimensionError("effective_attack_choi: attack does not act on the message space");
    }
    // Dec_x o L o Enc_x is the channel twirl by U_x^*.
    return sampled_twirl_apply(adjoint_ensemble(s.ensemble()), attack_choi, TwirlMode::channel_twirl);
}

Operator nm_target_choi(int d, double p) {
    const long dim = static_cast<long>(d) * d;
    return p * identity_map(d).choi + (1.0 - p) / d * Operator::Identity(dim, dim);
}

namespace {

void check_attack(const EncryptionScheme &s, const AttackChannel &a) {
    if (a.d_E != 1) {
        throw DimensionError("attack '" + a.label + "' carries side information (d_E = " + std::to_string(a.d_E) +
                             "), which is not evaluated");
    }
    const long dim = static_cast<long>(s.d) * s.d;
    if (a.choi.rows() != dim || a.choi.cols() != dim) {
        throw DimensionError("attack '" + a.label + "' does not act on the message space");
    }
}

double distance_at(const Operator &effective, int d, double p, const DiamondOptions &options) {
    return diamond_distance(map_from_choi(d, d, effective - nm_target_choi(d, p)), options).value;
}

// Golden-section search on [lo, hi], then the best of the search point and
// the extra candidates.
std::pair<double, double> minimize_p(const Operator &effective, int d, double lo, double hi, double width,
                                     std::vector<double> candidates, const DiamondOptions &options) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = distance_at(effective, d, c, options);
    double fe = distance_at(effective, d, e, options);
    while (b - a > width) {
        if (fc <= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = distance_at(effective, d, c, options);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = distance_at(effective, d, e, options);
        }
    }
    std::pair<double, double> best = fc <= fe ? std::pair{c, fc} : std::pair{e, fe};
    for (double p : candidates) {
        p = std::clamp(p, lo, hi);
        const double v = distance_at(effective, d, p, options);
        if (v < best.second) {
            best = {p, v};
        }
    }
    return best;
}

NonMalleabilityRow nm_row(const EncryptionScheme &s, const AttackChannel &a, const SecurityMode &mode,
                          const CryptoOptions &options, std::optional<double> theta_upper) {
    check_attack(s, a);
    if (mode.kind == SecurityMode::Kind::full) {
        throw ConfigError("non-malleability with full side information is not evaluated");
    }
    const int d = s.d;
    const Operator effective = effective_attack_choi(s, a.choi);
    NonMalleabilityRow row;
    row.label = a.label;
    row.twirl_coefficient = channel_twirl_coefficient(a.choi, d);
    const double p0 = row.twirl_coefficient;
    const double lo = -1.0 / (static_cast<double>(d) * d - 1.0);
    const auto wide = minimize_p(effective, d, lo, 1.0, options.p_width, {p0, lo, 0.0, 1.0}, options.diamond);
    const auto unit = minimize_p(effective, d, 0.0, 1.0, options.p_width, {p0, 0.0, 1.0}, options.diamond);
    row.p_star = wide.first;
    row.p_star_unit = unit.first;
    row.defect_unit = unit.second;
    const auto at_star = map_from_choi(d, d, effective - nm_target_choi(d, row.p_star));
    row.defect = diamond_distance(at_star, options.diamond);
    if (mode.kind == SecurityMode::Kind::k_bounded) {
        if (!theta_upper) {
            theta_upper = theta_upper_bound(adjoint_ensemble(s.ensemble()), options.theta).value;
        }
        const NormReport measured = k_bounded_diamond_distance(at_star, mode.k, options.search, options.diamond);
        const double k2 = static_cast<double>(mode.k) * mode.k;
        NormReport composed;
        composed.kind = NormKind::assembled;
        composed.value = k2 * *theta_upper;
        composed.restarts = options.theta.search.restarts;
        composed.terms = {{"theta_upper", *theta_upper},
                          {"k_bounded_estimate", measured.value},
                          {"diamond_at_p_star", row.defect.value}};
        row.defect = composed;
    }
    return row;
}

}  // namespace

NormReport nm_objective(const EncryptionScheme &s, const AttackChannel &a, double p, const CryptoOptions &options) {
    check_attack(s, a);
    const Operator effective = effective_attack_choi(s, a.choi);
    return diamond_distance(map_from_choi(s.d, s.d, effective - nm_target_choi(s.d, p)), options.diamond);
}

NonMalleabilityRow non_malleability_defect(const EncryptionScheme &s, const AttackChannel &a,
                                           const SecurityMode &mode, const CryptoOptions &options) {
    return nm_row(s, a, mode, options, std::nullopt);
}

SecurityReport security_report(const EncryptionScheme &s, const std::vector<AttackChannel> &attacks,
                               const SecurityMode &mode, const CryptoOptions &options) {
    SecurityReport r;
    r.provenance = s.provenance;
    r.d = s.d;
    r.key_bits = s.key_bits;
    r.mode = mode;
    r.indist_defect = indistinguishability_defect(s, mode, options);
    if (mode.kind == SecurityMode::Kind::full) {
        return r;
    }
    std::optional<double> theta_upper;
    if (mode.kind == SecurityMode::Kind::k_bounded) {
        theta_upper = theta_upper_bound(adjoint_ensemble(s.ensemble()), options.theta).value;
    }
    r.nm_defects.resize(attacks.size());
    std::vector<std::exception_ptr> errors(attacks.size());
    detail::parallel_for(static_cast<int>(attacks.size()), [&](int i) {
        try {
            r.nm_defects[i] = nm_row(s, attacks[i], mode, options, theta_upper);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return r;
}

}  // namespace tdesign
