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


// Unitary quantum encryption schemes and their security defects.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdesign/channel_norms.hpp"
#include "tdesign/ensembles.hpp"

namespace tdesign {

/// Enc_x(X) = U_x X U_x^*, Dec_x its inverse, with uniformly random keys.
struct EncryptionScheme {
    int d = 0;
    std::vector<Operator> keys;
    double key_bits = 0.0;
    std::string provenance;

    /// The key set as a uniform ensemble.
    UnitaryEnsemble ensemble() const;
};

/// Throws ConfigError for non-uniform weights or when Dec o Enc differs from
/// the identity on a matrix unit by more than 1e-12.
EncryptionScheme build_scheme(const UnitaryEnsemble &ens);

struct AttackChannel {
    std::string label;
    Operator choi;
    int d_E = 1;

    /// Throws NotAChannelError unless the Choi matrix is PSD and trace
    /// preserving within tol.
    void validate(int d, double tol = 1e-10) const;
};

/// identity, shift conjugation, Haar conjugation, depolarizing,
/// measure-and-replace, random channel.
std::vector<AttackChannel> attack_suite(int d, std::uint64_t seed = 0);

struct SecurityMode {
    enum class Kind { no_side_info, k_bounded, full };
    Kind kind = Kind::no_side_info;
    int k = 1;

    static SecurityMode no_side_info() { return {}; }
    static SecurityMode k_bounded(int k) { return {Kind::k_bounded, k}; }
    static SecurityMode full() { return {Kind::full, 0}; }
};

/// "no-side-info", "k-bounded(k)" or "full".
std::string to_string(const SecurityMode &mode);
/// Inverse of to_string; throws ConfigError.
SecurityMode parse_security_mode(const std::string &text);

struct CryptoOptions {
    SearchOptions search;
    DiamondOptions diamond;
    ThetaOptions theta;
    /// Width at which the golden-section search on p stops.
    double p_width = 1e-6;
};

/// Distance between E_x[Enc_x] and the fully depolarizing channel, in the
/// 1->1 norm (no side info), the k-bounded diamond norm, or the diamond norm.
NormReport indistinguishability_defect(const EncryptionScheme &s, const SecurityMode &mode,
                                       const CryptoOptions &options = {});

/// Choi matrix of E_x[Dec_x o L o Enc_x].
Operator effective_attack_choi(const EncryptionScheme &s, const Operator &attack_choi);

/// Choi matrix of p id + (1 - p) <I/d>.
Operator nm_target_choi(int d, double p);

/// Diamond distance between the effective channel and nm_target_choi(d, p).
NormReport nm_objective(const EncryptionScheme &s, const AttackChannel &a, double p,
                        const CryptoOptions &options = {});

struct NonMalleabilityRow {
    std::string label;
    /// Minimizer over the whole range where the target is a channel,
    /// p in [-1/(d^2-1), 1].
    double p_star = 0.0;
    NormReport defect;
    /// Minimizer and minimum restricted to p in [0, 1].
    double p_star_unit = 0.0;
    double defect_unit = 0.0;
    /// (f - 1/d^2) / (1 - 1/d^2) for the attack's entanglement fidelity f.
    double twirl_coefficient = 0.0;
};

/// Golden-section search for p_star. In no-side-info mode the defect is the
/// minimized diamond distance. In k-bounded mode the defect is the composed
/// bound k^2 * (assembled diamond-to-diamond upper bound of the key set), with
/// the measured k-bounded distance at p_star listed in `terms`. Throws
/// DimensionError for side-information attacks (d_E != 1) and ConfigError in
/// full mode.
NonMalleabilityRow non_malleability_defect(const EncryptionScheme &s, const AttackChannel &a,
                                           const SecurityMode &mode, const CryptoOptions &options = {});

/// All defects are upper bounds on the definitional quantities, since the
/// reference state sigma is fixed to I/d.
struct SecurityReport {
    std::string provenance;
    int d = 0;
    double key_bits = 0.0;
    SecurityMode mode;
    NormReport indist_defect;
    std::vector<NonMalleabilityRow> nm_defects;
};

SecurityReport security_report(const EncryptionScheme &s, const std::vector<AttackChannel> &attacks,
                               const SecurityMode &mode, const CryptoOptions &options = {});

}  // namespace tdesign
