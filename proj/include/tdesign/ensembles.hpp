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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tdesign/tensor.hpp"

namespace tdesign {

/// Weighted finite set of unitaries on C^d.
///
/// Provenance strings: "pauli(d)", "clifford(m)", "haar-iid(d,n,seed)",
/// "subsample(<parent>,n,seed)", "external".
struct UnitaryEnsemble {
    int d = 0;
    std::vector<Operator> elements;
    std::vector<double> weights;
    std::string provenance = "external";

    std::size_t size() const { return elements.size(); }
    bool has_uniform_weights(double tol = 1e-12) const;

    /// Throws ConfigError unless every element is a d x d unitary within 1e-10,
    /// weights are nonnegative, and they sum to 1 within 1e-12.
    void validate() const;
};

/// Builds and validates an ensemble; empty `weights` means uniform.
UnitaryEnsemble make_ensemble(int d, std::vector<Operator> elements, std::vector<double> weights,
                              std::string provenance);

/// The d^2 clock-and-shift operators X^a Z^b, uniform weights.
UnitaryEnsemble pauli_ensemble(int d);

/// The m-qubit Clifford group modulo global phase (m in {1, 2}), enumerated by
/// breadth-first closure over its generators. Each element is stored in the
/// canonical phase where the first nonzero entry is positive real.
UnitaryEnsemble clifford_ensemble(int m, std::size_t max_elements = 1'000'000);

/// n i.i.d. Haar unitaries.
UnitaryEnsemble haar_ensemble(int d, int n, std::uint64_t seed);

/// n i.i.d. draws from `parent` (with replacement, by weight), uniform
/// weights 1/n.
UnitaryEnsemble subsample(const UnitaryEnsemble &parent, int n, std::uint64_t seed);

/// The ensemble {U^*} (same weights). Useful because E_x[Dec_x o L o Enc_x]
/// is the channel twirl over the adjoint key set.
UnitaryEnsemble adjoint_ensemble(const UnitaryEnsemble &ens);

enum class DesignVerdict { exact, approximate, not_a_design };

std::string to_string(DesignVerdict v);

struct DesignCertificate {
    int t = 0;
    double defect = 0.0;
    double tolerance = 0.0;
    DesignVerdict verdict = DesignVerdict::not_a_design;
};

/// Default cap on d^{2t} (the moment superoperator has d^{2t} rows).
inline constexpr long kDefaultMomentCap = 1024;

/// Matrix of X -> sum_i w_i U_i^{(x)t} X U_i^{*(x)t} on row-major vec(X).
Operator moment_superoperator(const UnitaryEnsemble &ens, int t, long cap = kDefaultMomentCap);

/// Hilbert-Schmidt distance between the ensemble's t-fold moment map and the
/// Haar twirl, both as d^{2t} x d^{2t} matrices. The verdict is exact when
/// defect <= 1e-10 * d^t; approximate when the defect is at most half of
/// sqrt(d^{2t} - r) (r = rank of the twirl), the defect of a single unitary;
/// otherwise not_a_design.
DesignCertificate design_order_defect(const UnitaryEnsemble &ens, int t, long cap = kDefaultMomentCap);

enum class TwirlMode {
    t_fold,         // X in L(d^t):  U^{(x)t} X U^{*(x)t}
    u_ubar,         // X in L(d^2):  (U (x) conj U) X (U (x) conj U)^*
    channel_twirl,  // Choi in L(d^2): (conj U (x) U) J (conj U (x) U)^*
};

/// Weighted sum of conjugations of X by the ensemble in the given mode.
Operator sampled_twirl_apply(const UnitaryEnsemble &ens, const Operator &x, TwirlMode mode, int t = 1);

}  // namespace tdesign
