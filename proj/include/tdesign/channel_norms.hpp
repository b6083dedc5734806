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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdesign/ensembles.hpp"
#include "tdesign/tensor.hpp"

namespace tdesign {

struct HermitianPreservingMap;

/// How a map was built, kept so its Choi matrix can be rebuilt and checked.
struct MapStructure {
    enum class Kind { kraus, unitary_mixture, difference };
    Kind kind = Kind::kraus;
    std::vector<Operator> kraus;
    std::shared_ptr<const UnitaryEnsemble> ensemble;
    TwirlMode mode = TwirlMode::t_fold;
    int t = 1;
    std::shared_ptr<const HermitianPreservingMap> plus;
    std::shared_ptr<const HermitianPreservingMap> minus;
};

/// A linear map L(d_in) -> L(d_out) stored by its Choi matrix
///   choi = sum_ij |i><j| (x) M(|i><j|)   (input factor first).
struct HermitianPreservingMap {
    int d_in = 0;
    int d_out = 0;
    Operator choi;
    std::shared_ptr<const MapStructure> structure;

    Operator apply(const Operator &x) const;
    Operator apply_adjoint(const Operator &y) const;

    /// Throws DimensionError / NotHermitianError unless the Choi matrix has
    /// the right size and is Hermitian within 1e-10, and (when a structure is
    /// attached) matches its reconstruction within 1e-10.
    void validate() const;
    bool is_channel(double tol = 1e-10) const;
    /// Choi matrix rebuilt from `structure` (or `choi` when there is none).
    Operator reconstruct_choi() const;
};

HermitianPreservingMap map_from_choi(int d_in, int d_out, Operator choi);
HermitianPreservingMap map_from_function(int d_in, int d_out, const std::function<Operator(const Operator &)> &fn);
HermitianPreservingMap map_from_kraus(int d_in, int d_out, std::vector<Operator> kraus);
/// X -> sum_i w_i V_i X V_i^*, with V_i determined by the twirl mode.
HermitianPreservingMap map_from_ensemble(const UnitaryEnsemble &ens, TwirlMode mode, int t = 1);
HermitianPreservingMap map_difference(const HermitianPreservingMap &a, const HermitianPreservingMap &b);

HermitianPreservingMap identity_map(int d);
/// The replacement channel <I/d>: X -> Tr(X) I/d.
HermitianPreservingMap depolarizing_map(int d);
HermitianPreservingMap exact_twirl_map(int t, int d);
HermitianPreservingMap exact_twirl_11_map(int d);
/// id_k (x) m, acting on L(k d_in) with the ancilla factor first.
HermitianPreservingMap tensor_identity(int k, const HermitianPreservingMap &m);

/// T^(t)_{ens} - T^(t) on L(d^t).
HermitianPreservingMap t_fold_deviation(const UnitaryEnsemble &ens, int t);
/// U (x) conj(U) sampled twirl minus T^(1,1), on L(d^2).
HermitianPreservingMap u_ubar_deviation(const UnitaryEnsemble &ens);

Operator choi_from_kraus(int d_in, int d_out, const std::vector<Operator> &kraus);
/// Choi matrix of V . V^* for a d_out x d_in matrix V.
Operator choi_of_conjugation(const Operator &v);
/// Choi matrix of a channel with a Haar-random isometric dilation into
/// an environment of dimension `env`.
Operator random_channel_choi(int d_in, int d_out, int env, Rng &rng);

enum class NormKind { exact, certified, heuristic_lower, assembled };

std::string to_string(NormKind kind);

struct NormReport {
    double value = 0.0;
    NormKind kind = NormKind::exact;
    /// certified: dual - primal of the final solve.
    double gap = 0.0;
    /// heuristic_lower: number of restarts.
    int restarts = 0;
    std::optional<double> lower_bound;
    std::optional<double> upper_bound;
    /// Input state achieving the value (system, or ancilla (x) system).
    std::optional<StateVector> witness;
    /// Named components of assembled bounds and cross-checks.
    std::vector<std::pair<std::string, double>> terms;
};

/// Default cap on d_in * d_out for the diamond-norm SDP.
inline constexpr long kDefaultDiamondCap = 64;

struct DiamondOptions {
    double tol = 1e-7;
    long cap = kDefaultDiamondCap;
    int max_iterations = 100;
};

struct SearchOptions {
    int restarts = 64;
    std::uint64_t seed = 0;
    int max_iterations = 500;
    /// Random pure-state cross-check sample size for d_in <= 3; negative
    /// means the default of 10^6, zero disables it.
    long cross_check_samples = -1;
};

enum class InputSubspace { all, orthogonal_to_psi };

/// Certified diamond norm of `m` by the Choi-matrix SDP.
NormReport diamond_distance(const HermitianPreservingMap &m, const DiamondOptions &options = {});

NormReport one_to_one_distance(const HermitianPreservingMap &m, const SearchOptions &options = {});

NormReport one_to_infty_distance(const HermitianPreservingMap &m, const SearchOptions &options = {},
                                 InputSubspace subspace = InputSubspace::all);

/// ||id_k (x) m||_{1->1}. k = 1: restart search; k >= d_in: the diamond SDP;
/// otherwise a restart search over inputs of Schmidt rank <= k, kept
/// monotone in k, with the diamond SDP value as upper_bound.
NormReport k_bounded_diamond_distance(const HermitianPreservingMap &m, int k, const SearchOptions &search = {},
                                      const DiamondOptions &diamond = {});

struct ThetaOptions {
    SearchOptions search;
    DiamondOptions diamond;
    /// Restarts of the channel search for lower estimates.
    int channel_restarts = 16;
    /// SDP alternation rounds per channel restart.
    int ascent_rounds = 10;
    int max_dimension = 4;
};

struct ThetaBounds {
    NormReport lower;
    NormReport upper;
};

/// (id_k (x) (Theta - Theta_ens))(M) for the Choi matrix of M on L(k d).
Operator theta_deviation(const UnitaryEnsemble &ens, const Operator &choi, int k = 1);
/// Hilbert-Schmidt adjoint of theta_deviation.
Operator theta_deviation_adjoint(const UnitaryEnsemble &ens, const Operator &g, int k = 1);

/// Lower estimate of sup_N ||(Theta - Theta_ens)(N)||_diamond over channels.
NormReport theta_lower_bound(const UnitaryEnsemble &ens, const ThetaOptions &options = {});
/// d^2 s_perp + 2 sqrt(d) s_1 (+ d ||Delta(psi psi)||_1), kind assembled.
NormReport theta_upper_bound(const UnitaryEnsemble &ens, const ThetaOptions &options = {});
ThetaBounds theta_distance_bounds(const UnitaryEnsemble &ens, const ThetaOptions &options = {});
/// Lower estimate of ||id_k (x) (Theta - Theta_ens)||_{diamond -> diamond}
/// over channels on L(k d).
NormReport k_bounded_theta_estimate(const UnitaryEnsemble &ens, int k, const ThetaOptions &options = {});

/// max over traceless Y with ||Y||_2 = sqrt(d) of ||sum_i w_i U_i Y U_i^*||_inf.
NormReport traceless_one_design_deviation(const UnitaryEnsemble &ens, const SearchOptions &options = {});

namespace detail {

struct DiamondSolve {
    double primal = 0.0;
    double dual = 0.0;
    Operator w0;
    Operator w1;
    Operator rho;
};

/// The diamond-norm SDP: maximize <J, W0 - W1> with W0 + W1 <= rho (x) I,
/// rho a density matrix on the input factor.
DiamondSolve diamond_sdp(const Operator &choi, int d_in, int d_out, const DiamondOptions &options);

/// Choi matrix of a channel L(d_in) -> L(d_out) maximizing Re Tr(K J).
Operator best_channel(const Operator &k, int d_in, int d_out, const DiamondOptions &options);

/// Runs fn(0..count-1) on worker threads; rethrows the first exception.
void parallel_for(int count, const std::function<void(int)> &fn);

}  // namespace detail

}  // namespace tdesign
