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

// Exact Haar twirls and the representation theory behind them.
//
// The t-fold twirl X -> E_U[U^{(x)t} X U^{*(x)t}] is the orthogonal
// (Hilbert-Schmidt) projection onto the commutant of the tensor-power action,
// which by Schur-Weyl duality is spanned by the permutation operators P_sigma.
// We compute it by solving the Gram system of the P_sigma, so no explicit
// Schur transform is ever built.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "tdesign/tensor.hpp"

namespace tdesign {

using Rational = boost::multiprecision::cpp_rational;

/// Largest t accepted by the t-fold twirl routines.
inline constexpr int kMaxTwirlOrder = 6;
/// Largest d^t accepted by the t-fold twirl routines.
inline constexpr long kMaxTwirlDim = 4096;

/// Weakly decreasing tuple of nonnegative integers, zero-padded to length d.
struct Partition {
    std::vector<int> parts;
    int t = 0;
    int d = 0;

    bool operator==(const Partition &other) const = default;
    std::string str() const;
};

/// All partitions of t into at most d parts, lexicographically descending.
std::vector<Partition> partitions(int t, int d);

/// Dimension of the Weyl module V_lambda of U(d), in exact integer
/// arithmetic. Throws std::overflow_error if it does not fit in 64 bits.
std::uint64_t weyl_dimension(const Partition &lambda, int d);

/// A bijection on {0, ..., t-1}.
class Permutation {
   public:
    /// Throws ConfigError when `images` is not a bijection.
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int t);
    /// The transposition swapping a and b.
    static Permutation transposition(int t, int a, int b);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[i]; }
    const std::vector<int> &images() const { return images_; }

    Permutation inverse() const;
    /// (*this o other)(i) = this(other(i)).
    Permutation compose(const Permutation &other) const;
    int cycle_count() const;

    bool operator==(const Permutation &other) const = default;

   private:
    std::vector<int> images_;
};

/// All t! permutations of {0, ..., t-1} in lexicographic order.
std::vector<Permutation> all_permutations(int t);

/// P_sigma on (C^d)^{(x)t}: sigma.(phi_1 (x) ... (x) phi_t)
///   = phi_{sigma^-1(1)} (x) ... (x) phi_{sigma^-1(t)}.
Operator permutation_operator(const Permutation &sigma, int d);

/// Haar twirl of X in L(d^t).
Operator exact_twirl(const Operator &x, int t, int d);

/// Matrix of exact_twirl acting on row-major vec(X), size d^{2t} x d^{2t}.
Operator twirl_superoperator(int t, int d);

/// sup over states of ||T^(t)(rho)||_inf = 1 / min_lambda m_lambda.
Rational twirl_one_to_infty_norm(int t, int d);

/// The bound (2t/d)^t.
Rational twirl_one_to_infty_bound(int t, int d);

/// U (x) conj(U) twirl of X in L(d^2):
///   <psi|X|psi> psi psi^* + Tr(Q X) / (d^2 - 1) Q.
Operator exact_twirl_11(const Operator &x, int d);

/// Choi matrix of the Haar channel twirl of the channel with Choi matrix
/// `choi` (convention: choi = sum_ij |i><j| (x) N(|i><j|)). Throws
/// NotAChannelError when the input is not a channel within 1e-10.
Operator channel_twirl_exact(const Operator &choi, int d);

/// Coefficient p with channel_twirl_exact(choi) = p Choi(id) + (1-p) Choi(<I/d>):
/// p = (f - 1/d^2) / (1 - 1/d^2), f = <psi| choi / d |psi>.
double channel_twirl_coefficient(const Operator &choi, int d);

struct CanonicalOperators {
    int d = 0;
    StateVector max_entangled;  // |psi> = d^{-1/2} sum_i |ii>
    Operator psi_proj;
    Operator q_proj;  // I - psi_proj
    Operator flip;
    Operator sym_proj;      // (I + F) / 2
    Operator antisym_proj;  // (I - F) / 2
};

CanonicalOperators canonical_operators(int d);

namespace detail {
/// Dimension of the Specht module [lambda] by the hook length formula.
std::uint64_t specht_dimension(const Partition &lambda);
}  // namespace detail

}  // namespace tdesign
