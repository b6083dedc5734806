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

// Dense complex linear algebra and tensor-structure primitives.
//
// Index convention, used everywhere in the library: a composite index over
// factors (f_0, ..., f_{k-1}) is row-major with factor 0 outermost, i.e.
// (i_0, ..., i_{k-1}) -> ((i_0 * f_1 + i_1) * f_2 + i_2) ... . kron(A, B)
// therefore puts A on factor 0.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "tdesign/rng.hpp"

namespace tdesign {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Factorization of an operator's dimension into tensor factors.
struct TensorShape {
    std::vector<int> factors;

    TensorShape() = default;
    TensorShape(std::initializer_list<int> f) : factors(f) {}
    explicit TensorShape(std::vector<int> f) : factors(std::move(f)) {}

    /// Product of the factors.
    long total() const;
    std::size_t size() const { return factors.size(); }

    /// `count` copies of `d`.
    static TensorShape uniform(int d, int count);
};

Operator kron(const Operator &a, const Operator &b);
StateVector kron(const StateVector &a, const StateVector &b);

/// a (x) a (x) ... (x) a, `t` times. t = 0 gives the 1x1 identity.
Operator kron_power(const Operator &a, int t);

/// Traces out every factor not in `keep`. Kept factors stay in their
/// original relative order.
Operator partial_trace(const Operator &x, const TensorShape &shape, const std::vector<int> &keep);

/// Transposes factor `which` of a bipartite operator.
Operator partial_transpose(const Operator &x, const TensorShape &shape, int which);

/// Reorders tensor factors: output factor k is input factor order[k].
Operator permute_factors(const Operator &x, const TensorShape &shape, const std::vector<int> &order);

struct HermitianEigen {
    Eigen::VectorXd values;  // ascending
    Operator vectors;        // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian operator. Asymmetry up to 1e-10
/// (relative to the operator's scale) is symmetrized away; anything larger
/// throws NotHermitianError.
HermitianEigen eig_hermitian(const Operator &x);

/// Largest |x_ij - conj(x_ji)|.
double hermitian_defect(const Operator &x);

/// Spectral norm (largest singular value).
double operator_norm(const Operator &x);
/// Sum of singular values.
double trace_norm(const Operator &x);
/// Frobenius norm.
double hs_norm(const Operator &x);

/// ||U^* U - I||_inf.
double unitarity_defect(const Operator &u);

/// Haar-random unitary via QR of a complex Ginibre matrix, with the phases of
/// R's diagonal pushed into Q.
Operator ginibre_unitary(int d, Rng &rng);

/// Uniformly random unit vector in C^d.
StateVector random_state(int d, Rng &rng);

/// Matrix unit |row><col| of size d.
Operator matrix_unit(int d, int row, int col);

/// |v><v|.
Operator projector(const StateVector &v);

}  // namespace tdesign
