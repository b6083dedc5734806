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

#include "tdesign/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tdesign/errors.hpp"

namespace tdesign {

namespace {

void check_shape(const Operator &x, const TensorShape &shape) {
    if (x.rows() != x.cols()) {
        throw DimensionError("operator is not square");
    }
    for (int f : shape.factors) {
        if (f < 1) {
            throw DimensionError("tensor factors must be positive");
        }
    }
    if (shape.total() != x.rows()) {
        throw DimensionError(
            "tensor shape product " + std::to_string(shape.total()) + " does not match operator dimension " +
            std::to_string(x.rows()));
    }
}

// Row-major strides, factor 0 outermost.
std::vector<long> strides_of(const std::vector<int> &factors) {
    std::vector<long> s(factors.size(), 1);
    for (int k = static_cast<int>(factors.size()) - 2; k >= 0; --k) {
        s[k] = s[k + 1] * factors[k + 1];
    }
    return s;
}

// Full indices spanned by the given factors (others at digit 0).
std::vector<long> offsets_over(const std::vector<int> &factors, const std::vector<long> &strides,
                               const std::vector<int> &which) {
    std::vector<long> out{0};
    for (int k : which) {
        std::vector<long> next;
        next.reserve(out.size() * factors[k]);
        for (long base : out) {
            for (int digit = 0; digit < factors[k]; ++digit) {
                next.push_back(base + digit * strides[k]);
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

long TensorShape::total() const {
    long p = 1;
    for (int f : factors) {
        p *= f;
    }
    return p;
}

TensorShape TensorShape::uniform(int d, int count) { return TensorShape(std::vector<int>(count, d)); }

Operator kron(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

StateVector kron(const StateVector &a, const StateVector &b) {
    StateVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

Operator kron_power(const Operator &a, int t) {
    Operator out = Operator::Identity(1, 1);
    for (int k = 0; k < t; ++k) {
        out = kron(out, a);
    }
    return out;
}

Operator partial_trace(const Operator &x, const TensorShape &shape, const std::vector<int> &keep) {
    check_shape(x, shape);
    const int nf = static_cast<int>(shape.size());
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw DimensionError("partial_trace: duplicate factor in keep set");
    }
    std::vector<int> traced;
    for (int k = 0; k < nf; ++k) {
        if (std::find(kept.begin(), kept.end(), k) == kept.end()) {
            traced.push_back(k);
        }
    }
    for (int k : kept) {
        if (k < 0 || k >= nf) {
            throw DimensionError("partial_trace: factor index out of range");
        }
    }
    const auto strides = strides_of(shape.factors);
    const auto kept_off = offsets_over(shape.factors, strides, kept);
    const auto traced_off = offsets_over(shape.factors, strides, traced);

    const auto n = static_cast<Eigen::Index>(kept_off.size());
    Operator out = Operator::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            Complex acc = 0.0;
            for (long c : traced_off) {
                acc += x(kept_off[a] + c, kept_off[b] + c);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

Operator partial_transpose(const Operator &x, const TensorShape &shape, int which) {
    check_shape(x, shape);
    if (shape.size() != 2) {
        throw DimensionError("partial_transpose: shape must be bipartite");
    }
    if (which < 0 || which > 1) {
        throw DimensionError("partial_transpose: factor index must be 0 or 1");
    }
    const int d0 = shape.factors[0];
    const int d1 = shape.factors[1];
    Operator out(x.rows(), x.cols());
    for (int i0 = 0; i0 < d0; ++i0) {
        for (int i1 = 0; i1 < d1; ++i1) {
            for (int j0 = 0; j0 < d0; ++j0) {
                for (int j1 = 0; j1 < d1; ++j1) {
                    const long r = static_cast<long>(i0) * d1 + i1;
                    const long c = static_cast<long>(j0) * d1 + j1;
                    long src_r;
                    long src_c;
                    if (which == 0) {
                        src_r = static_cast<long>(j0) * d1 + i1;
                        src_c = static_cast<long>(i0) * d1 + j1;
                    } else {
                        src_r = static_cast<long>(i0) * d1 + j1;
                        src_c = static_cast<long>(j0) * d1 + i1;
                    }
                    out(r, c) = x(src_r, src_c);
                }
            }
        }
    }
    return out;
}

Operator permute_factors(const Operator &x, const TensorShape &shape, const std::vector<int> &order) {
    check_shape(x, shape);
    const int nf = static_cast<int>(shape.size());
    if (static_cast<int>(order.size()) != nf) {
        throw DimensionError("permute_factors: order has wrong length");
    }
    std::vector<int> seen(nf, 0);
    for (int k : order) {
        if (k < 0 || k >= nf || seen[k]++) {
            throw DimensionError("permute_factors: order is not a permutation");
        }
    }
    std::vector<int> out_factors(nf);
    for (int k = 0; k < nf; ++k) {
        out_factors[k] = shape.factors[order[k]];
    }
    const auto in_strides = strides_of(shape.factors);
    const long total = shape.total();
    // source[out_index] = in_index
    std::vector<long> source(total);
    std::vector<int> digits(nf, 0);
    for (long idx = 0; idx < total; ++idx) {
        long in_idx = 0;
        for (int k = 0; k < nf; ++k) {
            in_idx += digits[k] * in_strides[order[k]];
        }
        source[idx] = in_idx;
        for (int k = nf - 1; k >= 0; --k) {
            if (++digits[k] < out_factors[k]) {
                break;
            }
            digits[k] = 0;
        }
    }
    Operator out(total, total);
    for (long r = 0; r < total; ++r) {
        for (long c = 0; c < total; ++c) {
            out(r, c) = x(source[r], source[c]);
        }
    }
    return out;
}

double hermitian_defect(const Operator &x) {
    if (x.rows() != x.cols()) {
        throw DimensionError("hermitian_defect: operator is not square");
    }
    return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen eig_hermitian(const Operator &x) {
    if (x.rows() != x.cols()) {
        throw DimensionError("eig_hermitian: operator is not square");
    }
    if (x.size() == 0) {
        throw DimensionError("eig_hermitian: empty operator");
    }
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if (hermitian_defect(x) > 1e-10 * scale) {
        throw NotHermitianError("eig_hermitian: input asymmetry exceeds 1e-10");
    }
    const Operator sym = 0.5 * (x + x.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NotHermitianError("eig_hermitian: eigensolver failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const Operator &x) {
    if (x.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Operator> svd(x);
    return svd.singularValues()(0);
}

double trace_norm(const Operator &x) {
    if (x.size() == 0) {
        return 0.0;
    }
    if (x.rows() == x.cols() && hermitian_defect(x) <= 1e-13 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        Eigen::SelfAdjointEigenSolver<Operator> solver(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
        return solver.eigenvalues().cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Operator> svd(x);
    return svd.singularValues().sum();
}

double hs_norm(const Operator &x) { return x.norm(); }

double unitarity_defect(const Operator &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    const Operator e = u.adjoint() * u - Operator::Identity(u.rows(), u.cols());
    return operator_norm(e);
}

Operator ginibre_unitary(int d, Rng &rng) {
    if (d < 1) {
        throw DimensionError("ginibre_unitary: dimension must be positive");
    }
    Operator g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            g(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Operator> qr(g);
    Operator q = qr.householderQ();
    const Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        const double mag = std::abs(r(k, k));
        const Complex phase = mag > 0 ? r(k, k) / mag : Complex(1.0);
        q.col(k) *= phase;
    }
    return q;
}

StateVector random_state(int d, Rng &rng) {
    StateVector v(d);
    for (int i = 0; i < d; ++i) {
        v(i) = rng.complex_normal();
    }
    return v / v.norm();
}

Operator matrix_unit(int d, int row, int col) {
    Operator e = Operator::Zero(d, d);
    e(row, col) = 1.0;
    return e;
}

Operator projector(const StateVector &v) { return v * v.adjoint(); }

}  // namespace tdesign
