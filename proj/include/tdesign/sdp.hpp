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


// Small dense semidefinite programs, solved by a primal-dual interior point
// method (HKM direction, Mehrotra predictor-corrector).

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tdesign/tensor.hpp"

namespace tdesign {

/// Real symmetric block-diagonal SDP in the form
///
///   (P)  maximize <C, X>  s.t. <A_i, X> = b_i (i < m),  X >= 0
///   (D)  minimize b^T y   s.t. Z = sum_i y_i A_i - C >= 0.
///
/// Constraint matrices are sparse. Each entry is one matrix position, so a
/// symmetric off-diagonal coefficient is listed at both (r, c) and (c, r).
struct SdpProblem {
    struct Entry {
        int block = 0;
        int row = 0;
        int col = 0;
        double value = 0.0;
    };

    std::vector<int> block_sizes;
    std::vector<Eigen::MatrixXd> objective;
    std::vector<std::vector<Entry>> constraints;
    Eigen::VectorXd rhs;

    int num_constraints() const { return static_cast<int>(constraints.size()); }

    /// Throws DimensionError on inconsistent sizes and NotHermitianError when
    /// a constraint or objective block is not symmetric.
    void validate() const;
};

struct SdpOptions {
    /// Stop once dual - primal <= gap_tol ...
    double gap_tol = 1e-8;
    /// ... and both relative residuals are below feas_tol.
    double feas_tol = 1e-9;
    int max_iterations = 100;
    /// When gap_tol cannot be reached (stall, numerical breakdown, cap), the
    /// best feasible iterate is returned if its gap is at most this.
    double acceptable_gap_tol = 0.0;
    /// Give up after this many iterations without halving the best gap.
    int stall_iterations = 20;
};

struct SdpSolution {
    double primal_value = 0.0;
    double dual_value = 0.0;
    std::vector<Eigen::MatrixXd> x;
    std::vector<Eigen::MatrixXd> z;
    Eigen::VectorXd y;
    int iterations = 0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    /// Set when the solution met acceptable_gap_tol but not gap_tol.
    bool reduced_accuracy = false;

    double gap() const { return dual_value - primal_value; }
};

/// Throws ConvergenceError (carrying the last primal and dual objective
/// values) when the iteration cap is reached or the iteration stalls and no
/// feasible iterate met acceptable_gap_tol.
SdpSolution sdp_solve(const SdpProblem &problem, const SdpOptions &options = {});

struct HermitianSdpSolution {
    double primal_value = 0.0;
    double dual_value = 0.0;
    std::vector<Operator> x;
    Eigen::VectorXd y;
    int iterations = 0;
    bool reduced_accuracy = false;

    double gap() const { return dual_value - primal_value; }
};

/// Builder for SDPs over complex Hermitian PSD blocks:
///
///   maximize sum_b Re Tr(C_b X_b)  s.t. sum_b Re Tr(H_ib X_b) = b_i,  X_b >= 0.
///
/// Each n x n Hermitian block is mapped to the real 2n x 2n block
/// [[Re X, -Im X], [Im X, Re X]], under which Re Tr(H X) is half the real
/// inner product of the embeddings.
class HermitianSdp {
   public:
    /// Returns the block index.
    int add_block(int n);
    void set_objective(int block, const Operator &c);
    /// Returns the constraint index.
    int add_constraint(double rhs);
    /// H_ib(row, col) += h. The caller keeps each H_ib Hermitian.
    void add_entry(int constraint, int block, int row, int col, Complex h);

    int num_blocks() const { return static_cast<int>(sizes_.size()); }
    int num_constraints() const { return static_cast<int>(rhs_.size()); }

    SdpProblem real_problem() const;
    std::vector<Operator> complex_blocks(const std::vector<Eigen::MatrixXd> &x) const;
    HermitianSdpSolution solve(const SdpOptions &options = {}) const;

   private:
    struct Term {
        int block;
        int row;
        int col;
        Complex value;
    };
    std::vector<int> sizes_;
    std::vector<Operator> objective_;
    std::vector<std::vector<Term>> terms_;
    std::vector<double> rhs_;
};

}  // namespace tdesign
