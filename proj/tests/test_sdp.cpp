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


#include <gtest/gtest.h>

#include "tdesign/errors.hpp"
#include "tdesign/rng.hpp"
#include "tdesign/sdp.hpp"

using namespace tdesign;

namespace {

Eigen::MatrixXd random_symmetric(int n, Rng &rng) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    return 0.5 * (a + a.transpose());
}

void add_dense(std::vector<SdpProblem::Entry> &out, int block, const Eigen::MatrixXd &a) {
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out.push_back({block, r, c, a(r, c)});
}

}  // namespace

TEST(sdp, forced_optimum_on_scalar_blocks) {
    // min sum x_b s.t. x_b >= 1, written as x_b - s_b = 1 with both blocks PSD.
    SdpProblem p;
    const int k = 3;
    for (int b = 0; b < k; ++b) {
        p.block_sizes.push_back(1);
        p.objective.push_back(Eigen::MatrixXd::Constant(1, 1, -1.0));
    }
    for (int b = 0; b < k; ++b) {
        p.block_sizes.push_back(1);
        p.objective.push_back(Eigen::MatrixXd::Zero(1, 1));
    }
    p.rhs = Eigen::VectorXd::Ones(k);
    for (int b = 0; b < k; ++b) {
        p.constraints.push_back({{b, 0, 0, 1.0}, {k + b, 0, 0, -1.0}});
    }
    auto s = sdp_solve(p);
    EXPECT_NEAR(s.primal_value, -3.0, 1e-7);
    for (int b = 0; b < k; ++b) {
        EXPECT_NEAR(s.x[b](0, 0), 1.0, 1e-6);
    }
}

TEST(sdp, eigenvalue_characterization_real) {
    Rng rng(1);
    for (int n : {2, 5, 8}) {
        Eigen::MatrixXd c = random_symmetric(n, rng);
        SdpProblem p;
        p.block_sizes = {n};
        p.objective = {c};
        std::vector<SdpProblem::Entry> tr;
        for (int i = 0; i < n; ++i) tr.push_back({0, i, i, 1.0});
        p.constraints = {tr};
        p.rhs = Eigen::VectorXd::Ones(1);
        auto s = sdp_solve(p);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
        EXPECT_NEAR(s.primal_value, eig.eigenvalues()(n - 1), 1e-7);
        EXPECT_LE(s.gap(), 1e-8);
    }
}

TEST(sdp, eigenvalue_characterization_hermitian) {
    Rng rng(2);
    const int n = 4;
    Operator g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
    Operator c = 0.5 * (g + g.adjoint());
    HermitianSdp sdp;
    int b = sdp.add_block(n);
    sdp.set_objective(b, c);
    int t = sdp.add_constraint(1.0);
    for (int i = 0; i < n; ++i) sdp.add_entry(t, b, i, i, 1.0);
    auto s = sdp.solve();
    Eigen::SelfAdjointEigenSolver<Operator> eig(c);
    EXPECT_NEAR(s.primal_value, eig.eigenvalues()(n - 1), 1e-7);
    // The optimal X is the top eigenprojector.
    Operator top = eig.eigenvectors().col(n - 1) * eig.eigenvectors().col(n - 1).adjoint();
    EXPECT_LE((s.x[b] - top).norm(), 1e-3);
}

TEST(sdp, random_strictly_feasible_problem_closes_gap) {
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const std::vector<int> sizes{3, 4};
        const int m = 6;
        SdpProblem p;
        p.block_sizes = sizes;
        std::vector<Eigen::MatrixXd> x0, z0;
        for (int n : sizes) {
            Eigen::MatrixXd g = random_symmetric(n, rng);
            x0.push_back(g * g + Eigen::MatrixXd::Identity(n, n));
            Eigen::MatrixXd h = random_symmetric(n, rng);
            z0.push_back(h * h + Eigen::MatrixXd::Identity(n, n));
        }
        Eigen::VectorXd y0(m);
        for (int i = 0; i < m; ++i) y0(i) = rng.normal();
        std::vector<std::vector<Eigen::MatrixXd>> a(m);
        p.rhs.resize(m);
        for (int i = 0; i < m; ++i) {
            std::vector<SdpProblem::Entry> entries;
            double bi = 0.0;
            for (std::size_t b = 0; b < sizes.size(); ++b) {
                Eigen::MatrixXd ai = random_symmetric(sizes[b], rng);
                a[i].push_back(ai);
                add_dense(entries, static_cast<int>(b), ai);
                bi += (ai.array() * x0[b].array()).sum();
            }
            p.constraints.push_back(entries);
            p.rhs(i) = bi;
        }
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            Eigen::MatrixXd c = -z0[b];
            for (int i = 0; i < m; ++i) c += y0(i) * a[i][b];
            p.objective.push_back(c);
        }
        auto s = sdp_solve(p);
        EXPECT_LE(std::abs(s.gap()), 1e-8);
        EXPECT_LE(s.primal_infeasibility, 1e-9);
        for (const auto &xb : s.x) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xb);
            EXPECT_GE(eig.eigenvalues()(0), -1e-9);
        }
    }
}

TEST(sdp, iteration_cap_reports_bounds) {
    SdpProblem p;
    p.block_sizes = {2};
    p.objective = {Eigen::MatrixXd::Identity(2, 2)};
    p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}};
    p.rhs = Eigen::VectorXd::Ones(1);
    SdpOptions opt;
    opt.max_iterations = 1;
    try {
        sdp_solve(p, opt);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError &e) {
        EXPECT_TRUE(std::isfinite(e.lower_bound));
        EXPECT_TRUE(std::isfinite(e.upper_bound));
    }
}

TEST(sdp, unreachable_gap_falls_back_to_best_feasible_iterate) {
    SdpProblem p;
    p.block_sizes = {2};
    p.objective = {Eigen::MatrixXd::Identity(2, 2)};
    p.constraints = {{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}};
    p.rhs = Eigen::VectorXd::Ones(1);
    SdpOptions opt;
    opt.gap_tol = -1.0;
    opt.acceptable_gap_tol = -1.0;
    EXPECT_THROW(sdp_solve(p, opt), ConvergenceError);
    opt.acceptable_gap_tol = 1e-6;
    const auto s = sdp_solve(p, opt);
    EXPECT_TRUE(s.reduced_accuracy);
    EXPECT_LE(s.gap(), 1e-6);
    EXPECT_GE(s.gap(), 0.0);
    EXPECT_NEAR(s.primal_value, 1.0, 1e-6);
    EXPECT_LE(s.primal_infeasibility, opt.feas_tol);
}

TEST(sdp, validation) {
    SdpProblem p;
    p.block_sizes = {2};
    p.objective = {Eigen::MatrixXd::Identity(2, 2)};
    p.constraints = {{{0, 0, 1, 1.0}}};
    p.rhs = Eigen::VectorXd::Ones(1);
    EXPECT_THROW(sdp_solve(p), NotHermitianError);
    p.constraints = {{{0, 2, 2, 1.0}}};
    EXPECT_THROW(sdp_solve(p), DimensionError);
    p.constraints = {};
    EXPECT_THROW(sdp_solve(p), DimensionError);
}
