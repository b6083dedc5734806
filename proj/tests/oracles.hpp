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


// Independent reference computations used only by the tests. None of these
// share code paths with the library routines they check.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "tdesign/rng.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double trace_norm(const Mat &h) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().sum();
}

/// ||(A (x) I) J (A (x) I)^*||_1 for an input state whose ancilla-system
/// amplitude matrix is A (Frobenius norm 1).
inline double diamond_objective(const Mat &choi, int d_in, int d_out, const Mat &a) {
    Mat big = Mat::Zero(d_in * d_out, d_in * d_out);
    for (int i = 0; i < d_in; ++i)
        for (int j = 0; j < d_in; ++j)
            if (a(i, j) != std::complex<double>(0.0))
                for (int o = 0; o < d_out; ++o) big(i * d_out + o, j * d_out + o) = a(i, j);
    return trace_norm(big * choi * big.adjoint());
}

inline Mat random_amplitudes(int d, tdesign::Rng &rng) {
    Mat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
    return a / a.norm();
}

/// Diamond norm by random sampling of pure inputs with a d_in-dimensional
/// ancilla followed by stochastic hill climbing from the best samples.
inline double brute_force_diamond(const Mat &choi, int d_in, int d_out, int samples, std::uint64_t seed) {
    tdesign::Rng rng(seed);
    std::vector<std::pair<double, Mat>> pool;
    for (int s = 0; s < samples; ++s) {
        Mat a = random_amplitudes(d_in, rng);
        pool.emplace_back(diamond_objective(choi, d_in, d_out, a), a);
        if (pool.size() > 64) {
            std::sort(pool.begin(), pool.end(), [](auto &x, auto &y) { return x.first > y.first; });
            pool.resize(8);
        }
    }
    std::sort(pool.begin(), pool.end(), [](auto &x, auto &y) { return x.first > y.first; });
    pool.resize(std::min<std::size_t>(pool.size(), 8));
    double best = 0.0;
    for (auto &[value, a] : pool) {
        double step = 0.1;
        int fails = 0;
        while (step > 1e-9) {
            Mat b = a + step * random_amplitudes(d_in, rng);
            b /= b.norm();
            double v = diamond_objective(choi, d_in, d_out, b);
            if (v > value) {
                value = v;
                a = b;
                fails = 0;
            } else if (++fails > 40) {
                step *= 0.5;
                fails = 0;
            }
        }
        best = std::max(best, value);
    }
    return best;
}

/// Closed form for ||U . U^* - V . V^*||_diamond: 2 sqrt(1 - r^2), r the
/// distance from 0 to the convex hull of the eigenvalues of U^* V (d = 2).
inline double unitary_difference_diamond_2(const Mat &u, const Mat &v) {
    Eigen::ComplexEigenSolver<Mat> es(u.adjoint() * v);
    std::complex<double> a = es.eigenvalues()(0);
    std::complex<double> b = es.eigenvalues()(1);
    double t = std::clamp(-std::real(std::conj(a) * (b - a)) / std::norm(b - a), 0.0, 1.0);
    double r = std::abs(a + t * (b - a));
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - r * r));
}

}  // namespace oracle
