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


#include "tdesign/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "tdesign/errors.hpp"

namespace tdesign {

using Mat = Eigen::MatrixXd;
using Blocks = std::vector<Mat>;

void SdpProblem::validate() const {
    if (block_sizes.empty()) {
        throw DimensionError("sdp: no blocks");
    }
    if (objective.size() != block_sizes.size()) {
        throw DimensionError("sdp: objective block count does not match block sizes");
    }
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        if (block_sizes[b] < 1 || objective[b].rows() != block_sizes[b] || objective[b].cols() != block_sizes[b]) {
            throw DimensionError("sdp: objective block " + std::to_string(b) + " has the wrong size");
        }
        if ((objective[b] - objective[b].transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw NotHermitianError("sdp: objective block " + std::to_string(b) + " is not symmetric");
        }
    }
    if (rhs.size() != num_constraints()) {
        throw DimensionError("sdp: rhs length does not match constraint count");
    }
    for (int i = 0; i < num_constraints(); ++i) {
        std::map<std::tuple<int, int, int>, double> acc;
        for (const auto &e : constraints[i]) {
            if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size()) || e.row < 0 || e.col < 0 ||
                e.row >= block_sizes[e.block] || e.col >= block_sizes[e.block]) {
                throw DimensionError("sdp: constraint " + std::to_string(i) + " entry out of range");
            }
            acc[{e.block, e.row, e.col}] += e.value;
        }
        for (const auto &[key, v] : acc) {
            auto [b, r, c] = key;
            auto it = acc.find({b, c, r});
            const double mirror = it == acc.end() ? 0.0 : it->second;
            if (std::abs(v - mirror) > 1e-12) {
                throw NotHermitianError("sdp: constraint " + std::to_string(i) + " is not symmetric");
            }
        }
    }
}

namespace {

double inner(const Blocks &a, const Blocks &b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k].array() * b[k].array()).sum();
    }
    return s;
}

double frob(const Blocks &a) { return std::sqrt(inner(a, a)); }

Eigen::VectorXd apply_a(const SdpProblem &p, const Blocks &x) {
    Eigen::VectorXd out(p.num_constraints());
    for (int i = 0; i < p.num_constraints(); ++i) {
        double s = 0.0;
        for (const auto &e : p.constraints[i]) {
            s += e.value * x[e.block](e.row, e.col);
        }
        out(i) = s;
    }
    return out;
}

Blocks apply_at(const SdpProblem &p, const Eigen::VectorXd &y) {
    Blocks out;
    for (int n : p.block_sizes) {
        out.push_back(Mat::Zero(n, n));
    }
    for (int i = 0; i < p.num_constraints(); ++i) {
        for (const auto &e : p.constraints[i]) {
            out[e.block](e.row, e.col) += y(i) * e.value;
        }
    }
    return out;
}

// Entries of each constraint grouped by block, for the Schur complement.
struct BlockIndex {
    struct Group {
        int con;
        std::vector<SdpProblem::Entry> entries;
    };
    std::vector<std::vector<Group>> groups;

    explicit BlockIndex(const SdpProblem &p) : groups(p.block_sizes.size()) {
        for (int i = 0; i < p.num_constraints(); ++i) {
            std::map<int, std::vector<SdpProblem::Entry>> by_block;
            for (const auto &e : p.constraints[i]) {
                by_block[e.block].push_back(e);
            }
            for (auto &[b, entries] : by_block) {
                groups[b].push_back({i, std::move(entries)});
            }
        }
    }
};

// M_ij = <A_i, X A_j Z^-1>.
Mat schur_complement(const SdpProblem &p, const BlockIndex &index, const Blocks &x, const Blocks &zinv) {
    const int m = p.num_constraints();
    Mat out = Mat::Zero(m, m);
    for (std::size_t b = 0; b < index.groups.size(); ++b) {
        const auto &groups = index.groups[b];
        const Mat &xb = x[b];
        const Mat &zb = zinv[b];
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto &ei = groups[gi].entries;
            for (std::size_t gj = gi; gj < groups.size(); ++gj) {
                const auto &ej = groups[gj].entries;
                double s = 0.0;
                for (const auto &e : ei) {
                    for (const auto &f : ej) {
                        s += e.value * f.value * xb(e.row, f.row) * zb(f.col, e.col);
                    }
                }
                out(groups[gi].con, groups[gj].con) += s;
            }
        }
    }
    return out.selfadjointView<Eigen::Upper>();
}

// Largest alpha with x + alpha dx >= 0 (infinity when unbounded).
double max_step(const Mat &x, const Mat &dx) {
    Eigen::LLT<Mat> llt(x);
    if (llt.info() != Eigen::Success) {
        return 0.0;
    }
    const auto l = llt.matrixL();
    Mat s = l.solve(dx);
    s = l.solve(s.transpose()).transpose();
    s = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(s, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues()(0);
    if (lmin >= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -1.0 / lmin;
}

double max_step(const Blocks &x, const Blocks &dx) {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) {
        a = std::min(a, max_step(x[k], dx[k]));
    }
    return a;
}

Mat sym(const Mat &a) { return 0.5 * (a + a.transpose()); }

bool positive_definite(const Blocks &x) {
    return std::all_of(x.begin(), x.end(), [](const Mat &b) { return Eigen::LLT<Mat>(b).info() == Eigen::Success; });
}

// x + alpha dx, with alpha shrunk (up to 40 times by 0.7) until it is
// positive definite; alpha is set to 0 and x returned when that fails.
Blocks backtrack(const Blocks &x, const Blocks &dx, double &alpha) {
    for (int tries = 0; tries < 40 && alpha > 1e-12; ++tries, alpha *= 0.7) {
        Blocks next(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            next[k] = sym(x[k] + alpha * dx[k]);
        }
        if (positive_definite(next)) {
            return next;
        }
    }
    alpha = 0.0;
    return x;
}

}  // namespace

SdpSolution sdp_solve(const SdpProblem &p, const SdpOptions &opt) {
    p.validate();
    const int m = p.num_constraints();
    const std::size_t nb = p.block_sizes.size();
    const BlockIndex index(p);

    int total = 0;
    for (int n : p.block_sizes) {
        total += n;
    }
    const double norm_b = 1.0 + p.rhs.norm();
    const double norm_c = 1.0 + frob(p.objective);

    double max_a = 0.0;
    double init_x = std::max(10.0, std::sqrt(static_cast<double>(total)));
    for (int i = 0; i < m; ++i) {
        double na = 0.0;
        for (const auto &e : p.constraints[i]) {
            na += e.value * e.value;
        }
        na = std::sqrt(na);
        max_a = std::max(max_a, na);
        init_x = std::max(init_x, (1.0 + std::abs(p.rhs(i))) / (1.0 + na));
    }
    const double init_z = std::max({10.0, std::sqrt(static_cast<double>(total)), max_a, norm_c - 1.0});

    Blocks x;
    Blocks z;
    for (int n : p.block_sizes) {
        x.push_back(init_x * Mat::Identity(n, n));
        z.push_back(init_z * Mat::Identity(n, n));
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    SdpSolution sol;
    SdpSolution best;
    bool have_best = false;
    int since_improved = 0;
    double pobj = 0.0;
    double dobj = 0.0;
    // Returns the best feasible iterate when it meets acceptable_gap_tol,
    // otherwise throws.
    auto give_up = [&](const std::string &why) -> SdpSolution {
        if (have_best && best.gap() <= opt.acceptable_gap_tol) {
            best.reduced_accuracy = true;
            return best;
        }
        throw ConvergenceError(why, pobj, dobj);
    };
    for (int iter = 0; iter <= opt.max_iterations; ++iter) {
        const Eigen::VectorXd rp = p.rhs - apply_a(p, x);
        Blocks rd = apply_at(p, y);
        for (std::size_t k = 0; k < nb; ++k) {
            rd[k] -= p.objective[k] + z[k];
        }
        pobj = inner(p.objective, x);
        dobj = p.rhs.dot(y);
        const double pinf = rp.norm() / norm_b;
        const double dinf = frob(rd) / norm_c;
        if (pinf <= opt.feas_tol && dinf <= opt.feas_tol && std::abs(dobj - pobj) <= opt.gap_tol) {
            sol.primal_value = pobj;
            sol.dual_value = dobj;
            sol.x = std::move(x);
            sol.z = std::move(z);
            sol.y = std::move(y);
            sol.iterations = iter;
            sol.primal_infeasibility = pinf;
            sol.dual_infeasibility = dinf;
            return sol;
        }
        if (pinf <= opt.feas_tol && dinf <= opt.feas_tol) {
            const double gap = std::abs(dobj - pobj);
            if (!have_best || gap < 0.5 * std::abs(best.gap())) {
                since_improved = 0;
            }
            if (!have_best || gap < std::abs(best.gap())) {
                have_best = true;
                best.primal_value = std::min(pobj, dobj);
                best.dual_value = std::max(pobj, dobj);
                best.x = x;
                best.z = z;
                best.y = y;
                best.iterations = iter;
                best.primal_infeasibility = pinf;
                best.dual_infeasibility = dinf;
            }
        }
        if (have_best && ++since_improved > opt.stall_iterations) {
            return give_up("sdp: no progress on the duality gap");
        }
        if (iter == opt.max_iterations) {
            break;
        }

        const double mu = inner(x, z) / total;
        Blocks zinv(nb);
        for (std::size_t k = 0; k < nb; ++k) {
            Eigen::LLT<Mat> llt(z[k]);
            if (llt.info() != Eigen::Success) {
                return give_up("sdp: dual iterate lost positive definiteness");
            }
            zinv[k] = llt.solve(Mat::Identity(z[k].rows(), z[k].cols()));
            zinv[k] = sym(zinv[k]);
        }
        const Mat schur = schur_complement(p, index, x, zinv);
        Eigen::LLT<Mat> chol(schur);
        Eigen::LDLT<Mat> ldlt;
        const bool use_llt = chol.info() == Eigen::Success;
        if (!use_llt) {
            ldlt.compute(schur);
        }
        auto solve_raw = [&](const Eigen::VectorXd &r) -> Eigen::VectorXd {
            return use_llt ? Eigen::VectorXd(chol.solve(r)) : Eigen::VectorXd(ldlt.solve(r));
        };
        // Two rounds of iterative refinement; the Schur matrix becomes badly
        // conditioned close to the optimum.
        auto solve_m = [&](const Eigen::VectorXd &r) -> Eigen::VectorXd {
            Eigen::VectorXd v = solve_raw(r);
            for (int round = 0; round < 2; ++round) {
                v += solve_raw(r - schur * v);
            }
            return v;
        };

        Blocks x_rd_zinv(nb);
        for (std::size_t k = 0; k < nb; ++k) {
            x_rd_zinv[k] = x[k] * rd[k] * zinv[k];
        }
        const Eigen::VectorXd base_rhs = -apply_a(p, x_rd_zinv) - rp;

        struct Direction {
            Eigen::VectorXd dy;
            Blocks dx;
            Blocks dz;
        };
        auto direction = [&](const Blocks &target) {
            Direction out;
            out.dy = solve_m(apply_a(p, target) + base_rhs);
            out.dz = apply_at(p, out.dy);
            out.dx.resize(nb);
            for (std::size_t k = 0; k < nb; ++k) {
                out.dz[k] += rd[k];
                out.dx[k] = sym(target[k] - x[k] * out.dz[k] * zinv[k]);
            }
            return out;
        };

        Blocks target(nb);
        for (std::size_t k = 0; k < nb; ++k) {
            target[k] = -x[k];
        }
        const Direction pred = direction(target);
        const double ap_aff = std::min(1.0, max_step(x, pred.dx));
        const double ad_aff = std::min(1.0, max_step(z, pred.dz));
        double mu_aff = 0.0;
        for (std::size_t k = 0; k < nb; ++k) {
            mu_aff += ((x[k] + ap_aff * pred.dx[k]).array() * (z[k] + ad_aff * pred.dz[k]).array()).sum();
        }
        mu_aff /= total;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        for (std::size_t k = 0; k < nb; ++k) {
            target[k] = sigma * mu * zinv[k] - x[k] - pred.dx[k] * pred.dz[k] * zinv[k];
        }
        const Direction corr = direction(target);
        const double gamma = 0.95;
        double ap = std::min(1.0, gamma * max_step(x, corr.dx));
        double ad = std::min(1.0, gamma * max_step(z, corr.dz));
        // Near the optimum the boundary step can round onto the cone's edge;
        // shorten until the new iterates factor.
        const Blocks x_next = backtrack(x, corr.dx, ap);
        const Blocks z_next = backtrack(z, corr.dz, ad);
        if (!(ap > 1e-12) && !(ad > 1e-12)) {
            return give_up("sdp: interior point iteration stalled");
        }
        x = x_next;
        z = z_next;
        y += ad * corr.dy;
        if (!y.allFinite()) {
            return give_up("sdp: non-finite iterate");
        }
    }
    return give_up("sdp: iteration cap of " + std::to_string(opt.max_iterations) +
                   " reached without closing the duality gap");
}

int HermitianSdp::add_block(int n) {
    if (n < 1) {
        throw DimensionError("sdp: block size must be positive");
    }
    sizes_.push_back(n);
    objective_.push_back(Operator::Zero(n, n));
    return static_cast<int>(sizes_.size()) - 1;
}

void HermitianSdp::set_objective(int block, const Operator &c) {
    if (block < 0 || block >= num_blocks() || c.rows() != sizes_[block] || c.cols() != sizes_[block]) {
        throw DimensionError("sdp: objective does not match block");
    }
    objective_[block] = c;
}

int HermitianSdp::add_constraint(double rhs) {
    rhs_.push_back(rhs);
    terms_.emplace_back();
    return static_cast<int>(rhs_.size()) - 1;
}

void HermitianSdp::add_entry(int constraint, int block, int row, int col, Complex h) {
    if (constraint < 0 || constraint >= num_constraints() || block < 0 || block >= num_blocks() || row < 0 ||
        col < 0 || row >= sizes_[block] || col >= sizes_[block]) {
        throw DimensionError("sdp: constraint entry out of range");
    }
    terms_[constraint].push_back({block, row, col, h});
}

SdpProblem HermitianSdp::real_problem() const {
    SdpProblem p;
    for (int b = 0; b < num_blocks(); ++b) {
        const int n = sizes_[b];
        p.block_sizes.push_back(2 * n);
        const Operator &c = objective_[b];
        Mat emb(2 * n, 2 * n);
        emb << c.real(), -c.imag(), c.imag(), c.real();
        p.objective.push_back(0.5 * sym(emb));
    }
    p.rhs.resize(num_constraints());
    for (int i = 0; i < num_constraints(); ++i) {
        p.rhs(i) = rhs_[i];
        std::map<std::tuple<int, int, int>, double> acc;
        for (const auto &t : terms_[i]) {
            const int n = sizes_[t.block];
            const double re = 0.5 * t.value.real();
            const double im = 0.5 * t.value.imag();
            acc[{t.block, t.row, t.col}] += re;
            acc[{t.block, t.row + n, t.col + n}] += re;
            acc[{t.block, t.row, t.col + n}] -= im;
            acc[{t.block, t.row + n, t.col}] += im;
        }
        std::vector<SdpProblem::Entry> entries;
        for (const auto &[key, v] : acc) {
            if (v != 0.0) {
                entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
            }
        }
        p.constraints.push_back(std::move(entries));
    }
    return p;
}

std::vector<Operator> HermitianSdp::complex_blocks(const std::vector<Eigen::MatrixXd> &x) const {
    std::vector<Operator> out;
    for (int b = 0; b < num_blocks(); ++b) {
        const int n = sizes_[b];
        const Mat &r = x[b];
        const Mat re = 0.5 * (r.topLeftCorner(n, n) + r.bottomRightCorner(n, n));
        const Mat im = 0.5 * (r.bottomLeftCorner(n, n) - r.topRightCorner(n, n));
        Operator c(n, n);
        c.real() = re;
        c.imag() = im;
        out.push_back(0.5 * (c + c.adjoint()));
    }
    return out;
}

HermitianSdpSolution HermitianSdp::solve(const SdpOptions &options) const {
    const SdpSolution s = sdp_solve(real_problem(), options);
    HermitianSdpSolution out;
    out.primal_value = s.primal_value;
    out.dual_value = s.dual_value;
    out.x = complex_blocks(s.x);
    out.y = s.y;
    out.iterations = s.iterations;
    out.reduced_accuracy = s.reduced_accuracy;
    return out;
}

}  // namespace tdesign
