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


#include "tdesign/channel_norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "tdesign/errors.hpp"
#include "tdesign/schur_weyl.hpp"
#include "tdesign/sdp.hpp"

namespace tdesign {

namespace {

int int_pow(int base, int exp) {
    int out = 1;
    for (int k = 0; k < exp; ++k) {
        out *= base;
    }
    return out;
}

Operator herm(const Operator &a) { return 0.5 * (a + a.adjoint()); }

Operator mode_unitary(const Operator &u, TwirlMode mode, int t) {
    switch (mode) {
        case TwirlMode::t_fold:
            return kron_power(u, t);
        case TwirlMode::u_ubar:
            return kron(u, Operator(u.conjugate()));
        case TwirlMode::channel_twirl:
            return kron(Operator(u.conjugate()), u);
    }
    return u;
}

void check_choi_shape(int d_in, int d_out, const Operator &choi) {
    if (d_in < 1 || d_out < 1) {
        throw DimensionError("map dimensions must be positive");
    }
    const long n = static_cast<long>(d_in) * d_out;
    if (choi.rows() != n || choi.cols() != n) {
        throw DimensionError("Choi matrix is " + std::to_string(choi.rows()) + "x" + std::to_string(choi.cols()) +
                             ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
}

}  // namespace

Operator HermitianPreservingMap::apply(const Operator &x) const {
    if (x.rows() != d_in || x.cols() != d_in) {
        throw DimensionError("apply: input dimension does not match d_in");
    }
    Operator out = Operator::Zero(d_out, d_out);
    for (int i = 0; i < d_in; ++i) {
        for (int j = 0; j < d_in; ++j) {
            if (x(i, j) != Complex(0.0)) {
                out += x(i, j) * choi.block(i * d_out, j * d_out, d_out, d_out);
            }
        }
    }
    return out;
}

Operator HermitianPreservingMap::apply_adjoint(const Operator &y) const {
    if (y.rows() != d_out || y.cols() != d_out) {
        throw DimensionError("apply_adjoint: input dimension does not match d_out");
    }
    Operator out(d_in, d_in);
    for (int a = 0; a < d_in; ++a) {
        for (int b = 0; b < d_in; ++b) {
            out(a, b) = (choi.block(a * d_out, b * d_out, d_out, d_out).conjugate().cwiseProduct(y)).sum();
        }
    }
    return out;
}

Operator HermitianPreservingMap::reconstruct_choi() const {
    if (!structure) {
        return choi;
    }
    switch (structure->kind) {
        case MapStructure::Kind::kraus:
            return choi_from_kraus(d_in, d_out, structure->kraus);
        case MapStructure::Kind::unitary_mixture: {
            const auto &ens = *structure->ensemble;
            Operator out = Operator::Zero(choi.rows(), choi.cols());
            for (std::size_t k = 0; k < ens.size(); ++k) {
                out += ens.weights[k] * choi_of_conjugation(mode_unitary(ens.elements[k], structure->mode, structure->t));
            }
            return out;
        }
        case MapStructure::Kind::difference:
            return structure->plus->reconstruct_choi() - structure->minus->reconstruct_choi();
    }
    return choi;
}

void HermitianPreservingMap::validate() const {
    check_choi_shape(d_in, d_out, choi);
    const double scale = std::max(1.0, choi.cwiseAbs().maxCoeff());
    if (hermitian_defect(choi) > 1e-10 * scale) {
        throw NotHermitianError("map is not Hermitian preserving: Choi asymmetry exceeds 1e-10");
    }
    if (structure && (reconstruct_choi() - choi).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ConfigError("map structure does not reproduce its Choi matrix within 1e-10");
    }
}

bool HermitianPreservingMap::is_channel(double tol) const {
    if (hermitian_defect(choi) > tol) {
        return false;
    }
    if (eig_hermitian(herm(choi)).values(0) < -tol) {
        return false;
    }
    const Operator marginal = partial_trace(choi, TensorShape({d_in, d_out}), {0});
    return (marginal - Operator::Identity(d_in, d_in)).cwiseAbs().maxCoeff() <= tol;
}

HermitianPreservingMap map_from_choi(int d_in, int d_out, Operator choi) {
    check_choi_shape(d_in, d_out, choi);
    HermitianPreservingMap m;
    m.d_in = d_in;
    m.d_out = d_out;
    m.choi = std::move(choi);
    m.validate();
    return m;
}

HermitianPreservingMap map_from_function(int d_in, int d_out, const std::function<Operator(const Operator &)> &fn) {
    Operator choi(static_cast<long>(d_in) * d_out, static_cast<long>(d_in) * d_out);
    for (int i = 0; i < d_in; ++i) {
        for (int j = 0; j < d_in; ++j) {
            const Operator y = fn(matrix_unit(d_in, i, j));
            if (y.rows() != d_out || y.cols() != d_out) {
                throw DimensionError("map_from_function: output dimension does not match d_out");
            }
            choi.block(i * d_out, j * d_out, d_out, d_out) = y;
        }
    }
    return map_from_choi(d_in, d_out, std::move(choi));
}

Operator choi_of_conjugation(const Operator &v) {
    const int d_out = static_cast<int>(v.rows());
    const int d_in = static_cast<int>(v.cols());
    StateVector vec(static_cast<long>(d_in) * d_out);
    for (int i = 0; i < d_in; ++i) {
        for (int k = 0; k < d_out; ++k) {
            vec(i * d_out + k) = v(k, i);
        }
    }
    return vec * vec.adjoint();
}

Operator choi_from_kraus(int d_in, int d_out, const std::vector<Operator> &kraus) {
    Operator out = Operator::Zero(static_cast<long>(d_in) * d_out, static_cast<long>(d_in) * d_out);
    for (const auto &k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in) {
            throw DimensionError("Kraus operator has the wrong shape");
        }
        out += choi_of_conjugation(k);
    }
    return out;
}

HermitianPreservingMap map_from_kraus(int d_in, int d_out, std::vector<Operator> kraus) {
    HermitianPreservingMap m;
    m.d_in = d_in;
    m.d_out = d_out;
    m.choi = choi_from_kraus(d_in, d_out, kraus);
    auto s = std::make_shared<MapStructure>();
    s->kind = MapStructure::Kind::kraus;
    s->kraus = std::move(kraus);
    m.structure = std::move(s);
    return m;
}

HermitianPreservingMap map_from_ensemble(const UnitaryEnsemble &ens, TwirlMode mode, int t) {
    ens.validate();
    const int dim = mode == TwirlMode::t_fold ? int_pow(ens.d, t) : ens.d * ens.d;
    HermitianPreservingMap m;
    m.d_in = dim;
    m.d_out = dim;
    m.choi = Operator::Zero(static_cast<long>(dim) * dim, static_cast<long>(dim) * dim);
    for (std::size_t k = 0; k < ens.size(); ++k) {
        m.choi += ens.weights[k] * choi_of_conjugation(mode_unitary(ens.elements[k], mode, t));
    }
    auto s = std::make_shared<MapStructure>();
    s->kind = MapStructure::Kind::unitary_mixture;
    s->ensemble = std::make_shared<const UnitaryEnsemble>(ens);
    s->mode = mode;
    s->t = t;
    m.structure = std::move(s);
    return m;
}

HermitianPreservingMap map_difference(const HermitianPreservingMap &a, const HermitianPreservingMap &b) {
    if (a.d_in != b.d_in || a.d_out != b.d_out) {
        throw DimensionError("map_difference: maps have different dimensions");
    }
    HermitianPreservingMap m;
    m.d_in = a.d_in;
    m.d_out = a.d_out;
    m.choi = a.choi - b.choi;
    auto s = std::make_shared<MapStructure>();
    s->kind = MapStructure::Kind::difference;
    s->plus = std::make_shared<const HermitianPreservingMap>(a);
    s->minus = std::make_shared<const HermitianPreservingMap>(b);
    m.structure = std::move(s);
    return m;
}

HermitianPreservingMap identity_map(int d) { return map_from_kraus(d, d, {Operator::Identity(d, d)}); }

HermitianPreservingMap depolarizing_map(int d) {
    std::vector<Operator> kraus;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            kraus.push_back(s * matrix_unit(d, i, j));
        }
    }
    return map_from_kraus(d, d, std::move(kraus));
}

HermitianPreservingMap exact_twirl_map(int t, int d) {
    if (t == 1) {
        return depolarizing_map(d);
    }
    const int dim = int_pow(d, t);
    return map_from_function(dim, dim, [&](const Operator &x) { return exact_twirl(x, t, d); });
}

HermitianPreservingMap exact_twirl_11_map(int d) {
    return map_from_function(d * d, d * d, [&](const Operator &x) { return exact_twirl_11(x, d); });
}

HermitianPreservingMap tensor_identity(int k, const HermitianPreservingMap &m) {
    if (k < 1) {
        throw DimensionError("tensor_identity: k must be positive");
    }
    Operator id_choi = Operator::Zero(k * k, k * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            id_choi(i * k + i, j * k + j) = 1.0;
        }
    }
    // kron gives factors (k_in, k_out, d_in, d_out).
    Operator choi =
        permute_factors(kron(id_choi, m.choi), TensorShape({k, k, m.d_in, m.d_out}), {0, 2, 1, 3});
    HermitianPreservingMap out;
    out.d_in = k * m.d_in;
    out.d_out = k * m.d_out;
    out.choi = std::move(choi);
    return out;
}

HermitianPreservingMap t_fold_deviation(const UnitaryEnsemble &ens, int t) {
    return map_difference(map_from_ensemble(ens, TwirlMode::t_fold, t), exact_twirl_map(t, ens.d));
}

HermitianPreservingMap u_ubar_deviation(const UnitaryEnsemble &ens) {
    return map_difference(map_from_ensemble(ens, TwirlMode::u_ubar), exact_twirl_11_map(ens.d));
}

Operator random_channel_choi(int d_in, int d_out, int env, Rng &rng) {
    const int rows = d_out * env;
    if (rows < d_in) {
        throw DimensionError("random_channel_choi: dilation is too small for an isometry");
    }
    Operator g(rows, d_in);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < d_in; ++c) {
            g(r, c) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Operator> qr(g);
    const Operator v = qr.householderQ() * Operator::Identity(rows, d_in);
    std::vector<Operator> kraus;
    for (int e = 0; e < env; ++e) {
        kraus.push_back(v.block(e * d_out, 0, d_out, d_in));
    }
    return choi_from_kraus(d_in, d_out, kraus);
}

std::string to_string(NormKind kind) {
    switch (kind) {
        case NormKind::exact:
            return "exact";
        case NormKind::certified:
            return "certified";
        case NormKind::heuristic_lower:
            return "heuristic-lower";
        case NormKind::assembled:
            return "assembled-bound";
    }
    return "unknown";
}

namespace detail {

void parallel_for(int count, const std::function<void(int)> &fn) {
    if (count <= 0) {
        return;
    }
    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

DiamondSolve diamond_sdp(const Operator &choi, int d_in, int d_out, const DiamondOptions &options) {
    check_choi_shape(d_in, d_out, choi);
    const int n = d_in * d_out;
    HermitianSdp sdp;
    const int w0 = sdp.add_block(n);
    const int w1 = sdp.add_block(n);
    const int slack = sdp.add_block(n);
    const int rho = sdp.add_block(d_in);
    const Operator j = herm(choi);
    sdp.set_objective(w0, j);
    sdp.set_objective(w1, -j);
    const Complex half(0.5, 0.0);
    const Complex ihalf(0.0, 0.5);
    for (int r = 0; r < n; ++r) {
        for (int c = r; c < n; ++c) {
            const int a = r / d_out;
            const int k = r % d_out;
            const int b = c / d_out;
            const int l = c % d_out;
            // W0 + W1 + S - rho (x) I = 0, entry by entry.
            int re = sdp.add_constraint(0.0);
            for (int blk : {w0, w1, slack}) {
                if (r == c) {
                    sdp.add_entry(re, blk, r, r, 1.0);
                } else {
                    sdp.add_entry(re, blk, r, c, half);
                    sdp.add_entry(re, blk, c, r, half);
                }
            }
            if (k == l) {
                if (a == b) {
                    sdp.add_entry(re, rho, a, a, -1.0);
                } else {
                    sdp.add_entry(re, rho, a, b, -half);
                    sdp.add_entry(re, rho, b, a, -half);
                }
            }
            if (r == c) {
                continue;
            }
            int im = sdp.add_constraint(0.0);
            for (int blk : {w0, w1, slack}) {
                sdp.add_entry(im, blk, r, c, ihalf);
                sdp.add_entry(im, blk, c, r, -ihalf);
            }
            if (k == l) {
                sdp.add_entry(im, rho, a, b, -ihalf);
                sdp.add_entry(im, rho, b, a, ihalf);
            }
        }
    }
    const int tr = sdp.add_constraint(1.0);
    for (int a = 0; a < d_in; ++a) {
        sdp.add_entry(tr, rho, a, a, 1.0);
    }
    SdpOptions opt;
    opt.gap_tol = 0.1 * options.tol;
    opt.acceptable_gap_tol = 0.5 * options.tol;
    opt.max_iterations = options.max_iterations;
    const auto sol = sdp.solve(opt);
    DiamondSolve out;
    out.primal = sol.primal_value;
    out.dual = sol.dual_value;
    out.w0 = sol.x[w0];
    out.w1 = sol.x[w1];
    out.rho = sol.x[rho];
    return out;
}

Operator best_channel(const Operator &k, int d_in, int d_out, const DiamondOptions &options) {
    check_choi_shape(d_in, d_out, k);
    const int n = d_in * d_out;
    HermitianSdp sdp;
    const int blk = sdp.add_block(n);
    sdp.set_objective(blk, herm(k));
    const Complex half(0.5, 0.0);
    const Complex ihalf(0.0, 0.5);
    // Tr_out J = I.
    for (int a = 0; a < d_in; ++a) {
        for (int b = a; b < d_in; ++b) {
            int re = sdp.add_constraint(a == b ? 1.0 : 0.0);
            for (int o = 0; o < d_out; ++o) {
                if (a == b) {
                    sdp.add_entry(re, blk, a * d_out + o, a * d_out + o, 1.0);
                } else {
                    sdp.add_entry(re, blk, a * d_out + o, b * d_out + o, half);
                    sdp.add_entry(re, blk, b * d_out + o, a * d_out + o, half);
                }
            }
            if (a == b) {
                continue;
            }
            int im = sdp.add_constraint(0.0);
            for (int o = 0; o < d_out; ++o) {
                sdp.add_entry(im, blk, a * d_out + o, b * d_out + o, ihalf);
                sdp.add_entry(im, blk, b * d_out + o, a * d_out + o, -ihalf);
            }
        }
    }
    SdpOptions opt;
    opt.gap_tol = 0.1 * options.tol;
    opt.acceptable_gap_tol = 0.5 * options.tol;
    opt.max_iterations = options.max_iterations;
    return sdp.solve(opt).x[blk];
}

}  // namespace detail

namespace {

Operator sqrt_psd(const Operator &a) {
    const auto e = eig_hermitian(herm(a));
    Eigen::VectorXd s = e.values.cwiseMax(0.0).cwiseSqrt();
    return e.vectors * s.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace

NormReport diamond_distance(const HermitianPreservingMap &m, const DiamondOptions &options) {
    check_choi_shape(m.d_in, m.d_out, m.choi);
    const long n = static_cast<long>(m.d_in) * m.d_out;
    if (n > options.cap) {
        throw CapError("diamond_distance: d_in * d_out = " + std::to_string(n) + " exceeds cap " +
                       std::to_string(options.cap));
    }
    if (hermitian_defect(m.choi) > 1e-10 * std::max(1.0, m.choi.cwiseAbs().maxCoeff())) {
        throw NotHermitianError("diamond_distance: map is not Hermitian preserving");
    }
    NormReport r;
    if (m.choi.cwiseAbs().maxCoeff() == 0.0) {
        r.kind = NormKind::exact;
        r.value = 0.0;
        return r;
    }
    // ||J||_1 / d_in <= ||m||_diamond <= ||J||_1.
    const double tn = trace_norm(herm(m.choi));
    r.kind = NormKind::certified;
    if (tn <= options.tol) {
        r.value = tn;
        r.lower_bound = tn / m.d_in;
        r.upper_bound = tn;
        r.gap = tn - tn / m.d_in;
        return r;
    }
    const auto sol = detail::diamond_sdp(m.choi, m.d_in, m.d_out, options);
    r.lower_bound = std::max(sol.primal, tn / m.d_in);
    r.upper_bound = std::min(sol.dual, tn);
    r.value = 0.5 * (*r.lower_bound + *r.upper_bound);
    r.gap = std::max(0.0, *r.upper_bound - *r.lower_bound);
    const Operator root = sqrt_psd(sol.rho / sol.rho.trace().real());
    StateVector w(static_cast<long>(m.d_in) * m.d_in);
    for (int i = 0; i < m.d_in; ++i) {
        for (int j = 0; j < m.d_in; ++j) {
            w(i * m.d_in + j) = root(i, j);
        }
    }
    r.witness = w / w.norm();
    return r;
}

namespace {

Operator apply_pure(const HermitianPreservingMap &m, const StateVector &psi) {
    Operator out = Operator::Zero(m.d_out, m.d_out);
    for (int i = 0; i < m.d_in; ++i) {
        if (psi(i) == Complex(0.0)) {
            continue;
        }
        Operator row = Operator::Zero(m.d_out, m.d_out);
        for (int j = 0; j < m.d_in; ++j) {
            row += std::conj(psi(j)) * m.choi.block(i * m.d_out, j * m.d_out, m.d_out, m.d_out);
        }
        out += psi(i) * row;
    }
    return herm(out);
}

Eigen::VectorXd herm_eigenvalues(const Operator &y) {
    if (y.rows() == 1) {
        return Eigen::VectorXd::Constant(1, y(0, 0).real());
    }
    if (y.rows() == 2) {
        const double a = y(0, 0).real();
        const double d = y(1, 1).real();
        const double h = std::hypot(0.5 * (a - d), std::abs(y(0, 1)));
        Eigen::VectorXd v(2);
        v << 0.5 * (a + d) - h, 0.5 * (a + d) + h;
        return v;
    }
    Eigen::SelfAdjointEigenSolver<Operator> eig(y, Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

enum class Flavor { trace, spectral };

double flavor_norm(const Operator &y, Flavor flavor) {
    const Eigen::VectorXd ev = herm_eigenvalues(y);
    return flavor == Flavor::trace ? ev.cwiseAbs().sum() : ev.cwiseAbs().maxCoeff();
}

StateVector top_eigenvector(const Operator &a) {
    const auto e = eig_hermitian(herm(a));
    return e.vectors.col(e.vectors.cols() - 1);
}

struct Candidate {
    double value = -1.0;
    StateVector state;
};

// Alternating ascent: fix the input, take the output observable that
// realizes the norm, then move the input to the top eigenvector of its
// pullback. Each step cannot decrease the value.
Candidate ascend(const HermitianPreservingMap &m, StateVector psi, Flavor flavor, const Operator *basis,
                 int max_iterations) {
    Candidate best{flavor_norm(apply_pure(m, psi), flavor), psi};
    for (int it = 0; it < max_iterations; ++it) {
        const Operator y = apply_pure(m, best.state);
        const auto e = eig_hermitian(y);
        Operator obs;
        if (flavor == Flavor::trace) {
            Eigen::VectorXd sign = e.values.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
            obs = e.vectors * sign.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        } else {
            Eigen::Index idx;
            e.values.cwiseAbs().maxCoeff(&idx);
            const double s = e.values(idx) >= 0.0 ? 1.0 : -1.0;
            obs = s * projector(e.vectors.col(idx));
        }
        const Operator pull = m.apply_adjoint(obs);
        StateVector next;
        if (basis != nullptr) {
            next = *basis * top_eigenvector(basis->adjoint() * pull * *basis);
        } else {
            next = top_eigenvector(pull);
        }
        next /= next.norm();
        const double v = flavor_norm(apply_pure(m, next), flavor);
        if (!(v > best.value + 1e-15 * (1.0 + best.value))) {
            break;
        }
        best = {v, next};
    }
    return best;
}

StateVector random_vector(int n, Rng &rng) {
    StateVector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.complex_normal();
    }
    return v / v.norm();
}

NormReport search_norm(const HermitianPreservingMap &m, const SearchOptions &options, Flavor flavor,
                       InputSubspace subspace) {
    check_choi_shape(m.d_in, m.d_out, m.choi);
    if (hermitian_defect(m.choi) > 1e-10 * std::max(1.0, m.choi.cwiseAbs().maxCoeff())) {
        throw NotHermitianError("norm search: map is not Hermitian preserving");
    }
    if (options.restarts < 1) {
        throw ConfigError("norm search: restarts must be at least 1");
    }
    Operator basis;
    if (subspace == InputSubspace::orthogonal_to_psi) {
        const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.d_in))));
        if (d * d != m.d_in || d < 2) {
            throw DimensionError("orthogonal-to-psi subspace requires d_in = d^2");
        }
        const auto e = eig_hermitian(canonical_operators(d).q_proj);
        basis = e.vectors.rightCols(m.d_in - 1);
    }
    NormReport r;
    r.kind = NormKind::heuristic_lower;
    r.restarts = options.restarts;
    if (m.choi.cwiseAbs().maxCoeff() == 0.0) {
        r.kind = NormKind::exact;
        r.value = 0.0;
        return r;
    }
    const Rng root(options.seed);
    std::vector<Candidate> found(options.restarts);
    const Operator *bp = subspace == InputSubspace::orthogonal_to_psi ? &basis : nullptr;
    detail::parallel_for(options.restarts, [&](int i) {
        Rng rng = root.derive(static_cast<std::uint64_t>(i));
        StateVector start = bp ? StateVector(basis * random_vector(m.d_in - 1, rng)) : random_vector(m.d_in, rng);
        start /= start.norm();
        found[i] = ascend(m, start, flavor, bp, options.max_iterations);
    });
    Candidate best = found[0];
    for (const auto &c : found) {
        if (c.value > best.value) {
            best = c;
        }
    }
    r.terms.emplace_back("search_best", best.value);

    if (flavor == Flavor::trace && m.d_in <= 3 && options.cross_check_samples != 0 &&
        subspace == InputSubspace::all) {
        const long samples = options.cross_check_samples < 0 ? 1'000'000 : options.cross_check_samples;
        constexpr int kChunks = 16;
        std::vector<Candidate> chunk_best(kChunks);
        detail::parallel_for(kChunks, [&](int c) {
            Rng rng = root.derive(0x5A3B1E00ull + static_cast<std::uint64_t>(c));
            const long begin = samples * c / kChunks;
            const long end = samples * (c + 1) / kChunks;
            for (long s = begin; s < end; ++s) {
                StateVector v = random_vector(m.d_in, rng);
                const double val = flavor_norm(apply_pure(m, v), flavor);
                if (val > chunk_best[c].value) {
                    chunk_best[c] = {val, v};
                }
            }
        });
        Candidate sampled;
        for (const auto &c : chunk_best) {
            if (c.value > sampled.value) {
                sampled = c;
            }
        }
        r.terms.emplace_back("cross_check_best", sampled.value);
        r.terms.emplace_back("cross_check_samples", static_cast<double>(samples));
        if (sampled.value > best.value) {
            best = sampled;
        }
    }
    r.value = best.value;
    r.witness = best.state;
    return r;
}

}  // namespace

NormReport one_to_one_distance(const HermitianPreservingMap &m, const SearchOptions &options) {
    return search_norm(m, options, Flavor::trace, InputSubspace::all);
}

NormReport one_to_infty_distance(const HermitianPreservingMap &m, const SearchOptions &options,
                                 InputSubspace subspace) {
    return search_norm(m, options, Flavor::spectral, subspace);
}

NormReport k_bounded_diamond_distance(const HermitianPreservingMap &m, int k, const SearchOptions &search,
                                      const DiamondOptions &diamond) {
    if (k < 1) {
        throw ConfigError("k_bounded_diamond_distance: k must be at least 1");
    }
    if (k >= m.d_in) {
        return diamond_distance(m, diamond);
    }
    NormReport r = k == 1 ? one_to_one_distance(m, search) : one_to_one_distance(tensor_identity(k, m), search);
    if (k > 1) {
        SearchOptions lower = search;
        lower.cross_check_samples = 0;
        const NormReport prev = k_bounded_diamond_distance(m, k - 1, lower, diamond);
        r.terms.emplace_back("previous_k", prev.value);
        if (prev.value > r.value) {
            r.value = prev.value;
            if (prev.witness) {
                // Embed the smaller-ancilla witness into the larger ancilla.
                StateVector w = StateVector::Zero(static_cast<long>(k) * m.d_in);
                w.head(prev.witness->size()) = *prev.witness;
                r.witness = w;
            }
        }
    }
    if (static_cast<long>(m.d_in) * m.d_out <= diamond.cap) {
        const NormReport full = diamond_distance(m, diamond);
        r.upper_bound = full.upper_bound ? *full.upper_bound : full.value;
    }
    return r;
}

Operator theta_deviation(const UnitaryEnsemble &ens, const Operator &choi, int k) {
    const int d = ens.d;
    const int kd = k * d;
    if (choi.rows() != kd * kd || choi.cols() != kd * kd) {
        throw DimensionError("theta_deviation: Choi matrix dimension is not (k d)^2");
    }
    const int d2 = d * d;
    const Operator grouped = permute_factors(choi, TensorShape({k, d, k, d}), {0, 2, 1, 3});
    Operator twirled(grouped.rows(), grouped.cols());
    for (int bi = 0; bi < k * k; ++bi) {
        for (int bj = 0; bj < k * k; ++bj) {
            twirled.block(bi * d2, bj * d2, d2, d2) = exact_twirl_11(grouped.block(bi * d2, bj * d2, d2, d2), d);
        }
    }
    Operator out = permute_factors(twirled, TensorShape({k, k, d, d}), {0, 2, 1, 3});
    const Operator idk = Operator::Identity(k, k);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const Operator &u = ens.elements[i];
        const Operator v = kron(kron(idk, Operator(u.conjugate())), kron(idk, u));
        out -= ens.weights[i] * (v * choi * v.adjoint());
    }
    return out;
}

Operator theta_deviation_adjoint(const UnitaryEnsemble &ens, const Operator &g, int k) {
    const int d = ens.d;
    const int kd = k * d;
    if (g.rows() != kd * kd || g.cols() != kd * kd) {
        throw DimensionError("theta_deviation_adjoint: operator dimension is not (k d)^2");
    }
    const int d2 = d * d;
    const Operator grouped = permute_factors(g, TensorShape({k, d, k, d}), {0, 2, 1, 3});
    Operator twirled(grouped.rows(), grouped.cols());
    for (int bi = 0; bi < k * k; ++bi) {
        for (int bj = 0; bj < k * k; ++bj) {
            twirled.block(bi * d2, bj * d2, d2, d2) = exact_twirl_11(grouped.block(bi * d2, bj * d2, d2, d2), d);
        }
    }
    Operator out = permute_factors(twirled, TensorShape({k, k, d, d}), {0, 2, 1, 3});
    const Operator idk = Operator::Identity(k, k);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const Operator &u = ens.elements[i];
        const Operator v = kron(kron(idk, Operator(u.conjugate())), kron(idk, u));
        out -= ens.weights[i] * (v.adjoint() * g * v);
    }
    return out;
}

namespace {

NormReport theta_search(const UnitaryEnsemble &ens, int k, const ThetaOptions &options) {
    ens.validate();
    if (ens.d > options.max_dimension) {
        throw CapError("theta search: d = " + std::to_string(ens.d) + " exceeds cap " +
                       std::to_string(options.max_dimension));
    }
    if (k < 1) {
        throw ConfigError("theta search: k must be at least 1");
    }
    if (options.channel_restarts < 1) {
        throw ConfigError("theta search: channel_restarts must be at least 1");
    }
    const int kd = k * ens.d;
    const Rng root(options.search.seed);
    std::vector<double> best(options.channel_restarts, 0.0);
    std::vector<int> rounds(options.channel_restarts, 0);
    detail::parallel_for(options.channel_restarts, [&](int i) {
        Rng rng = root.derive(0x7E7A0000ull + static_cast<std::uint64_t>(i));
        Operator j = random_channel_choi(kd, kd, kd * kd, rng);
        for (int round = 0; round <= options.ascent_rounds; ++round) {
            const Operator dev = herm(theta_deviation(ens, j, k));
            const double tn = trace_norm(dev);
            if (tn <= options.diamond.tol) {
                best[i] = std::max(best[i], tn / kd);
                break;
            }
            const auto sol = detail::diamond_sdp(dev, kd, kd, options.diamond);
            rounds[i] = round + 1;
            if (sol.primal <= best[i] + 1e-9 && round > 0) {
                best[i] = std::max(best[i], sol.primal);
                break;
            }
            best[i] = std::max(best[i], sol.primal);
            if (round == options.ascent_rounds) {
                break;
            }
            const Operator g = herm(sol.w0 - sol.w1);
            const Operator pull = herm(theta_deviation_adjoint(ens, g, k));
            j = detail::best_channel(pull, kd, kd, options.diamond);
        }
    });
    NormReport r;
    r.kind = NormKind::heuristic_lower;
    r.restarts = options.channel_restarts;
    r.value = *std::max_element(best.begin(), best.end());
    r.terms.emplace_back("k", k);
    r.terms.emplace_back("max_rounds", *std::max_element(rounds.begin(), rounds.end()));
    return r;
}

}  // namespace

NormReport theta_lower_bound(const UnitaryEnsemble &ens, const ThetaOptions &options) {
    return theta_search(ens, 1, options);
}

NormReport k_bounded_theta_estimate(const UnitaryEnsemble &ens, int k, const ThetaOptions &options) {
    return theta_search(ens, k, options);
}

NormReport traceless_one_design_deviation(const UnitaryEnsemble &ens, const SearchOptions &options) {
    ens.validate();
    const int d = ens.d;
    if (d < 2) {
        throw DimensionError("traceless deviation needs d >= 2");
    }
    const double radius = std::sqrt(static_cast<double>(d));
    auto forward = [&](const Operator &y) {
        Operator out = Operator::Zero(d, d);
        for (std::size_t i = 0; i < ens.size(); ++i) {
            out += ens.weights[i] * (ens.elements[i] * y * ens.elements[i].adjoint());
        }
        return out;
    };
    auto backward = [&](const Operator &a) {
        Operator out = Operator::Zero(d, d);
        for (std::size_t i = 0; i < ens.size(); ++i) {
            out += ens.weights[i] * (ens.elements[i].adjoint() * a * ens.elements[i]);
        }
        return out;
    };
    auto normalize = [&](Operator y) -> std::optional<Operator> {
        const double scale = y.norm();
        y -= (y.trace() / static_cast<double>(d)) * Operator::Identity(d, d);
        const double n = y.norm();
        // A pullback that is numerically a multiple of I has no traceless part.
        if (!(n > 1e-12 * scale)) {
            return std::nullopt;
        }
        return Operator(y * (radius / n));
    };
    const Rng root(options.seed);
    std::vector<Candidate> found(options.restarts);
    detail::parallel_for(options.restarts, [&](int i) {
        Rng rng = root.derive(0x51E00000ull + static_cast<std::uint64_t>(i));
        Operator g(d, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                g(a, b) = rng.complex_normal();
            }
        }
        Operator y = *normalize(g);
        double value = operator_norm(forward(y));
        for (int it = 0; it < options.max_iterations; ++it) {
            Eigen::JacobiSVD<Operator> svd(forward(y), Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Operator pull = backward(svd.matrixU().col(0) * svd.matrixV().col(0).adjoint());
            const auto next = normalize(pull);
            if (!next) {
                break;
            }
            const double v = operator_norm(forward(*next));
            if (!(v > value + 1e-15 * (1.0 + value))) {
                break;
            }
            y = *next;
            value = v;
        }
        StateVector w(d * d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                w(a * d + b) = y(a, b) / radius;
            }
        }
        found[i] = {value, w};
    });
    Candidate best = found[0];
    for (const auto &c : found) {
        if (c.value > best.value) {
            best = c;
        }
    }
    NormReport r;
    r.kind = NormKind::heuristic_lower;
    r.restarts = options.restarts;
    r.value = best.value;
    r.witness = best.state;
    return r;
}

NormReport theta_upper_bound(const UnitaryEnsemble &ens, const ThetaOptions &options) {
    ens.validate();
    const int d = ens.d;
    if (d > options.max_dimension) {
        throw CapError("theta_upper_bound: d = " + std::to_string(d) + " exceeds cap " +
                       std::to_string(options.max_dimension));
    }
    const auto delta = u_ubar_deviation(ens);
    SearchOptions search = options.search;
    search.cross_check_samples = 0;
    const NormReport s_perp = one_to_infty_distance(delta, search, InputSubspace::orthogonal_to_psi);
    const NormReport s_one = traceless_one_design_deviation(ens, search);
    const double psi_term = trace_norm(delta.apply(canonical_operators(d).psi_proj));
    const double dd = static_cast<double>(d);
    NormReport r;
    r.kind = NormKind::assembled;
    r.restarts = search.restarts;
    r.value = dd * psi_term + dd * dd * s_perp.value + 2.0 * std::sqrt(dd) * s_one.value;
    r.terms = {{"psi_term", psi_term},
               {"s_perp", s_perp.value},
               {"s_one", s_one.value},
               {"d_psi_term", dd * psi_term},
               {"d2_s_perp", dd * dd * s_perp.value},
               {"two_sqrt_d_s_one", 2.0 * std::sqrt(dd) * s_one.value}};
    return r;
}

ThetaBounds theta_distance_bounds(const UnitaryEnsemble &ens, const ThetaOptions &options) {
    return {theta_lower_bound(ens, options), theta_upper_bound(ens, options)};
}

}  // namespace tdesign
