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

#include "tdesign/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_set>

#include "tdesign/errors.hpp"
#include "tdesign/schur_weyl.hpp"

namespace tdesign {

bool UnitaryEnsemble::has_uniform_weights(double tol) const {
    if (weights.empty()) {
        return false;
    }
    const double w0 = 1.0 / static_cast<double>(weights.size());
    return std::all_of(weights.begin(), weights.end(), [&](double w) { return std::abs(w - w0) <= tol; });
}

void UnitaryEnsemble::validate() const {
    if (d < 1) {
        throw ConfigError("ensemble dimension must be positive");
    }
    if (elements.empty()) {
        throw ConfigError("ensemble is empty");
    }
    if (weights.size() != elements.size()) {
        throw ConfigError("ensemble has " + std::to_string(elements.size()) + " elements but " +
                          std::to_string(weights.size()) + " weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto &u = elements[i];
        if (u.rows() != d || u.cols() != d) {
            throw ConfigError("ensemble element " + std::to_string(i) + " has the wrong dimension");
        }
        if (!u.allFinite()) {
            throw ConfigError("ensemble element " + std::to_string(i) + " has non-finite entries");
        }
        if (unitarity_defect(u) > 1e-10) {
            throw ConfigError("ensemble element " + std::to_string(i) + " is not unitary within 1e-10");
        }
        if (!(weights[i] >= 0.0)) {
            throw ConfigError("ensemble weight " + std::to_string(i) + " is negative");
        }
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("ensemble weights do not sum to 1 within 1e-12");
    }
}

UnitaryEnsemble make_ensemble(int d, std::vector<Operator> elements, std::vector<double> weights,
                              std::string provenance) {
    UnitaryEnsemble ens;
    ens.d = d;
    ens.elements = std::move(elements);
    if (weights.empty()) {
        weights.assign(ens.elements.size(), ens.elements.empty() ? 0.0 : 1.0 / ens.elements.size());
    }
    ens.weights = std::move(weights);
    ens.provenance = std::move(provenance);
    ens.validate();
    return ens;
}

UnitaryEnsemble pauli_ensemble(int d) {
    if (d < 2) {
        throw DimensionError("pauli_ensemble: d must be at least 2");
    }
    Operator shift = Operator::Zero(d, d);
    Operator clock = Operator::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        shift((j + 1) % d, j) = 1.0;
        clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
    }
    std::vector<Operator> elements;
    Operator xa = Operator::Identity(d, d);
    for (int a = 0; a < d; ++a) {
        Operator word = xa;
        for (int b = 0; b < d; ++b) {
            elements.push_back(word);
            word = word * clock;
        }
        xa = shift * xa;
    }
    return make_ensemble(d, std::move(elements), {}, "pauli(" + std::to_string(d) + ")");
}

namespace {

// Phase-fixed copy: first entry with |z| > 1e-9 (row-major) made positive real.
Operator canonical_phase(const Operator &u) {
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            const double mag = std::abs(u(r, c));
            if (mag > 1e-9) {
                return u * (std::conj(u(r, c)) / mag);
            }
        }
    }
    return u;
}

std::string phase_key(const Operator &u) {
    std::string key;
    key.reserve(u.size() * 16);
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            const long re = std::lround(u(r, c).real() * 1e7);
            const long im = std::lround(u(r, c).imag() * 1e7);
            key += std::to_string(re == 0 ? 0 : re) + ',' + std::to_string(im == 0 ? 0 : im) + ';';
        }
    }
    return key;
}

}  // namespace

UnitaryEnsemble clifford_ensemble(int m, std::size_t max_elements) {
    if (m != 1 && m != 2) {
        throw ConfigError("clifford_ensemble: qubit count must be 1 or 2");
    }
    const double s = 1.0 / std::numbers::sqrt2;
    Operator h(2, 2);
    h << s, s, s, -s;
    Operator phase(2, 2);
    phase << 1, 0, 0, Complex(0, 1);
    const Operator id2 = Operator::Identity(2, 2);
    std::vector<Operator> generators;
    if (m == 1) {
        generators = {h, phase};
    } else {
        Operator cz = Operator::Identity(4, 4);
        cz(3, 3) = -1.0;
        generators = {kron(h, id2), kron(id2, h), kron(phase, id2), kron(id2, phase), cz};
    }
    const int d = 1 << m;
    std::vector<Operator> elements;
    std::unordered_set<std::string> seen;
    std::deque<Operator> frontier;
    const Operator start = Operator::Identity(d, d);
    seen.insert(phase_key(start));
    elements.push_back(start);
    frontier.push_back(start);
    while (!frontier.empty()) {
        const Operator u = frontier.front();
        frontier.pop_front();
        for (const auto &g : generators) {
            Operator next = canonical_phase(g * u);
            if (seen.insert(phase_key(next)).second) {
                if (elements.size() >= max_elements) {
                    throw CapError("clifford_ensemble: closure exceeds " + std::to_string(max_elements) +
                                   " elements");
                }
                elements.push_back(next);
                frontier.push_back(std::move(next));
            }
        }
    }
    return make_ensemble(d, std::move(elements), {}, "clifford(" + std::to_string(m) + ")");
}

UnitaryEnsemble haar_ensemble(int d, int n, std::uint64_t seed) {
    if (n < 1) {
        throw ConfigError("haar_ensemble: n must be at least 1");
    }
    Rng rng(seed);
    std::vector<Operator> elements;
    elements.reserve(n);
    for (int i = 0; i < n; ++i) {
        elements.push_back(ginibre_unitary(d, rng));
    }
    return make_ensemble(d, std::move(elements), {},
                         "haar-iid(" + std::to_string(d) + "," + std::to_string(n) + "," + std::to_string(seed) +
                             ")");
}

UnitaryEnsemble subsample(const UnitaryEnsemble &parent, int n, std::uint64_t seed) {
    if (n < 1) {
        throw ConfigError("subsample: n must be at least 1");
    }
    parent.validate();
    Rng rng(seed);
    const bool uniform = parent.has_uniform_weights();
    std::vector<double> cumulative(parent.weights.size());
    std::partial_sum(parent.weights.begin(), parent.weights.end(), cumulative.begin());
    std::vector<Operator> elements;
    elements.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::size_t idx;
        if (uniform) {
            idx = static_cast<std::size_t>(rng.below(parent.size()));
        } else {
            const double u = rng.uniform() * cumulative.back();
            idx = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                           cumulative.begin());
            idx = std::min(idx, parent.size() - 1);
        }
        elements.push_back(parent.elements[idx]);
    }
    return make_ensemble(parent.d, std::move(elements), {},
                         "subsample(" + parent.provenance + "," + std::to_string(n) + "," + std::to_string(seed) +
                             ")");
}

UnitaryEnsemble adjoint_ensemble(const UnitaryEnsemble &ens) {
    UnitaryEnsemble out = ens;
    for (auto &u : out.elements) {
        u = u.adjoint().eval();
    }
    out.provenance = "adjoint(" + ens.provenance + ")";
    return out;
}

std::string to_string(DesignVerdict v) {
    switch (v) {
        case DesignVerdict::exact:
            return "exact";
        case DesignVerdict::approximate:
            return "approximate";
        case DesignVerdict::not_a_design:
            return "not-a-design";
    }
    return "unknown";
}

namespace {

long moment_dim(int d, int t, long cap) {
    if (t < 1) {
        throw DimensionError("design order t must be at least 1");
    }
    const double dim2 = std::pow(static_cast<double>(d), 2 * t);
    if (dim2 > static_cast<double>(cap)) {
        throw CapError("d^{2t} = " + std::to_string(static_cast<long>(dim2)) + " exceeds cap " +
                       std::to_string(cap));
    }
    return static_cast<long>(std::lround(std::pow(static_cast<double>(d), t)));
}

}  // namespace

Operator moment_superoperator(const UnitaryEnsemble &ens, int t, long cap) {
    ens.validate();
    const long dim = moment_dim(ens.d, t, cap);
    Operator super = Operator::Zero(dim * dim, dim * dim);
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const Operator v = kron_power(ens.elements[k], t);
        const Operator vbar = v.conjugate();
        const double w = ens.weights[k];
        for (long i = 0; i < dim; ++i) {
            for (long kk = 0; kk < dim; ++kk) {
                const Complex a = w * v(i, kk);
                if (a == Complex(0.0)) {
                    continue;
                }
                super.block(i * dim, kk * dim, dim, dim) += a * vbar;
            }
        }
    }
    return super;
}

DesignCertificate design_order_defect(const UnitaryEnsemble &ens, int t, long cap) {
    const long dim = moment_dim(ens.d, t, cap);
    const Operator moment = moment_superoperator(ens, t, cap);
    const Operator twirl = twirl_superoperator(t, ens.d);
    DesignCertificate cert;
    cert.t = t;
    cert.defect = (moment - twirl).norm();
    cert.tolerance = 1e-10 * static_cast<double>(dim);
    const double rank = twirl.trace().real();
    const double single = std::sqrt(std::max(0.0, static_cast<double>(dim * dim) - rank));
    if (cert.defect <= cert.tolerance) {
        cert.verdict = DesignVerdict::exact;
    } else if (cert.defect <= 0.5 * single) {
        cert.verdict = DesignVerdict::approximate;
    } else {
        cert.verdict = DesignVerdict::not_a_design;
    }
    return cert;
}

Operator sampled_twirl_apply(const UnitaryEnsemble &ens, const Operator &x, TwirlMode mode, int t) {
    const int d = ens.d;
    long dim = 0;
    switch (mode) {
        case TwirlMode::t_fold:
            if (t < 1) {
                throw DimensionError("sampled_twirl_apply: t must be at least 1");
            }
            dim = static_cast<long>(std::lround(std::pow(static_cast<double>(d), t)));
            break;
        case TwirlMode::u_ubar:
        case TwirlMode::channel_twirl:
            dim = static_cast<long>(d) * d;
            break;
    }
    if (x.rows() != dim || x.cols() != dim) {
        throw DimensionError("sampled_twirl_apply: operator dimension " + std::to_string(x.rows()) +
                             " does not match mode dimension " + std::to_string(dim));
    }
    Operator out = Operator::Zero(dim, dim);
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const Operator &u = ens.elements[k];
        Operator v;
        switch (mode) {
            case TwirlMode::t_fold:
                v = kron_power(u, t);
                break;
            case TwirlMode::u_ubar:
                v = kron(u, Operator(u.conjugate()));
                break;
            case TwirlMode::channel_twirl:
                v = kron(Operator(u.conjugate()), u);
                break;
        }
        out.noalias() += ens.weights[k] * (v * x * v.adjoint());
    }
    return out;
}

}  // namespace tdesign
