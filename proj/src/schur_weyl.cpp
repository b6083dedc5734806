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

#include "tdesign/schur_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tdesign/errors.hpp"

namespace tdesign {

using boost::multiprecision::cpp_int;

std::string Partition::str() const {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out << (i ? "," : "") << parts[i];
    }
    out << ')';
    return out.str();
}

namespace {

void partitions_rec(int remaining, int max_part, int slots, std::vector<int> &prefix, int d, int t,
                    std::vector<Partition> &out) {
    if (remaining == 0) {
        Partition p;
        p.parts = prefix;
        p.parts.resize(d, 0);
        p.t = t;
        p.d = d;
        out.push_back(std::move(p));
        return;
    }
    if (slots == 0) {
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        prefix.push_back(part);
        partitions_rec(remaining - part, part, slots - 1, prefix, d, t, out);
        prefix.pop_back();
    }
}

void check_partition(const Partition &lambda, int d) {
    if (static_cast<int>(lambda.parts.size()) > d) {
        // Trailing zeros beyond d are tolerated.
        for (std::size_t i = d; i < lambda.parts.size(); ++i) {
            if (lambda.parts[i] != 0) {
                throw ConfigError("partition " + lambda.str() + " has more than d nonzero parts");
            }
        }
    }
    for (std::size_t i = 0; i < lambda.parts.size(); ++i) {
        if (lambda.parts[i] < 0 || (i > 0 && lambda.parts[i] > lambda.parts[i - 1])) {
            throw ConfigError("partition " + lambda.str() + " is not weakly decreasing and nonnegative");
        }
    }
}

std::uint64_t to_u64(const cpp_int &v) {
    if (v > cpp_int(std::numeric_limits<std::uint64_t>::max())) {
        throw std::overflow_error("dimension does not fit in 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

long int_pow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

// P_sigma |i> = |pi(i)>.
std::vector<long> permutation_index_map(const Permutation &sigma, int d) {
    const int t = sigma.size();
    const long dim = int_pow(d, t);
    const Permutation inv = sigma.inverse();
    std::vector<long> strides(t, 1);
    for (int k = t - 2; k >= 0; --k) {
        strides[k] = strides[k + 1] * d;
    }
    std::vector<long> map(dim);
    std::vector<int> digits(t);
    for (long i = 0; i < dim; ++i) {
        long rest = i;
        for (int k = t - 1; k >= 0; --k) {
            digits[k] = static_cast<int>(rest % d);
            rest /= d;
        }
        long j = 0;
        for (int k = 0; k < t; ++k) {
            j += digits[inv(k)] * strides[k];
        }
        map[i] = j;
    }
    return map;
}

// Independent permutation operators spanning the commutant, with the inverse
// of their Gram matrix.
struct CommutantBasis {
    int t = 0;
    int d = 0;
    long dim = 0;
    std::vector<std::vector<long>> index_maps;
    Eigen::MatrixXd gram_inverse;
};

// Exact selection and inversion for small t.
void rational_basis(const std::vector<Permutation> &perms, int d, std::vector<int> &selected,
                    Eigen::MatrixXd &inverse) {
    const int n = static_cast<int>(perms.size());
    std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int cycles = perms[a].inverse().compose(perms[b]).cycle_count();
            g[a][b] = Rational(cpp_int(int_pow(d, cycles)));
        }
    }
    // Pivot columns of the row-reduced Gram matrix index a maximal independent set.
    auto work = g;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int pivot = -1;
        for (int r = row; r < n; ++r) {
            if (work[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            continue;
        }
        std::swap(work[row], work[pivot]);
        const Rational lead = work[row][col];
        for (int c = col; c < n; ++c) {
            work[row][c] /= lead;
        }
        for (int r = 0; r < n; ++r) {
            if (r != row && work[r][col] != 0) {
                const Rational f = work[r][col];
                for (int c = col; c < n; ++c) {
                    work[r][c] -= f * work[row][c];
                }
            }
        }
        selected.push_back(col);
        ++row;
    }
    // Gauss-Jordan on the selected sub-Gram matrix.
    const int m = static_cast<int>(selected.size());
    std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(2 * m));
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            aug[a][b] = g[selected[a]][selected[b]];
        }
        aug[a][m + a] = 1;
    }
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        while (aug[pivot][col] == 0) {
            ++pivot;
        }
        std::swap(aug[col], aug[pivot]);
        const Rational lead = aug[col][col];
        for (int c = 0; c < 2 * m; ++c) {
            aug[col][c] /= lead;
        }
        for (int r = 0; r < m; ++r) {
            if (r != col && aug[r][col] != 0) {
                const Rational f = aug[r][col];
                for (int c = 0; c < 2 * m; ++c) {
                    aug[r][c] -= f * aug[col][c];
                }
            }
        }
    }
    inverse.resize(m, m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            inverse(a, b) = static_cast<double>(aug[a][m + b]);
        }
    }
}

// Floating-point selection (pivoted Cholesky) for larger t.
void float_basis(const std::vector<Permutation> &perms, int d, std::vector<int> &selected,
                 Eigen::MatrixXd &inverse) {
    const int n = static_cast<int>(perms.size());
    Eigen::MatrixXd g(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int cycles = perms[a].inverse().compose(perms[b]).cycle_count();
            g(a, b) = std::pow(static_cast<double>(d), cycles);
        }
    }
    // Greedy: keep sigma when its residual against the kept span is nonzero.
    for (int a = 0; a < n; ++a) {
        std::vector<int> trial = selected;
        trial.push_back(a);
        const int m = static_cast<int>(trial.size());
        Eigen::MatrixXd sub(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                sub(i, j) = g(trial[i], trial[j]);
            }
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
        const double last = ldlt.vectorD().minCoeff();
        if (ldlt.info() == Eigen::Success && last > 1e-9 * g(a, a)) {
            selected = std::move(trial);
        }
    }
    const int m = static_cast<int>(selected.size());
    Eigen::MatrixXd sub(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            sub(i, j) = g(selected[i], selected[j]);
        }
    }
    inverse = sub.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
}

void check_twirl_args(int t, int d) {
    if (t < 1 || d < 1) {
        throw DimensionError("twirl order and dimension must be positive");
    }
    if (t > kMaxTwirlOrder) {
        throw CapError("twirl order t=" + std::to_string(t) + " exceeds cap " + std::to_string(kMaxTwirlOrder));
    }
    if (std::pow(static_cast<double>(d), t) > static_cast<double>(kMaxTwirlDim)) {
        throw CapError("d^t exceeds cap " + std::to_string(kMaxTwirlDim));
    }
}

std::shared_ptr<const CommutantBasis> commutant_basis(int t, int d) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const CommutantBasis>> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find({t, d});
        if (it != cache.end()) {
            return it->second;
        }
    }
    auto basis = std::make_shared<CommutantBasis>();
    basis->t = t;
    basis->d = d;
    basis->dim = int_pow(d, t);
    const auto perms = all_permutations(t);
    std::vector<int> selected;
    if (t <= 4) {
        rational_basis(perms, d, selected, basis->gram_inverse);
    } else {
        float_basis(perms, d, selected, basis->gram_inverse);
    }
    for (int s : selected) {
        basis->index_maps.push_back(permutation_index_map(perms[s], d));
    }
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(std::make_pair(t, d), std::move(basis));
    return it->second;
}

}  // namespace

std::vector<Partition> partitions(int t, int d) {
    if (t < 1 || d < 1) {
        throw DimensionError("partitions: t and d must be positive");
    }
    std::vector<Partition> out;
    std::vector<int> prefix;
    partitions_rec(t, t, d, prefix, d, t, out);
    return out;
}

std::uint64_t weyl_dimension(const Partition &lambda, int d) {
    check_partition(lambda, d);
    std::vector<long> parts(d, 0);
    for (int i = 0; i < d && i < static_cast<int>(lambda.parts.size()); ++i) {
        parts[i] = lambda.parts[i];
    }
    cpp_int num = 1;
    cpp_int den = 1;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            num *= parts[i] - parts[j] + j - i;
            den *= j - i;
        }
    }
    return to_u64(num / den);
}

std::uint64_t detail::specht_dimension(const Partition &lambda) {
    check_partition(lambda, static_cast<int>(lambda.parts.size()));
    std::vector<int> rows;
    for (int p : lambda.parts) {
        if (p > 0) {
            rows.push_back(p);
        }
    }
    const int t = std::accumulate(rows.begin(), rows.end(), 0);
    cpp_int hooks = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < rows[i]; ++j) {
            int below = 0;
            for (std::size_t k = i + 1; k < rows.size() && rows[k] > j; ++k) {
                ++below;
            }
            hooks *= (rows[i] - j - 1) + below + 1;
        }
    }
    cpp_int fact = 1;
    for (int k = 2; k <= t; ++k) {
        fact *= k;
    }
    return to_u64(fact / hooks);
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
        if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v]) {
            throw ConfigError("permutation images do not form a bijection");
        }
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int t) {
    std::vector<int> im(t);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::transposition(int t, int a, int b) {
    std::vector<int> im(t);
    std::iota(im.begin(), im.end(), 0);
    std::swap(im.at(a), im.at(b));
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) {
        inv[images_[i]] = static_cast<int>(i);
    }
    return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation &other) const {
    if (other.size() != size()) {
        throw DimensionError("compose: permutations act on different sets");
    }
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) {
        im[i] = images_[other.images_[i]];
    }
    return Permutation(std::move(im));
}

int Permutation::cycle_count() const {
    std::vector<char> seen(images_.size(), 0);
    int cycles = 0;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i]) {
            continue;
        }
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = images_[j]) {
            seen[j] = 1;
        }
    }
    return cycles;
}

std::vector<Permutation> all_permutations(int t) {
    std::vector<int> im(t);
    std::iota(im.begin(), im.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

Operator permutation_operator(const Permutation &sigma, int d) {
    const auto map = permutation_index_map(sigma, d);
    const auto dim = static_cast<Eigen::Index>(map.size());
    Operator p = Operator::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        p(map[i], i) = 1.0;
    }
    return p;
}

Operator exact_twirl(const Operator &x, int t, int d) {
    check_twirl_args(t, d);
    const auto basis = commutant_basis(t, d);
    if (x.rows() != basis->dim || x.cols() != basis->dim) {
        throw DimensionError("exact_twirl: operator dimension is not d^t");
    }
    const auto m = static_cast<Eigen::Index>(basis->index_maps.size());
    Eigen::VectorXcd v(m);
    for (Eigen::Index s = 0; s < m; ++s) {
        const auto &map = basis->index_maps[s];
        Complex acc = 0.0;
        for (long i = 0; i < basis->dim; ++i) {
            acc += x(map[i], i);
        }
        v(s) = acc;
    }
    const Eigen::VectorXcd c = basis->gram_inverse.cast<Complex>() * v;
    Operator out = Operator::Zero(basis->dim, basis->dim);
    for (Eigen::Index s = 0; s < m; ++s) {
        const auto &map = basis->index_maps[s];
        for (long i = 0; i < basis->dim; ++i) {
            out(map[i], i) += c(s);
        }
    }
    return out;
}

Operator twirl_superoperator(int t, int d) {
    check_twirl_args(t, d);
    const auto basis = commutant_basis(t, d);
    const long dim = basis->dim;
    const auto m = static_cast<Eigen::Index>(basis->index_maps.size());
    // Columns are vec(P_sigma) for the selected sigma.
    Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(dim * dim, m);
    for (Eigen::Index s = 0; s < m; ++s) {
        const auto &map = basis->index_maps[s];
        for (long i = 0; i < dim; ++i) {
            vecs(map[i] * dim + i, s) = 1.0;
        }
    }
    const Eigen::MatrixXd super = vecs * basis->gram_inverse * vecs.transpose();
    return super.cast<Complex>();
}

Rational twirl_one_to_infty_norm(int t, int d) {
    std::uint64_t smallest = std::numeric_limits<std::uint64_t>::max();
    for (const auto &lambda : partitions(t, d)) {
        smallest = std::min(smallest, weyl_dimension(lambda, d));
    }
    return Rational(cpp_int(1), cpp_int(smallest));
}

Rational twirl_one_to_infty_bound(int t, int d) {
    if (t < 1 || d < 1) {
        throw DimensionError("twirl_one_to_infty_bound: t and d must be positive");
    }
    cpp_int num = 1;
    cpp_int den = 1;
    for (int k = 0; k < t; ++k) {
        num *= 2 * t;
        den *= d;
    }
    return Rational(num, den);
}

CanonicalOperators canonical_operators(int d) {
    if (d < 2) {
        throw DimensionError("canonical_operators: d must be at least 2");
    }
    CanonicalOperators c;
    c.d = d;
    const long dim = static_cast<long>(d) * d;
    c.max_entangled = StateVector::Zero(dim);
    for (int i = 0; i < d; ++i) {
        c.max_entangled(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    }
    c.psi_proj = projector(c.max_entangled);
    c.q_proj = Operator::Identity(dim, dim) - c.psi_proj;
    c.flip = permutation_operator(Permutation::transposition(2, 0, 1), d);
    c.sym_proj = 0.5 * (Operator::Identity(dim, dim) + c.flip);
    c.antisym_proj = 0.5 * (Operator::Identity(dim, dim) - c.flip);
    return c;
}

Operator exact_twirl_11(const Operator &x, int d) {
    if (d < 2) {
        throw DimensionError("exact_twirl_11: d must be at least 2");
    }
    const long dim = static_cast<long>(d) * d;
    if (x.rows() != dim || x.cols() != dim) {
        throw DimensionError("exact_twirl_11: operator dimension is not d^2");
    }
    // <psi|X|psi> = (1/d) sum_ij X[ii, jj]
    Complex overlap = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            overlap += x(i * d + i, j * d + j);
        }
    }
    overlap /= static_cast<double>(d);
    const Complex q_weight = (x.trace() - overlap) / static_cast<double>(dim - 1);
    // out = overlap psi psi^* + q_weight (I - psi psi^*)
    Operator out = q_weight * Operator::Identity(dim, dim);
    const Complex psi_coeff = (overlap - q_weight) / static_cast<double>(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            out(i * d + i, j * d + j) += psi_coeff;
        }
    }
    return out;
}

namespace {

void require_channel_choi(const Operator &choi, int d, const char *who) {
    const long dim = static_cast<long>(d) * d;
    if (choi.rows() != dim || choi.cols() != dim) {
        throw DimensionError(std::string(who) + ": Choi matrix dimension is not d^2");
    }
    const double scale = std::max(1.0, choi.cwiseAbs().maxCoeff());
    if (hermitian_defect(choi) > 1e-10 * scale) {
        throw NotAChannelError(std::string(who) + ": Choi matrix is not Hermitian");
    }
    const auto eig = eig_hermitian(choi);
    if (eig.values(0) < -1e-10 * scale) {
        throw NotAChannelError(std::string(who) + ": Choi matrix is not positive semidefinite");
    }
    const Operator marginal = partial_trace(choi, TensorShape{d, d}, {0});
    if ((marginal - Operator::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
        throw NotAChannelError(std::string(who) + ": map is not trace preserving");
    }
}

}  // namespace

Operator channel_twirl_exact(const Operator &choi, int d) {
    require_channel_choi(choi, d, "channel_twirl_exact");
    return exact_twirl_11(choi, d);
}

double channel_twirl_coefficient(const Operator &choi, int d) {
    const long dim = static_cast<long>(d) * d;
    if (choi.rows() != dim || choi.cols() != dim) {
        throw DimensionError("channel_twirl_coefficient: Choi matrix dimension is not d^2");
    }
    Complex overlap = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            overlap += choi(i * d + i, j * d + j);
        }
    }
    const double fidelity = overlap.real() / (static_cast<double>(d) * d);
    const double inv = 1.0 / static_cast<double>(dim);
    return (fidelity - inv) / (1.0 - inv);
}

}  // namespace tdesign
