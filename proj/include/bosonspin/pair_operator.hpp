// Copyright 2026 The bosonspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * @file pair_operator.hpp
 * @brief Matrix-free Q H_BS P_1bpair and its largest singular value.
 *
 * Acting on a one-b-pair config, Q H_BS can only empty the doubled output
 * mode b_j into an empty input mode a_i (amplitude sqrt(2) conj(R_ji));
 * every other hop leaves a pair or creates a triple. The number k of
 * occupied input modes therefore goes k -> k + 1 and the operator is a
 * direct sum of blocks A_k, k = 0..N-2, with ||A|| = max_k ||A_k||.
 *
 * A block is indexed by (input subset, output part). Input subsets are
 * numbered in colex order (increasing bitmask).
 */

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "bosonspin/common.hpp"
#include "bosonspin/fockspace.hpp"
#include "bosonspin/haar.hpp"
#include "bosonspin/rng.hpp"

namespace bosonspin {

namespace detail {

/// All k-subsets of {0..m-1} as bitmasks, increasing (Gosper's hack).
inline std::vector<std::uint64_t> subsets(std::size_t m, std::size_t k) {
    std::vector<std::uint64_t> out;
    if (k > m) return out;
    if (k == 0) return {0};
    out.reserve(binomial(m, k));
    std::uint64_t s = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = m == 64 ? 0 : std::uint64_t{1} << m;
    while (true) {
        out.push_back(s);
        const std::uint64_t c = s & (~s + 1);
        const std::uint64_t r = s + c;
        if (r == 0) break;
        s = (((r ^ s) >> 2) / c) | r;
        if (m < 64 && s >= limit) break;
    }
    return out;
}

/// Colex rank of a bitmask among subsets of the same size.
inline std::uint64_t colex_rank(std::uint64_t mask) {
    std::uint64_t rank = 0;
    std::uint64_t t = 1;
    while (mask) {
        const auto pos = static_cast<std::uint64_t>(std::countr_zero(mask));
        rank += binomial(pos, t);
        ++t;
        mask &= mask - 1;
    }
    return rank;
}

}  // namespace detail

/// One block A_k: from pair configs with k occupied inputs to hcb configs with k + 1.
class PairBlock {
public:
    PairBlock(const ModeUnitary& r, std::size_t n, std::size_t k) : m_(r.m), k_(k) {
        const std::size_t singles = n - 2 - k;  // singly occupied outputs besides the pair
        const auto in_sets = detail::subsets(m_, k);
        n_in_ = in_sets.size();
        n_in_next_ = binomial(m_, k + 1);
        insert_.assign(n_in_ * m_, -1);
        for (std::size_t a = 0; a < n_in_; ++a)
            for (std::size_t i = 0; i < m_; ++i)
                if (!(in_sets[a] >> i & 1U))
                    insert_[a * m_ + i] = static_cast<std::int64_t>(detail::colex_rank(in_sets[a] | (std::uint64_t{1} << i)));

        n_out_next_ = binomial(m_, singles + 1);
        const auto out_sets = detail::subsets(m_, singles);
        range_.push_back(0);
        for (std::size_t j = 0; j < m_; ++j) {
            for (std::uint64_t t : out_sets) {
                if (t >> j & 1U) continue;
                pair_mode_.push_back(static_cast<std::uint32_t>(j));
                target_.push_back(static_cast<std::uint32_t>(detail::colex_rank(t | (std::uint64_t{1} << j))));
            }
            range_.push_back(pair_mode_.size());
        }
        n_out_ = pair_mode_.size();
        coeff_.resize(m_ * m_);
        for (std::size_t j = 0; j < m_; ++j)
            for (std::size_t i = 0; i < m_; ++i) coeff_[j * m_ + i] = std::sqrt(2.0) * std::conj(r(j, i));
    }

    [[nodiscard]] std::size_t cols() const noexcept { return n_in_ * n_out_; }
    [[nodiscard]] std::size_t rows() const noexcept { return n_in_next_ * n_out_next_; }
    [[nodiscard]] std::size_t input_count() const noexcept { return k_; }

    /// y = A_k x
    void apply(const CVector& x, CVector& y) const {
        y.setZero(static_cast<Eigen::Index>(rows()));
        const double* xd = reinterpret_cast<const double*>(x.data());
        double* yd = reinterpret_cast<double*>(y.data());
        for (std::size_t a = 0; a < n_in_; ++a) {
            const double* xa = xd + 2 * a * n_out_;
            for (std::size_t i = 0; i < m_; ++i) {
                const auto dst = insert_[a * m_ + i];
                if (dst < 0) continue;
                double* yrow = yd + 2 * static_cast<std::size_t>(dst) * n_out_next_;
                for (std::size_t j = 0; j < m_; ++j) {
                    const Complex c = coeff_[j * m_ + i];
                    const double cr = c.real(), ci = c.imag();
                    for (std::size_t b = range_[j]; b < range_[j + 1]; ++b) {
                        const double xr = xa[2 * b], xi = xa[2 * b + 1];
                        double* out = yrow + 2 * target_[b];
                        out[0] += cr * xr - ci * xi;
                        out[1] += cr * xi + ci * xr;
                    }
                }
            }
        }
    }

    /// x = A_k^dagger y
    void apply_adjoint(const CVector& y, CVector& x) const {
        x.setZero(static_cast<Eigen::Index>(cols()));
        const double* yd = reinterpret_cast<const double*>(y.data());
        double* xd = reinterpret_cast<double*>(x.data());
        for (std::size_t a = 0; a < n_in_; ++a) {
            double* xa = xd + 2 * a * n_out_;
            for (std::size_t i = 0; i < m_; ++i) {
                const auto dst = insert_[a * m_ + i];
                if (dst < 0) continue;
                const double* yrow = yd + 2 * static_cast<std::size_t>(dst) * n_out_next_;
                for (std::size_t j = 0; j < m_; ++j) {
                    // conj(c) * y
                    const Complex c = coeff_[j * m_ + i];
                    const double cr = c.real(), ci = c.imag();
                    for (std::size_t b = range_[j]; b < range_[j + 1]; ++b) {
                        const double* in = yrow + 2 * target_[b];
                        xa[2 * b] += cr * in[0] + ci * in[1];
                        xa[2 * b + 1] += cr * in[1] - ci * in[0];
                    }
                }
            }
        }
    }

private:
    std::size_t m_;
    std::size_t k_;
    std::size_t n_in_ = 0, n_in_next_ = 0, n_out_ = 0, n_out_next_ = 0;
    std::vector<std::int64_t> insert_;
    std::vector<std::uint32_t> pair_mode_;
    std::vector<std::uint32_t> target_;
    std::vector<std::size_t> range_;  // output parts with the pair on b_j are [range_[j], range_[j+1])
    std::vector<Complex> coeff_;
};

enum class SingularValueMethod { lanczos, power };

struct SingularValueOptions {
    SingularValueMethod method = SingularValueMethod::lanczos;
    /// Relative tolerance: power iteration stops on successive estimates,
    /// Lanczos on the Ritz residual of A^dagger A.
    double tolerance = 1e-8;
    int max_iterations = 10'000;
    /// Lanczos basis size; a third of it survives each restart.
    int krylov_dim = 24;
    std::uint64_t seed = 0;
};

struct SingularValueEstimate {
    double value = 0.0;
    int iterations = 0;  // applications of A^dagger A
    bool converged = false;
};

using LinearMap = std::function<void(const CVector&, CVector&)>;

namespace detail {

inline CVector seeded_start(std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    CVector x(static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = Complex(rng.normal(), rng.normal());
    x.normalize();
    return x;
}

inline SingularValueEstimate power_iteration(std::size_t cols, const LinearMap& apply, const LinearMap& apply_adjoint,
                                             const SingularValueOptions& opts) {
    SingularValueEstimate est;
    CVector x = seeded_start(cols, opts.seed);
    CVector y;
    double previous = 0.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        apply(x, y);
        const double sigma = y.norm();
        est.value = sigma;
        est.iterations = it;
        if (sigma == 0.0 || (it > 1 && std::abs(sigma - previous) <= opts.tolerance * sigma)) {
            est.converged = true;
            return est;
        }
        previous = sigma;
        apply_adjoint(y, x);
        x /= x.norm();
    }
    return est;
}

/// Thick-restart Lanczos on G = A^dagger A, in Rayleigh-Ritz form.
///
/// V holds an orthonormal basis and GV its images, H = V^H G V is kept up
/// to date column by column. The basis grows by the residual of the top
/// Ritz pair, which spans the same Krylov space as the three-term
/// recurrence. A full basis shrinks to its `keep` leading Ritz vectors,
/// so a cluster of nearly equal top values is not thrown away at every
/// restart. Converged when ||G y - theta y|| <= tolerance * theta, or when
/// theta moves by less than tolerance * theta / 10 over a whole cycle.
inline SingularValueEstimate lanczos(std::size_t cols, const LinearMap& apply, const LinearMap& apply_adjoint,
                                     const SingularValueOptions& opts) {
    SingularValueEstimate est;
    const auto n = static_cast<Eigen::Index>(cols);
    const Eigen::Index kmax = std::min<Eigen::Index>(std::max(opts.krylov_dim, 2), n);
    const Eigen::Index keep = std::max<Eigen::Index>(1, kmax / 3);
    CMatrix v(n, kmax), gv(n, kmax);
    CMatrix h = CMatrix::Zero(kmax, kmax);
    Eigen::Index k = 0;
    CVector y, w;

    // Orthogonalize q against the basis (a second pass if the first lost
    // more than half the norm), append it and its image.
    auto append = [&](CVector q) {
        const double before = q.norm();
        q -= v.leftCols(k) * (v.leftCols(k).adjoint() * q);
        if (q.norm() < 0.7 * before) q -= v.leftCols(k) * (v.leftCols(k).adjoint() * q);
        const double norm = q.norm();
        if (!(norm > 1e-13 * before)) return false;
        v.col(k) = q / norm;
        apply(v.col(k), y);
        apply_adjoint(y, w);
        ++est.iterations;
        gv.col(k) = w;
        const CVector hk = v.leftCols(k + 1).adjoint() * w;
        for (Eigen::Index i = 0; i < k; ++i) {
            h(i, k) = hk[i];
            h(k, i) = std::conj(hk[i]);
        }
        h(k, k) = hk[k].real();
        ++k;
        return true;
    };

    append(seeded_start(cols, opts.seed));
    double previous_theta = -1.0;
    while (true) {
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(h.topLeftCorner(k, k));
        const double theta = eig.eigenvalues()[k - 1];
        const CVector s = eig.eigenvectors().col(k - 1);
        const CVector residual = gv.leftCols(k) * s - theta * (v.leftCols(k) * s);
        est.value = std::sqrt(std::max(theta, 0.0));
        const double res = residual.norm();
        if (theta <= 0.0 && res <= 1e-14) {
            est.value = 0.0;
            est.converged = true;
            return est;
        }
        if (res <= opts.tolerance * theta) {
            est.converged = true;
            return est;
        }
        if (est.iterations >= opts.max_iterations) return est;
        if (k == kmax) {
            if (previous_theta >= 0.0 && std::abs(theta - previous_theta) <= 0.1 * opts.tolerance * theta) {
                est.converged = true;
                return est;
            }
            previous_theta = theta;
            const CMatrix lead = eig.eigenvectors().rightCols(keep);
            const CMatrix v_new = v.leftCols(k) * lead;
            const CMatrix gv_new = gv.leftCols(k) * lead;
            v.leftCols(keep) = v_new;
            gv.leftCols(keep) = gv_new;
            h.setZero();
            for (Eigen::Index i = 0; i < keep; ++i) h(i, i) = eig.eigenvalues()[k - keep + i];
            k = keep;
        }
        // a residual that vanishes under reorthogonalization means V is invariant
        if (!append(residual)) {
            est.converged = true;
            return est;
        }
    }
}

}  // namespace detail

/// Largest singular value of the operator given by apply / apply_adjoint.
inline SingularValueEstimate largest_singular_value(std::size_t cols, const LinearMap& apply,
                                                    const LinearMap& apply_adjoint,
                                                    const SingularValueOptions& opts = {}) {
    if (cols == 0) return SingularValueEstimate{0.0, 0, true};
    return opts.method == SingularValueMethod::power ? detail::power_iteration(cols, apply, apply_adjoint, opts)
                                                     : detail::lanczos(cols, apply, apply_adjoint, opts);
}

/// ||Q H_BS P_1bpair||_2 through the block decomposition.
struct PairOperatorNorm {
    double value = 0.0;
    int iterations = 0;  // summed over blocks
    bool converged = true;
    std::size_t argmax_block = 0;
};

inline PairOperatorNorm pair_operator_norm(const ModeUnitary& r, std::size_t n, const SingularValueOptions& opts = {}) {
    PairOperatorNorm out;
    if (n < 2) return out;
    if (r.m > 64) throw CapacityError("pair_operator_norm: M > 64 is not supported by the bitmask layout");
    for (std::size_t k = 0; k + 2 <= n && k <= r.m; ++k) {
        if (k + 1 > r.m || n - 1 - k > r.m) continue;
        const PairBlock block(r, n, k);
        if (block.cols() == 0) continue;
        SingularValueOptions block_opts = opts;
        block_opts.seed = derive_seed(opts.seed, {k});
        const auto est = largest_singular_value(
            block.cols(), [&](const CVector& x, CVector& y) { block.apply(x, y); },
            [&](const CVector& y, CVector& x) { block.apply_adjoint(y, x); }, block_opts);
        out.iterations += est.iterations;
        out.converged = out.converged && est.converged;
        if (est.value > out.value) {
            out.value = est.value;
            out.argmax_block = k;
        }
    }
    return out;
}

}  // namespace bosonspin
