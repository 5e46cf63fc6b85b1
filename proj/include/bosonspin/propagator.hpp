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

#include <algorithm>
#include <cmath>
#include <vector>

#include "bosonspin/common.hpp"

namespace bosonspin {

enum class PropagatorMethod { automatic, dense, krylov };

struct PropagatorOptions {
    PropagatorMethod method = PropagatorMethod::automatic;
    /// Largest dimension handled by dense diagonalization in automatic mode.
    Eigen::Index dense_limit = 4000;
    /// Per-step a posteriori error tolerance of the Krylov integrator.
    double krylov_tolerance = 1e-10;
    int krylov_dim = 40;
};

/// exp(-i H t) v with H Hermitian, via a full eigendecomposition.
inline CVector propagate_dense(const CMatrix& h, const CVector& v, double t) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    if (eig.info() != Eigen::Success) throw ConvergenceError("dense propagator: eigensolver failed");
    const CVector coeffs = eig.eigenvectors().adjoint() * v;
    CVector phased(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        phased[k] = std::exp(-kI * eig.eigenvalues()[k] * t) * coeffs[k];
    return eig.eigenvectors() * phased;
}

/// exp(-i H t) v by Lanczos with full reorthogonalization and adaptive
/// step size. A step of length tau is accepted when the estimate
/// |beta_{m+1} [exp(-i tau T_m) e_1]_m| is below the tolerance.
inline CVector propagate_krylov(const SparseCMatrix& h, const CVector& v, double t, double tol = 1e-10,
                                int krylov_dim = 40) {
    const Eigen::Index dim = h.rows();
    const int m_max = static_cast<int>(std::min<Eigen::Index>(krylov_dim, dim));
    CVector w = v;
    if (t == 0.0 || w.norm() == 0.0) return w;

    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double total = std::abs(t);
    double done = 0.0;
    double tau = total;
    std::vector<CVector> basis;
    basis.reserve(static_cast<std::size_t>(m_max) + 1);
    CVector scratch(dim);

    while (done < total) {
        const double beta0 = w.norm();
        basis.clear();
        basis.push_back(w / beta0);
        RVector alpha(m_max);
        RVector beta(m_max);
        int m = 0;
        double beta_next = 0.0;
        for (; m < m_max; ++m) {
            scratch.noalias() = h * basis[static_cast<std::size_t>(m)];
            alpha[m] = basis[static_cast<std::size_t>(m)].dot(scratch).real();
            // Full reorthogonalization (twice is enough).
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) scratch -= q.dot(scratch) * q;
            beta_next = scratch.norm();
            beta[m] = beta_next;
            if (m + 1 == m_max || beta_next < 1e-14 * std::max(1.0, std::abs(alpha[m]))) {
                ++m;
                break;
            }
            basis.push_back(scratch / beta_next);
        }
        const bool happy = beta_next < 1e-14 * std::max(1.0, std::abs(alpha[m - 1]));

        RMatrix tri = RMatrix::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            tri(k, k) = alpha[k];
            if (k + 1 < m) tri(k, k + 1) = tri(k + 1, k) = beta[k];
        }
        Eigen::SelfAdjointEigenSolver<RMatrix> eig(tri);
        const RMatrix& z = eig.eigenvectors();
        const RVector& lam = eig.eigenvalues();

        auto small_propagate = [&](double step) {
            CVector y(m);
            for (int i = 0; i < m; ++i) {
                Complex acc{};
                for (int k = 0; k < m; ++k) acc += z(i, k) * std::exp(-kI * lam[k] * (sign * step)) * z(0, k);
                y[i] = acc;
            }
            return y;
        };

        // On breakdown the Krylov space is invariant and the rest of the interval is exact.
        double step = happy ? total - done : std::min(tau, total - done);
        CVector y = small_propagate(step);
        if (!happy) {
            double err = beta0 * beta_next * std::abs(y[m - 1]);
            int shrink = 0;
            while (err > tol && shrink < 60) {
                step *= 0.5;
                y = small_propagate(step);
                err = beta0 * beta_next * std::abs(y[m - 1]);
                ++shrink;
            }
            if (err > tol) throw ConvergenceError("krylov propagator: step size underflow");
            // Grow the next trial step when this one was comfortably accurate.
            tau = shrink == 0 ? step * 1.5 : step;
        }
        CVector next = CVector::Zero(dim);
        for (int k = 0; k < m; ++k) next += (beta0 * y[k]) * basis[static_cast<std::size_t>(k)];
        w = std::move(next);
        done += step;
    }
    return w;
}

/// exp(-i H t) v choosing the dense or Krylov route by dimension.
inline CVector propagate_hermitian(const SparseCMatrix& h, const CVector& v, double t,
                                   const PropagatorOptions& opts = {}) {
    if (h.rows() != h.cols() || h.rows() != v.size()) throw InvalidDimension("propagate: shape mismatch");
    if (t == 0.0) return v;
    const bool dense = opts.method == PropagatorMethod::dense ||
                       (opts.method == PropagatorMethod::automatic && h.rows() <= opts.dense_limit);
    if (dense) return propagate_dense(CMatrix(h), v, t);
    return propagate_krylov(h, v, t, opts.krylov_tolerance, opts.krylov_dim);
}

}  // namespace bosonspin
