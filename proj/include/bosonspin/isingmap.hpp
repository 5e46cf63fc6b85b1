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
 * @file isingmap.hpp
 * @brief Transverse-field Ising model and its rotating-wave reduction to
 * the XY spin model.
 *
 *   H_Ising = sum_{a<b} J_ab X_a X_b + B sum_a Z_a
 *
 * on 2M qubits. Qubit a is bit a of the basis index: in-spin i is bit i,
 * out-spin j is bit M + j. Z|1> = +|1>, and |1> is the excited spin.
 *
 * With J_{out_j, in_i} = R_ji and |B| >> |J|, the interaction picture of
 * B sum Z drops the X X counter-rotating terms and leaves
 * sum_ij R_ji s+_{out j} s-_{in i} + h.c., which is the spindyn Hamiltonian.
 * Only real R is supported: X X couplings are real.
 */

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "bosonspin/common.hpp"
#include "bosonspin/fockspace.hpp"
#include "bosonspin/haar.hpp"
#include "bosonspin/propagator.hpp"
#include "bosonspin/rng.hpp"
#include "bosonspin/spindyn.hpp"

namespace bosonspin {

inline constexpr std::size_t kMaxIsingModes = 5;  // 2M = 10 qubits, dimension 1024

struct IsingModel {
    std::size_t sites = 0;  // 2M
    RMatrix j;              // symmetric, zero diagonal, nonzero only between in and out blocks
    double b = 0.0;

    [[nodiscard]] std::size_t dimension() const { return std::size_t{1} << sites; }
};

/// Haar-distributed O(m) element: real Ginibre, QR, sign correction.
inline ModeUnitary sample_real_orthogonal(std::size_t m, std::uint64_t seed) {
    if (m == 0) throw InvalidDimension("sample_real_orthogonal: mode count must be >= 1");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(m);
    RMatrix ginibre(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) ginibre(i, k) = rng.normal();
    Eigen::HouseholderQR<RMatrix> qr(ginibre);
    RMatrix q = qr.householderQ();
    const RMatrix& packed = qr.matrixQR();
    for (Eigen::Index k = 0; k < n; ++k)
        if (packed(k, k) < 0.0) q.col(k) *= -1.0;
    return ModeUnitary{m, q.cast<Complex>(), seed};
}

/// Largest |J_ab - J_ba| plus largest |J_aa|.
inline double symmetry_defect(const RMatrix& j) {
    return (j - j.transpose()).cwiseAbs().maxCoeff() + j.diagonal().cwiseAbs().maxCoeff();
}

inline IsingModel build_ising_from_r(const ModeUnitary& r, double b) {
    if (r.m > kMaxIsingModes)
        throw CapacityError("build_ising_from_r: M = " + std::to_string(r.m) + " exceeds " +
                            std::to_string(kMaxIsingModes) + " (2^{2M} state space)");
    if (!r.is_real(1e-12))
        throw UnsupportedCoupling("build_ising_from_r: complex R cannot be realized by real X X couplings");
    const std::size_t m = r.m;
    IsingModel model;
    model.sites = 2 * m;
    model.b = b;
    model.j = RMatrix::Zero(static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(2 * m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            // out_k <-> in_i carries R_ki
            const double v = r(k, i).real();
            model.j(static_cast<Eigen::Index>(m + k), static_cast<Eigen::Index>(i)) = v;
            model.j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m + k)) = v;
        }
    return model;
}

/// Dense real symmetric H_Ising on the 2^{2M} qubit basis.
inline RMatrix ising_hamiltonian(const IsingModel& model) {
    if (model.sites > 2 * kMaxIsingModes) throw CapacityError("ising_hamiltonian: more than 10 qubits");
    const std::size_t dim = model.dimension();
    RMatrix h = RMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t s = 0; s < dim; ++s) {
        double diag = 0.0;
        for (std::size_t a = 0; a < model.sites; ++a) diag += (s >> a & 1U) ? model.b : -model.b;
        h(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = diag;
        for (std::size_t a = 0; a < model.sites; ++a)
            for (std::size_t c = a + 1; c < model.sites; ++c) {
                const double jac = model.j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
                if (jac == 0.0) continue;
                const std::size_t flipped = s ^ (std::size_t{1} << a) ^ (std::size_t{1} << c);
                h(static_cast<Eigen::Index>(flipped), static_cast<Eigen::Index>(s)) += jac;
            }
    }
    return h;
}

/// e^{-i H_Ising t} from one eigendecomposition, reusable across times.
class IsingPropagator {
public:
    explicit IsingPropagator(const IsingModel& model) : solver_(ising_hamiltonian(model)) {
        if (solver_.info() != Eigen::Success) throw ConvergenceError("IsingPropagator: eigensolver failed");
    }

    [[nodiscard]] CVector operator()(const CVector& initial, double t) const {
        const RMatrix& v = solver_.eigenvectors();
        if (initial.size() != v.rows()) throw InvalidDimension("IsingPropagator: state dimension mismatch");
        CVector coeffs = v.transpose().cast<Complex>() * initial;
        for (Eigen::Index k = 0; k < coeffs.size(); ++k)
            coeffs[k] *= std::exp(Complex(0.0, -solver_.eigenvalues()[k] * t));
        return v.cast<Complex>() * coeffs;
    }

private:
    Eigen::SelfAdjointEigenSolver<RMatrix> solver_;
};

inline CVector propagate_ising(const IsingModel& model, const CVector& initial, double t) {
    if (model.sites > 2 * kMaxIsingModes) throw CapacityError("propagate_ising: more than 10 qubits");
    return IsingPropagator(model)(initial, t);
}

/// e^{+i B t sum Z} psi: the interaction picture of the transverse field.
inline CVector to_rotating_frame(const CVector& psi, std::size_t sites, double b, double t) {
    CVector out(psi.size());
    for (Eigen::Index s = 0; s < psi.size(); ++s) {
        const int ones = std::popcount(static_cast<std::uint64_t>(s));
        const double z = static_cast<double>(2 * ones - static_cast<int>(sites));
        out[s] = psi[s] * std::exp(Complex(0.0, b * t * z));
    }
    return out;
}

/// Qubit index of an hcb occupation vector.
inline std::size_t qubit_index(ConfigView cfg) {
    std::size_t s = 0;
    for (std::size_t a = 0; a < cfg.size(); ++a)
        if (cfg[a] != 0) s |= std::size_t{1} << a;
    return s;
}

/// Product state with in-spins 1..N excited.
inline CVector initial_qubit_state(std::size_t m, std::size_t n) {
    if (n > m) throw DomainError("initial_qubit_state: N must not exceed M");
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << (2 * m)));
    psi[static_cast<Eigen::Index>((std::size_t{1} << n) - 1)] = 1.0;
    return psi;
}

/// XY model sum_ij R_ji s+_{out j} s-_{in i} + h.c. on all 2^{2M} qubit states.
inline SparseCMatrix xy_hamiltonian_full(const ModeUnitary& r) {
    if (r.m > kMaxIsingModes) throw CapacityError("xy_hamiltonian_full: M exceeds 5");
    const std::size_t m = r.m;
    const std::size_t dim = std::size_t{1} << (2 * m);
    std::vector<CTriplet> triplets;
    for (std::size_t s = 0; s < dim; ++s)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const bool in_up = s >> i & 1U;
                const bool out_up = s >> (m + k) & 1U;
                if (in_up == out_up) continue;
                const std::size_t target = s ^ (std::size_t{1} << i) ^ (std::size_t{1} << (m + k));
                triplets.emplace_back(static_cast<int>(target), static_cast<int>(s),
                                      in_up ? r(k, i) : std::conj(r(k, i)));
            }
    SparseCMatrix h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
}

/// Embeds an hcb-sector spin state into the qubit register.
inline CVector embed_spin_state(const SpinState& psi) {
    const auto& basis = *psi.basis;
    if (basis.kind() != SectorKind::hcb) throw SectorError("embed_spin_state: basis must be hcb");
    CVector out = CVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << basis.sites()));
    for (std::size_t c = 0; c < basis.size(); ++c)
        out[static_cast<Eigen::Index>(qubit_index(basis.config(c)))] = psi.amplitudes[static_cast<Eigen::Index>(c)];
    return out;
}

struct RwaResult {
    double fidelity = 0.0;
    double xy_norm_defect = 0.0;
    double ising_norm_defect = 0.0;
    double rotating_norm_defect = 0.0;
};

inline RwaResult rwa_fidelity_report(const ModeUnitary& r, std::size_t n, double b, double t) {
    if (r.m > kMaxIsingModes) throw CapacityError("rwa_fidelity: M exceeds 5");
    if (n > 2) throw DomainError("rwa_fidelity: N must be <= 2");
    const IsingModel model = build_ising_from_r(r, b);
    const CVector psi0 = initial_qubit_state(r.m, n);
    PropagatorOptions dense;
    dense.method = PropagatorMethod::dense;
    const CVector psi_xy = propagate_hermitian(xy_hamiltonian_full(r), psi0, t, dense);
    const CVector psi_ising = propagate_ising(model, psi0, t);
    const CVector psi_rot = to_rotating_frame(psi_ising, model.sites, b, t);
    RwaResult res;
    res.fidelity = std::norm(psi_xy.dot(psi_rot));
    res.xy_norm_defect = std::abs(psi_xy.norm() - 1.0);
    res.ising_norm_defect = std::abs(psi_ising.norm() - 1.0);
    res.rotating_norm_defect = std::abs(psi_rot.norm() - 1.0);
    return res;
}

/// |<psi_XY(t)|psi_rot(t)>|^2 for the product initial state with N in-spins up.
inline double rwa_fidelity(const ModeUnitary& r, std::size_t n, double b, double t) {
    return rwa_fidelity_report(r, n, b, t).fidelity;
}

}  // namespace bosonspin
