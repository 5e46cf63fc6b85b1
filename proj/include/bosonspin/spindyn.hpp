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
 * @file spindyn.hpp
 * @brief The XY spin model H = Q H_BS Q on the hard-core sector.
 *
 *   H = sum_{ij} sigma^+_{out,j} R_ji sigma^-_{in,i} + h.c.
 *
 * Spin configurations are hcb occupation vectors (1 = excited spin).
 */

#include <cmath>
#include <memory>
#include <vector>

#include "bosonspin/bosondyn.hpp"
#include "bosonspin/common.hpp"
#include "bosonspin/fockspace.hpp"
#include "bosonspin/haar.hpp"
#include "bosonspin/probability.hpp"
#include "bosonspin/propagator.hpp"

namespace bosonspin {

struct SpinHamiltonian {
    SectorBasisPtr basis;
    SparseCMatrix matrix;
};

struct SpinState {
    SectorBasisPtr basis;
    CVector amplitudes;

    [[nodiscard]] double norm() const { return std::sqrt(squared_norm_pairwise(amplitudes)); }
};

inline SpinHamiltonian build_spin_hamiltonian(const ModeUnitary& r, SectorBasisPtr basis) {
    if (basis->kind() != SectorKind::hcb) throw SectorError("build_spin_hamiltonian: basis must be hcb");
    if (basis->m() != r.m) throw BasisMismatch("build_spin_hamiltonian: basis M differs from R");
    const std::size_t m = r.m;
    std::vector<CTriplet> triplets;
    triplets.reserve(basis->size() * basis->n() * m);
    OccupationConfig next(2 * m);
    for (std::size_t c = 0; c < basis->size(); ++c) {
        const auto cfg = basis->config(c);
        std::copy(cfg.begin(), cfg.end(), next.begin());
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const bool in_up = cfg[i] != 0;
                const bool out_up = cfg[m + j] != 0;
                if (in_up == out_up) continue;
                next[i] = out_up ? 1 : 0;
                next[m + j] = in_up ? 1 : 0;
                const auto row = basis->index_of(next);
                // in -> out hop carries R_ji, out -> in its conjugate
                triplets.emplace_back(static_cast<int>(row), static_cast<int>(c), in_up ? r(j, i) : std::conj(r(j, i)));
                next[i] = cfg[i];
                next[m + j] = cfg[m + j];
            }
        }
    }
    SparseCMatrix h(static_cast<Eigen::Index>(basis->size()), static_cast<Eigen::Index>(basis->size()));
    h.setFromTriplets(triplets.begin(), triplets.end());
    return SpinHamiltonian{std::move(basis), std::move(h)};
}

inline double hermiticity_defect(const SparseCMatrix& h) {
    const SparseCMatrix diff = h - SparseCMatrix(h.adjoint());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (SparseCMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

/// psi(0): in-sites 1..N excited.
inline SpinState initial_spin_state(SectorBasisPtr basis) {
    CVector amps = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
    amps[static_cast<Eigen::Index>(basis->index_of(basis->initial_config()))] = 1.0;
    return SpinState{std::move(basis), std::move(amps)};
}

inline SpinState propagate(const SpinHamiltonian& h, const SpinState& initial, double t,
                           const PropagatorOptions& opts = {}) {
    if (h.basis != initial.basis && h.basis->size() != initial.basis->size())
        throw BasisMismatch("propagate: state and Hamiltonian live on different bases");
    return SpinState{initial.basis, propagate_hermitian(h.matrix, initial.amplitudes, t, opts)};
}

/// delta = Q phi(t) - psi(t) on the hcb basis, with both ingredients kept.
struct SamplingError {
    CVector delta;
    double norm = 0.0;
    SpinState psi;
    CVector q_phi;
};

inline SamplingError sampling_error_delta(const ModeUnitary& r, std::size_t n, double t,
                                          std::uint64_t capacity = kDefaultCapacity,
                                          const PropagatorOptions& opts = {}) {
    auto basis = make_sector(r.m, n, SectorKind::hcb, capacity);
    const auto h = build_spin_hamiltonian(r, basis);
    const SpinState psi = propagate(h, initial_spin_state(basis), t, opts);
    CVector q_phi = assemble(ProductFormState{r, n, t}, basis).amplitudes;
    CVector delta = q_phi - psi.amplitudes;
    const double norm = std::sqrt(squared_norm_pairwise(delta));
    return SamplingError{std::move(delta), norm, psi, std::move(q_phi)};
}

namespace detail {
inline std::size_t output_count(ConfigView cfg, std::size_t m) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < m; ++j) out += cfg[m + j];
    return out;
}
}  // namespace detail

/// Probability that all N excitations sit on output spins.
inline double postselect_success(const SpinState& psi, std::size_t n) {
    const auto& basis = *psi.basis;
    std::vector<double> w;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (detail::output_count(basis.config(i), basis.m()) == n)
            w.push_back(std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]));
    return pairwise_sum(w);
}

/// Output-spin pattern distribution conditioned on postselection success.
inline ProbabilityTable spin_output_distribution(const SpinState& psi, std::size_t n) {
    const auto& basis = *psi.basis;
    std::vector<std::string> keys;
    std::vector<double> probs;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto cfg = basis.config(i);
        if (detail::output_count(cfg, basis.m()) != n) continue;
        keys.push_back(output_pattern(cfg, basis.m()));
        probs.push_back(std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]));
    }
    const double z = pairwise_sum(probs);
    if (z < 1e-12) throw DegeneratePostselection("spin_output_distribution: postselection weight below 1e-12");
    ProbabilityTable table;
    for (std::size_t i = 0; i < keys.size(); ++i) table.entries.emplace(keys[i], probs[i] / z);
    return table;
}

}  // namespace bosonspin
