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
 * @file bosondyn.hpp
 * @brief Dynamics of the beam-splitter model
 *
 *   H_BS = sum_{ij} (R_ji b_j^dagger a_i + h.c.)
 *
 * started from a_1^dagger ... a_N^dagger |vac>. Each input creation operator
 * evolves as cos(t) a_k^dagger - i sin(t) sum_j R_jk b_j^dagger, so the state
 * is a product at all times and its amplitudes are permanents of
 * submatrices of R. evolve_full() integrates the same model on the whole
 * N-particle Fock sector and serves as the reference for amplitude().
 */

#include <cmath>
#include <memory>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "bosonspin/common.hpp"
#include "bosonspin/fockspace.hpp"
#include "bosonspin/haar.hpp"
#include "bosonspin/permanent.hpp"
#include "bosonspin/probability.hpp"
#include "bosonspin/propagator.hpp"

namespace bosonspin {

/// phi(t) represented implicitly by (R, N, t). Normalized by construction.
struct ProductFormState {
    ModeUnitary r;
    std::size_t n = 0;
    double t = 0.0;
};

/// Amplitude vector over an explicit sector basis.
struct BosonState {
    SectorBasisPtr basis;
    CVector amplitudes;

    [[nodiscard]] double norm() const { return std::sqrt(squared_norm_pairwise(amplitudes)); }
};

/// <config | phi(t)>.
///
/// With S the occupied input modes and K = {1..N} \ S the photons that have
/// moved to the outputs, the amplitude is
///
///   cos(t)^|S| (-i sin t)^|K| Per(B) / sqrt(prod_j n_j!)
///
/// where B has columns k in K and row j of R repeated n_j times. Zero when
/// an input mode is multiply occupied or an input mode beyond N is occupied.
inline Complex amplitude(const ProductFormState& state, ConfigView config) {
    const std::size_t m = state.r.m;
    if (config.size() != 2 * m) throw BasisMismatch("amplitude: config length is not 2M");
    std::size_t total = 0;
    for (auto v : config) total += v;
    if (total != state.n) throw DomainError("amplitude: config particle number differs from N");

    std::vector<Eigen::Index> cols;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto occ = config[k];
        if (occ > 1 || (occ == 1 && k >= state.n)) return {0.0, 0.0};
        if (k < state.n) {
            if (occ == 1)
                ++kept;
            else
                cols.push_back(static_cast<Eigen::Index>(k));
        }
    }
    const auto moved = static_cast<Eigen::Index>(cols.size());
    CMatrix sub(moved, moved);
    double factorials = 1.0;
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const unsigned occ = config[m + j];
        for (unsigned rep = 0; rep < occ; ++rep) {
            for (Eigen::Index c = 0; c < moved; ++c)
                sub(row, c) = state.r.entries(static_cast<Eigen::Index>(j), cols[static_cast<std::size_t>(c)]);
            ++row;
            factorials *= static_cast<double>(rep + 1);
        }
    }
    const Complex transfer = std::pow(-kI * std::sin(state.t), static_cast<int>(moved));
    const double stay = std::pow(std::cos(state.t), static_cast<int>(kept));
    return stay * transfer * permanent(sub) / std::sqrt(factorials);
}

/// phi(t) evaluated config by config on `basis`.
inline BosonState assemble(const ProductFormState& state, SectorBasisPtr basis) {
    if (basis->m() != state.r.m || basis->n() != state.n) throw BasisMismatch("assemble: basis (M, N) mismatch");
    CVector amps(static_cast<Eigen::Index>(basis->size()));
    for (std::size_t i = 0; i < basis->size(); ++i)
        amps[static_cast<Eigen::Index>(i)] = amplitude(state, basis->config(i));
    return BosonState{std::move(basis), std::move(amps)};
}

/// Block of H_BS with rows on `rows` and columns on `cols`, including the
/// sqrt(occupation) factors of the bosonic ladder operators.
inline SparseCMatrix build_hbs_block(const ModeUnitary& r, const SectorBasis& rows, const SectorBasis& cols) {
    const std::size_t m = r.m;
    if (rows.m() != m || cols.m() != m || rows.n() != cols.n())
        throw BasisMismatch("build_hbs_block: bases do not match the unitary / each other");
    std::vector<CTriplet> triplets;
    OccupationConfig next(2 * m);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto cfg = cols.config(c);
        std::copy(cfg.begin(), cfg.end(), next.begin());
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const unsigned na = cfg[i];
                const unsigned nb = cfg[m + j];
                // b_j^dagger a_i with coefficient R_ji
                if (na > 0 && nb < 255) {
                    next[i] = static_cast<std::uint8_t>(na - 1);
                    next[m + j] = static_cast<std::uint8_t>(nb + 1);
                    if (auto row = rows.find(next))
                        triplets.emplace_back(static_cast<int>(*row), static_cast<int>(c),
                                              r(j, i) * std::sqrt(double(na) * double(nb + 1)));
                    next[i] = static_cast<std::uint8_t>(na);
                    next[m + j] = static_cast<std::uint8_t>(nb);
                }
                // a_i^dagger b_j with coefficient conj(R_ji)
                if (nb > 0 && na < 255) {
                    next[i] = static_cast<std::uint8_t>(na + 1);
                    next[m + j] = static_cast<std::uint8_t>(nb - 1);
                    if (auto row = rows.find(next))
                        triplets.emplace_back(static_cast<int>(*row), static_cast<int>(c),
                                              std::conj(r(j, i)) * std::sqrt(double(nb) * double(na + 1)));
                    next[i] = static_cast<std::uint8_t>(na);
                    next[m + j] = static_cast<std::uint8_t>(nb);
                }
            }
        }
    }
    SparseCMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

/// Brute-force reference: H_BS on the full N-particle sector, propagated exactly.
inline BosonState evolve_full(const ModeUnitary& r, std::size_t n, double t,
                              std::uint64_t capacity = kDefaultCapacity, const PropagatorOptions& opts = {}) {
    auto basis = make_sector(r.m, n, SectorKind::full, capacity);
    const SparseCMatrix h = build_hbs_block(r, *basis, *basis);
    CVector initial = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
    initial[static_cast<Eigen::Index>(basis->index_of(basis->initial_config()))] = 1.0;
    CVector out = propagate_hermitian(h, initial, t, opts);
    return BosonState{std::move(basis), std::move(out)};
}

/// sum over `basis` of |<config|phi(t)>|^2, i.e. ||Q phi||^2 or ||P_1bpair phi||^2.
inline double sector_weight(const ProductFormState& state, const SectorBasis& basis) {
    if (basis.m() != state.r.m || basis.n() != state.n) throw BasisMismatch("sector_weight: basis (M, N) mismatch");
    std::vector<double> w(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) w[i] = std::norm(amplitude(state, basis.config(i)));
    return pairwise_sum(w);
}

/// Time-independent decomposition of a sector weight.
///
/// The t dependence of |<config|phi(t)>|^2 is cos^{2(N-k)} sin^{2k} with k
/// the number of photons on output modes, so
///   weight(t) = sum_k cos(t)^{2(N-k)} sin(t)^{2k} G_k
/// and the G_k need one pass over the basis for any number of time points.
class SectorWeightProfile {
public:
    SectorWeightProfile(const ModeUnitary& r, std::size_t n, const SectorBasis& basis) : n_(n) {
        // Evaluate at t = pi/4: every amplitude carries |cos|^{2(N-k)} |sin|^{2k} = 2^{-N}.
        const ProductFormState probe{r, n, kPi / 4.0};
        std::vector<std::vector<double>> per_k(n + 1);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto cfg = basis.config(i);
            std::size_t out = 0;
            for (std::size_t j = 0; j < r.m; ++j) out += cfg[r.m + j];
            per_k[out].push_back(std::norm(amplitude(probe, cfg)) * std::ldexp(1.0, static_cast<int>(n)));
        }
        coeffs_.resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k) coeffs_[k] = pairwise_sum(per_k[k]);
    }

    [[nodiscard]] double operator()(double t) const {
        const double c2 = std::cos(t) * std::cos(t);
        const double s2 = std::sin(t) * std::sin(t);
        std::vector<double> terms(n_ + 1);
        for (std::size_t k = 0; k <= n_; ++k)
            terms[k] = std::pow(c2, static_cast<int>(n_ - k)) * std::pow(s2, static_cast<int>(k)) * coeffs_[k];
        return pairwise_sum(terms);
    }

    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }

private:
    std::size_t n_;
    std::vector<double> coeffs_;
};

/// w_n = C(N, n) cos(t)^{2(N-n)} sin(t)^{2n}: weight of the n-photon
/// boson-sampling component of phi(t).
inline std::vector<double> expansion_weights(std::size_t n, double t) {
    const double c2 = std::cos(t) * std::cos(t);
    const double s2 = std::sin(t) * std::sin(t);
    std::vector<double> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        w[k] = static_cast<double>(binomial(n, k)) * std::pow(c2, static_cast<int>(n - k)) *
               std::pow(s2, static_cast<int>(k));
    return w;
}

/// Output-mode pattern of a config ("0110" over b_1..b_M).
inline std::string output_pattern(ConfigView config, std::size_t m) {
    return config_string(config.subspan(m, m));
}

/// |gamma_n|^2 over collision-free output patterns with all N photons out,
/// renormalized to sum to one.
inline ProbabilityTable boson_output_distribution(const ProductFormState& state, const SectorBasis& hcb) {
    if (hcb.kind() != SectorKind::hcb) throw SectorError("boson_output_distribution: needs the hcb basis");
    ProbabilityTable table;
    std::vector<double> probs;
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < hcb.size(); ++i) {
        const auto cfg = hcb.config(i);
        std::size_t out = 0;
        for (std::size_t j = 0; j < hcb.m(); ++j) out += cfg[hcb.m() + j];
        if (out != state.n) continue;
        keys.push_back(output_pattern(cfg, hcb.m()));
        probs.push_back(std::norm(amplitude(state, cfg)));
    }
    const double z = pairwise_sum(probs);
    if (z < 1e-12) throw DegeneratePostselection("boson_output_distribution: no weight on output configurations");
    for (std::size_t i = 0; i < keys.size(); ++i) table.entries.emplace(keys[i], probs[i] / z);
    return table;
}

inline nlohmann::json state_to_json(const BosonState& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
        amps.push_back({state.amplitudes[i].real(), state.amplitudes[i].imag()});
    nlohmann::json configs = nlohmann::json::array();
    for (std::size_t i = 0; i < state.basis->size(); ++i) configs.push_back(config_string(state.basis->config(i)));
    return {{"basis", {{"m", state.basis->m()}, {"n", state.basis->n()}, {"kind", to_string(state.basis->kind())}}},
            {"configs", std::move(configs)},
            {"amplitudes", std::move(amps)}};
}

}  // namespace bosonspin
