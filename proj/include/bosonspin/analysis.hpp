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
 * @file analysis.hpp
 * @brief Error bounds and ensemble experiments for the boson/spin mapping.
 *
 * Quantities per instance (R, N, t):
 *   ||delta(t)||         with delta = Q phi(t) - psi(t)
 *   ||Q H_BS P_1bpair||  largest singular value of the pair -> hcb block
 *   integrated bound     int_0^t ||Q H_BS P_1bpair|| ||P_1bpair phi(tau)|| dtau
 *   |p1 - p2|_1          variation distance of boson and spin statistics
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bosonspin/bosondyn.hpp"
#include "bosonspin/common.hpp"
#include "bosonspin/fockspace.hpp"
#include "bosonspin/haar.hpp"
#include "bosonspin/pair_operator.hpp"
#include "bosonspin/parallel.hpp"
#include "bosonspin/probability.hpp"
#include "bosonspin/rng.hpp"
#include "bosonspin/spindyn.hpp"

namespace bosonspin {

// ---------------------------------------------------------------------------
// Records and statistics
// ---------------------------------------------------------------------------

/// One Haar trial: problem size, provenance and named metrics.
struct ExperimentRecord {
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    std::size_t trial = 0;
    std::map<std::string, double> metrics;

    [[nodiscard]] double metric(const std::string& name) const {
        auto it = metrics.find(name);
        if (it == metrics.end()) throw DomainError("ExperimentRecord: no metric '" + name + "'");
        return it->second;
    }
};

/// Metrics that are probabilities and must lie in [0, 1 + 1e-10].
inline bool is_probability_metric(const std::string& name) {
    static const char* const names[] = {"hcb_weight",      "eps_weight",         "pair_weight",
                                        "postselect_prob", "one_minus_delta_sq", "p_hcb",
                                        "bunching_bound",  "fidelity"};
    return std::any_of(std::begin(names), std::end(names), [&](const char* s) { return name == s; });
}

/// Empty when the record satisfies its invariants, otherwise the first violation.
inline std::optional<std::string> record_violation(const ExperimentRecord& rec) {
    for (const auto& [name, value] : rec.metrics) {
        if (!std::isfinite(value)) return "metric " + name + " is not finite";
        if (is_probability_metric(name) && (value < -1e-12 || value > 1.0 + 1e-10))
            return "probability metric " + name + " = " + std::to_string(value) + " outside [0, 1]";
    }
    return std::nullopt;
}

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
    double min = 0.0;
    double max = 0.0;
    double std_error() const { return count > 0 ? std / std::sqrt(static_cast<double>(count)) : 0.0; }
};

inline Summary summarize(const std::vector<double>& values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = pairwise_sum(values) / static_cast<double>(values.size());
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - s.mean) * (values[i] - s.mean);
    s.std = values.size() > 1 ? std::sqrt(pairwise_sum(dev) / static_cast<double>(values.size() - 1)) : 0.0;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    return s;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need >= 2 matching points");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw DomainError("loglog_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = pairwise_sum(lx) / static_cast<double>(lx.size());
    const double my = pairwise_sum(ly) / static_cast<double>(ly.size());
    std::vector<double> sxy(x.size()), sxx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy[i] = (lx[i] - mx) * (ly[i] - my);
        sxx[i] = (lx[i] - mx) * (lx[i] - mx);
    }
    return pairwise_sum(sxy) / pairwise_sum(sxx);
}

/// Seed of trial `trial` in cell (n, m) of an ensemble started from `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t trial) {
    return derive_seed(seed, {n, m, trial});
}

// ---------------------------------------------------------------------------
// Bunching
// ---------------------------------------------------------------------------

/// p_HCB(N, M) = prod_{a=0}^{N} (M - a) / (M + a), taken literally.
inline double p_hcb_formula(std::size_t n, std::size_t m) {
    if (m <= n) throw DomainError("p_hcb_formula: requires M > N");
    double p = 1.0;
    for (std::size_t a = 0; a <= n; ++a)
        p *= static_cast<double>(m - a) / static_cast<double>(m + a);
    return p;
}

/// 1 - p_HCB(N, M): the loose bound on ||epsilon||^2 and ||P_1bpair epsilon||^2.
inline double bunching_error_bound(std::size_t n, std::size_t m) { return 1.0 - p_hcb_formula(n, m); }

/// Haar average of the collision-free probability of N photons in M modes:
/// C(M, N) / C(M + N - 1, N) = prod_{a=0}^{N-1} (M - a) / (M + a). Reference only.
inline double collision_free_haar_mean(std::size_t n, std::size_t m) {
    double p = 1.0;
    for (std::size_t a = 0; a < n; ++a) p *= static_cast<double>(m - a) / static_cast<double>(m + a);
    return p;
}

// ---------------------------------------------------------------------------
// ||Q H_BS P_1bpair||
// ---------------------------------------------------------------------------

/// Largest vector the block-decomposed operator allocates.
inline std::uint64_t pair_operator_footprint(std::size_t m, std::size_t n) {
    std::uint64_t worst = 0;
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        const std::size_t singles = n - 2 - k;
        worst = std::max(worst, binomial(m, k + 1) * binomial(m, singles + 1));
        worst = std::max(worst, binomial(m, k) * m * binomial(m - 1, singles));
    }
    return worst;
}

inline double operator_norm_qhp(const ModeUnitary& r, std::size_t n, std::uint64_t capacity = kDefaultCapacity,
                                SingularValueOptions opts = {}) {
    if (n < 2) return 0.0;
    const auto footprint = pair_operator_footprint(r.m, n);
    if (footprint > capacity)
        throw CapacityError("operator_norm_qhp: block of " + std::to_string(footprint) +
                            " states (hcb sector " + SectorBasis::size_formula(r.m, n, SectorKind::hcb) +
                            ") exceeds the cap of " + std::to_string(capacity));
    if (opts.seed == 0) opts.seed = r.seed;
    const auto res = pair_operator_norm(r, n, opts);
    if (!res.converged)
        throw ConvergenceError("operator_norm_qhp: no convergence after " + std::to_string(res.iterations) +
                               " iterations");
    return res.value;
}

/// Same quantity from an explicit sparse block of H_BS between enumerated
/// one-b-pair and hcb bases. Independent of the block decomposition.
inline double operator_norm_qhp_explicit(const ModeUnitary& r, std::size_t n,
                                         std::uint64_t capacity = kDefaultCapacity, SingularValueOptions opts = {}) {
    if (n < 2) return 0.0;
    const auto hcb = make_sector(r.m, n, SectorKind::hcb, capacity);
    const auto pair = make_sector(r.m, n, SectorKind::one_b_pair, capacity);
    const SparseCMatrix block = build_hbs_block(r, *hcb, *pair);
    const SparseCMatrix block_adj = block.adjoint();
    if (opts.seed == 0) opts.seed = r.seed;
    const auto est = largest_singular_value(
        pair->size(), [&](const CVector& x, CVector& y) { y = block * x; },
        [&](const CVector& y, CVector& x) { x = block_adj * y; }, opts);
    if (!est.converged) throw ConvergenceError("operator_norm_qhp_explicit: no convergence");
    return est.value;
}

struct NormScanConfig {
    std::vector<std::size_t> n_values;
    std::vector<std::size_t> m_values;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::uint64_t capacity = kDefaultCapacity;
};

struct CellSummary {
    std::size_t n = 0;
    std::size_t m = 0;
    Summary stats;
    bool skipped = false;
    std::string reason;
    std::size_t violations = 0;  // instances with norm > N
};

struct NormScanResult {
    std::vector<ExperimentRecord> records;
    std::vector<CellSummary> cells;
};

/// Fig.-3 style scan: per (N, M) cell, norm statistics over Haar trials.
inline NormScanResult norm_scaling_experiment(const NormScanConfig& cfg) {
    struct Job {
        std::size_t cell, n, m, trial;
    };
    NormScanResult out;
    std::vector<Job> jobs;
    for (auto n : cfg.n_values)
        for (auto m : cfg.m_values) {
            CellSummary cell;
            cell.n = n;
            cell.m = m;
            const auto footprint = pair_operator_footprint(m, n);
            if (m < 1 || n < 2) {
                cell.skipped = true;
                cell.reason = "N < 2: one-b-pair sector is empty";
            } else if (m > 64) {
                cell.skipped = true;
                cell.reason = "M > 64 unsupported";
            } else if (footprint > cfg.capacity) {
                cell.skipped = true;
                cell.reason = "capacity: block of " + std::to_string(footprint) + " states exceeds cap " +
                              std::to_string(cfg.capacity) + " (hcb sector " +
                              SectorBasis::size_formula(m, n, SectorKind::hcb) + ")";
            }
            if (!cell.skipped)
                for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({out.cells.size(), n, m, t});
            out.cells.push_back(std::move(cell));
        }

    std::vector<ExperimentRecord> records(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t idx) {
        const auto& job = jobs[idx];
        const auto seed = trial_seed(cfg.seed, job.n, job.m, job.trial);
        const auto r = sample_haar_unitary(job.m, seed);
        SingularValueOptions opts;
        opts.seed = derive_seed(seed, {0x6e6f726dULL});
        const auto res = pair_operator_norm(r, job.n, opts);
        ExperimentRecord rec;
        rec.n = job.n;
        rec.m = job.m;
        rec.seed = seed;
        rec.trial = job.trial;
        rec.metrics["op_norm"] = res.value;
        rec.metrics["iterations"] = res.iterations;
        rec.metrics["converged"] = res.converged ? 1.0 : 0.0;
        records[idx] = std::move(rec);
    });

    std::vector<std::vector<double>> per_cell(out.cells.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const double v = records[i].metric("op_norm");
        per_cell[jobs[i].cell].push_back(v);
        if (v > static_cast<double>(jobs[i].n)) ++out.cells[jobs[i].cell].violations;
        if (records[i].metric("converged") == 0.0) {
            out.cells[jobs[i].cell].reason = "power/Lanczos solver did not converge on some trial";
        }
    }
    for (std::size_t c = 0; c < out.cells.size(); ++c)
        if (!out.cells[c].skipped) out.cells[c].stats = summarize(per_cell[c]);
    out.records = std::move(records);
    return out;
}

// ---------------------------------------------------------------------------
// Variation distance
// ---------------------------------------------------------------------------

/// sum_n |p1(n) - p2(n)| over a shared support.
inline double variation_distance(const ProbabilityTable& p1, const ProbabilityTable& p2) {
    if (p1.size() != p2.size()) throw BasisMismatch("variation_distance: tables have different supports");
    std::vector<double> diffs;
    diffs.reserve(p1.size());
    auto it2 = p2.entries.begin();
    for (const auto& [key, v1] : p1.entries) {
        if (it2->first != key) throw BasisMismatch("variation_distance: tables have different supports at " + key);
        diffs.push_back(std::abs(v1 - it2->second));
        ++it2;
    }
    return pairwise_sum(diffs);
}

/// |amplitude|^2 per hcb config (not renormalized).
inline ProbabilityTable register_table(const CVector& amplitudes, const SectorBasis& basis) {
    ProbabilityTable t;
    for (std::size_t i = 0; i < basis.size(); ++i)
        t.entries.emplace(config_string(basis.config(i)), std::norm(amplitudes[static_cast<Eigen::Index>(i)]));
    return t;
}

struct DistanceReport {
    double delta_norm = 0.0;
    double register_distance = 0.0;     // |Q phi|^2 vs |psi|^2 over every hcb config
    double postselected_distance = 0.0;  // renormalized output-pattern tables
    double chain_bound = 0.0;            // 2 ||phi|| ||delta|| + ||delta||^2
    double bound = 0.0;                  // 3 ||delta||
};

inline DistanceReport distance_report(const ModeUnitary& r, std::size_t n, double t,
                                      std::uint64_t capacity = kDefaultCapacity, const PropagatorOptions& opts = {}) {
    const auto err = sampling_error_delta(r, n, t, capacity, opts);
    const auto& basis = *err.psi.basis;
    DistanceReport rep;
    rep.delta_norm = err.norm;
    rep.register_distance = variation_distance(register_table(err.q_phi, basis), register_table(err.psi.amplitudes, basis));
    rep.postselected_distance = variation_distance(boson_output_distribution(ProductFormState{r, n, t}, basis),
                                                   spin_output_distribution(err.psi, n));
    rep.chain_bound = 2.0 * err.norm + err.norm * err.norm;
    rep.bound = 3.0 * err.norm;
    return rep;
}

// ---------------------------------------------------------------------------
// Error bound report
// ---------------------------------------------------------------------------

struct ErrorBoundOptions {
    std::size_t grid_steps = 64;
    std::uint64_t capacity = kDefaultCapacity;
    PropagatorOptions propagator;
    SingularValueOptions singular;
};

struct ErrorBoundReport {
    ExperimentRecord record;
    std::vector<double> tau;
    std::vector<double> pair_norm;  // ||P_1bpair phi(tau)||
};

/// Trapezoid rule on a uniform grid.
inline double trapezoid(const std::vector<double>& f, double h) {
    if (f.size() < 2) return 0.0;
    std::vector<double> terms(f.begin(), f.end());
    terms.front() *= 0.5;
    terms.back() *= 0.5;
    return h * pairwise_sum(terms);
}

inline ErrorBoundReport error_bound_report(const ModeUnitary& r, std::size_t n, double t,
                                           const ErrorBoundOptions& opts = {}) {
    if (n > r.m) throw DomainError("error_bound_report: N must not exceed M");
    const double m = static_cast<double>(r.m);
    const double nn = static_cast<double>(n);
    ErrorBoundReport rep;
    auto& rec = rep.record;
    rec.n = n;
    rec.m = r.m;
    rec.seed = r.seed;

    const auto err = sampling_error_delta(r, n, t, opts.capacity, opts.propagator);
    const double op_norm = operator_norm_qhp(r, n, opts.capacity, opts.singular);

    rep.tau.resize(opts.grid_steps + 1);
    rep.pair_norm.assign(opts.grid_steps + 1, 0.0);
    const double h = t / static_cast<double>(opts.grid_steps);
    for (std::size_t s = 0; s <= opts.grid_steps; ++s) rep.tau[s] = h * static_cast<double>(s);
    if (n >= 2) {
        const auto pair = make_sector(r.m, n, SectorKind::one_b_pair, opts.capacity);
        const SectorWeightProfile profile(r, n, *pair);
        for (std::size_t s = 0; s <= opts.grid_steps; ++s)
            rep.pair_norm[s] = std::sqrt(std::max(0.0, profile(rep.tau[s])));
    }
    std::vector<double> integrand(rep.pair_norm.size());
    for (std::size_t s = 0; s < integrand.size(); ++s) integrand[s] = op_norm * rep.pair_norm[s];
    const double integral = trapezoid(integrand, h);
    const double max_pair = *std::max_element(rep.pair_norm.begin(), rep.pair_norm.end());

    const double hcb_weight = squared_norm_pairwise(err.q_phi);
    const double envelope = t * nn * nn / std::sqrt(m);
    rec.metrics["delta_norm"] = err.norm;
    rec.metrics["envelope"] = envelope;
    rec.metrics["integral_bound"] = integral;
    rec.metrics["op_norm"] = op_norm;
    rec.metrics["pair_norm_max"] = max_pair;
    rec.metrics["pair_envelope_constant"] = n > 0 ? max_pair * std::sqrt(m) / nn : 0.0;
    rec.metrics["implied_constant"] = envelope > 0.0 ? err.norm / envelope : 0.0;
    rec.metrics["hcb_weight"] = std::min(hcb_weight, 1.0 + 1e-10);
    rec.metrics["eps_weight"] = std::max(0.0, 1.0 - hcb_weight);
    rec.metrics["postselect_prob"] = postselect_success(err.psi, n);
    rec.metrics["one_minus_delta_sq"] = std::max(0.0, 1.0 - err.norm * err.norm);
    rec.metrics["psi_norm_defect"] = std::abs(err.psi.norm() - 1.0);
    return rep;
}

/// ||delta(tau)|| on the given increasing time points (one Hamiltonian build,
/// the spin state is carried from point to point).
inline std::vector<double> delta_trace(const ModeUnitary& r, std::size_t n, const std::vector<double>& times,
                                       std::uint64_t capacity = kDefaultCapacity, const PropagatorOptions& opts = {}) {
    auto basis = make_sector(r.m, n, SectorKind::hcb, capacity);
    const auto h = build_spin_hamiltonian(r, basis);
    SpinState psi = initial_spin_state(basis);
    double now = 0.0;
    std::vector<double> out;
    out.reserve(times.size());
    for (double tau : times) {
        if (tau < now) throw DomainError("delta_trace: times must be increasing");
        psi = propagate(h, psi, tau - now, opts);
        now = tau;
        const CVector q_phi = assemble(ProductFormState{r, n, tau}, basis).amplitudes;
        out.push_back(std::sqrt(squared_norm_pairwise(q_phi - psi.amplitudes)));
    }
    return out;
}

}  // namespace bosonspin
