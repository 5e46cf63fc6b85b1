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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "bosonspin/bosondyn.hpp"
#include "bosonspin/permanent.hpp"
#include "oracles.hpp"

using namespace bosonspin;

TEST(Permanent, Small) {
    CMatrix a(1, 1);
    a << Complex(2.0, -1.0);
    EXPECT_EQ(permanent(a), Complex(2.0, -1.0));
    CMatrix b(2, 2);
    b << 1.0, 2.0, 3.0, 4.0;
    EXPECT_NEAR(std::abs(permanent(b) - Complex(10.0)), 0.0, 1e-14);
    EXPECT_EQ(permanent(CMatrix(0, 0)), Complex(1.0));
}

TEST(Permanent, AllOnesIsFactorial) {
    double f = 1.0;
    for (int n = 1; n <= 10; ++n) {
        f *= n;
        EXPECT_NEAR(permanent(CMatrix::Ones(n, n)).real(), f, 1e-9 * f);
    }
}

TEST(Permanent, MatchesNaive) {
    for (int n = 1; n <= 7; ++n)
        for (std::uint64_t s = 0; s < 5; ++s) {
            const CMatrix a = oracle::random_complex(n, n, 100 * n + s);
            const Complex ref = oracle::naive_permanent(a);
            EXPECT_LE(std::abs(permanent(a) - ref), 1e-10 * std::max(1.0, std::abs(ref)));
        }
}

TEST(Permanent, RepeatedRows) {
    CMatrix a = oracle::random_complex(5, 5, 3);
    a.row(3) = a.row(1);
    a.row(4) = a.row(1);
    const Complex ref = oracle::naive_permanent(a);
    EXPECT_LE(std::abs(permanent(a) - ref), 1e-10 * std::abs(ref));
}

TEST(Permanent, Rejects) {
    EXPECT_THROW(permanent(CMatrix(2, 3)), InvalidDimension);
    EXPECT_THROW(permanent(CMatrix::Zero(21, 21)), InvalidDimension);
}

TEST(Amplitude, BeamSplitter) {
    const auto r = ModeUnitary::from_matrix(CMatrix::Identity(1, 1));
    const double t = 0.37;
    const ProductFormState s{r, 1, t};
    const OccupationConfig in{1, 0}, out{0, 1};
    EXPECT_NEAR(std::abs(amplitude(s, in) - Complex(std::cos(t))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(amplitude(s, out) - Complex(0.0, -std::sin(t))), 0.0, 1e-15);
}

TEST(Amplitude, ZerosAndErrors) {
    const auto r = sample_haar_unitary(3, 4);
    const ProductFormState s{r, 2, 0.5};
    EXPECT_EQ(amplitude(s, OccupationConfig{2, 0, 0, 0, 0, 0}), Complex(0.0));
    EXPECT_EQ(amplitude(s, OccupationConfig{0, 0, 1, 1, 0, 0}), Complex(0.0));  // a_3 beyond N
    EXPECT_THROW(amplitude(s, OccupationConfig{1, 0, 0, 0, 0, 0}), DomainError);
    EXPECT_THROW(amplitude(s, OccupationConfig{1, 1}), BasisMismatch);
}

// The amplitude formula against a polynomial expansion of the product form.
TEST(Amplitude, MatchesBruteForceExpansion) {
    for (auto [n, m] : {std::pair{2, 3}, std::pair{3, 3}, std::pair{3, 4}}) {
        const auto r = sample_haar_unitary(m, 31 + n);
        const auto basis = make_sector(m, n, SectorKind::full);
        const double t = 0.9;
        const CVector ref = oracle::product_form_bruteforce(r, n, t, *basis);
        const CVector got = assemble(ProductFormState{r, std::size_t(n), t}, basis).amplitudes;
        EXPECT_LE((ref - got).norm(), 1e-12);
    }
}

TEST(EvolveFull, MatchesAmplitudes) {
    for (auto [n, m] : {std::pair{1, 4}, std::pair{2, 4}, std::pair{3, 4}, std::pair{3, 5}}) {
        const auto r = sample_haar_unitary(m, 7 * m + n);
        for (double t : {0.0, kPi / 4, kPi / 3, kPi / 2, 2.0}) {
            const auto full = evolve_full(r, n, t);
            EXPECT_NEAR(full.norm(), 1.0, 1e-10);
            const CVector a = assemble(ProductFormState{r, std::size_t(n), t}, full.basis).amplitudes;
            EXPECT_LE((a - full.amplitudes).norm(), 1e-8) << "n=" << n << " m=" << m << " t=" << t;
        }
    }
}

TEST(EvolveFull, DenseAndKrylovAgree) {
    const auto r = sample_haar_unitary(5, 3);
    PropagatorOptions dense, krylov;
    dense.method = PropagatorMethod::dense;
    krylov.method = PropagatorMethod::krylov;
    const auto a = evolve_full(r, 3, 1.1, kDefaultCapacity, dense);
    const auto b = evolve_full(r, 3, 1.1, kDefaultCapacity, krylov);
    EXPECT_LE((a.amplitudes - b.amplitudes).norm(), 1e-9);
    // third route: Pade matrix exponential
    const CMatrix h = CMatrix(build_hbs_block(r, *a.basis, *a.basis));
    CVector e0 = CVector::Zero(h.rows());
    e0[static_cast<Eigen::Index>(a.basis->index_of(a.basis->initial_config()))] = 1.0;
    EXPECT_LE((oracle::expm_apply(h, e0, 1.1) - a.amplitudes).norm(), 1e-9);
}

TEST(EvolveFull, InitialState) {
    const auto s = evolve_full(sample_haar_unitary(3, 1), 2, 0.0);
    EXPECT_EQ(s.amplitudes[static_cast<Eigen::Index>(s.basis->index_of(OccupationConfig{1, 1, 0, 0, 0, 0}))],
              Complex(1.0));
    EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-15);
}

// At t = pi/2 one photon in a_1 ends as -i sum_j R_j1 b_j^dagger under
// H = sum b_j^dagger R_ji a_i + h.c.; R enters unconjugated.
TEST(EvolveFull, SinglePhotonTransferConvention) {
    const auto r = sample_haar_unitary(2, 17);
    const auto s = evolve_full(r, 1, kPi / 2);
    for (std::size_t j = 0; j < 2; ++j) {
        OccupationConfig cfg(4, 0);
        cfg[2 + j] = 1;
        const Complex got = s.amplitudes[static_cast<Eigen::Index>(s.basis->index_of(cfg))];
        EXPECT_NEAR(std::abs(got - Complex(0.0, -1.0) * r(j, 0)), 0.0, 1e-10);
    }
    EXPECT_NEAR(std::abs(s.amplitudes[static_cast<Eigen::Index>(s.basis->index_of(OccupationConfig{1, 0, 0, 0}))]),
                0.0, 1e-10);
    EXPECT_NEAR(std::abs(s.amplitudes[static_cast<Eigen::Index>(s.basis->index_of(OccupationConfig{0, 1, 0, 0}))]),
                0.0, 1e-10);
}

TEST(EvolveFull, SingleParticleSpectrum) {
    for (std::size_t m : {1, 3, 6}) {
        const auto basis = make_sector(m, 1, SectorKind::full);
        const CMatrix h = CMatrix(build_hbs_block(sample_haar_unitary(m, m), *basis, *basis));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
        for (Eigen::Index k = 0; k < h.rows(); ++k)
            EXPECT_NEAR(es.eigenvalues()[k], k < static_cast<Eigen::Index>(m) ? -1.0 : 1.0, 1e-12);
    }
}

TEST(EvolveFull, CapacityError) { EXPECT_THROW(evolve_full(sample_haar_unitary(6, 1), 3, 0.1, 10), CapacityError); }

TEST(SectorWeight, SingleParticleNeverBunches) {
    for (std::size_t m : {1, 4, 9})
        for (double t : {0.2, kPi / 2}) {
            const auto r = sample_haar_unitary(m, 5);
            EXPECT_NEAR(sector_weight({r, 1, t}, *make_sector(m, 1, SectorKind::hcb)), 1.0, 1e-13);
        }
}

TEST(SectorWeight, NoPairAtStart) {
    const auto r = sample_haar_unitary(4, 5);
    EXPECT_EQ(sector_weight({r, 3, 0.0}, *make_sector(4, 3, SectorKind::one_b_pair)), 0.0);
}

TEST(SectorWeight, HcbPlusEpsilonIsOne) {
    const auto r = sample_haar_unitary(4, 9);
    const auto full = make_sector(4, 3, SectorKind::full);
    const auto hcb = make_sector(4, 3, SectorKind::hcb);
    for (double t : {0.3, kPi / 4, kPi / 2}) {
        const CVector phi = assemble({r, 3, t}, full).amplitudes;
        EXPECT_NEAR(phi.squaredNorm(), 1.0, 1e-10);
        const double q = sector_weight({r, 3, t}, *hcb);
        const double eps = phi.squaredNorm() - project(phi, *full, *hcb).squaredNorm();
        EXPECT_NEAR(q + eps, 1.0, 1e-10);
    }
}

TEST(SectorWeight, ProfileMatchesDirect) {
    const auto r = sample_haar_unitary(5, 2);
    for (auto kind : {SectorKind::hcb, SectorKind::one_b_pair}) {
        const auto basis = make_sector(5, 3, kind);
        const SectorWeightProfile profile(r, 3, *basis);
        for (double t : {0.0, 0.4, 1.0, kPi / 2})
            EXPECT_NEAR(profile(t), sector_weight({r, 3, t}, *basis), 1e-13);
    }
}

// Haar mean of the collision-free probability of N photons in M modes is
// C(M,N)/C(M+N-1,N): the averaged output state is maximally mixed on the
// symmetric subspace. For (2, 10) that is 9/11.
TEST(SectorWeight, HaarMeanCollisionFree) {
    const auto hcb = make_sector(10, 2, SectorKind::hcb);
    double s = 0.0;
    const int trials = 400;
    for (int k = 0; k < trials; ++k) s += sector_weight({sample_haar_unitary(10, 500 + k), 2, kPi / 2}, *hcb);
    EXPECT_NEAR(s / trials, 9.0 / 11.0, 0.02);
}

TEST(ExpansionWeights, Values) {
    const auto w0 = expansion_weights(3, 0.0);
    EXPECT_EQ(w0, (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
    const auto w1 = expansion_weights(3, kPi / 2);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(w1[k], 0.0, 1e-30);
    EXPECT_NEAR(w1[3], 1.0, 1e-15);
    const auto w2 = expansion_weights(2, kPi / 4);
    EXPECT_NEAR(w2[0], 0.25, 1e-15);
    EXPECT_NEAR(w2[1], 0.5, 1e-15);
    EXPECT_NEAR(w2[2], 0.25, 1e-15);
    for (double t : {0.1, 0.7, 1.3}) EXPECT_NEAR(pairwise_sum(expansion_weights(5, t)), 1.0, 1e-12);
}

// Expansion weights equal the probability of k photons on the outputs.
TEST(ExpansionWeights, MatchOutputCount) {
    const auto r = sample_haar_unitary(4, 6);
    const double t = 0.8;
    const auto full = evolve_full(r, 3, t);
    std::vector<double> by_k(4, 0.0);
    for (std::size_t i = 0; i < full.basis->size(); ++i) {
        const auto cfg = full.basis->config(i);
        std::size_t k = 0;
        for (std::size_t j = 0; j < 4; ++j) k += cfg[4 + j];
        by_k[k] += std::norm(full.amplitudes[static_cast<Eigen::Index>(i)]);
    }
    const auto w = expansion_weights(3, t);
    for (int k = 0; k <= 3; ++k) EXPECT_NEAR(by_k[k], w[k], 1e-10);
}

TEST(BosonOutput, SinglePhotonMarginals) {
    const auto r = sample_haar_unitary(3, 12);
    const auto table = boson_output_distribution({r, 1, kPi / 2}, *make_sector(3, 1, SectorKind::hcb));
    EXPECT_NEAR(table.total(), 1.0, 1e-12);
    EXPECT_NEAR(table.at("100"), std::norm(r(0, 0)), 1e-12);
    EXPECT_NEAR(table.at("010"), std::norm(r(1, 0)), 1e-12);
    EXPECT_NEAR(table.at("001"), std::norm(r(2, 0)), 1e-12);
    EXPECT_THROW(boson_output_distribution({r, 1, 0.0}, *make_sector(3, 1, SectorKind::hcb)),
                 DegeneratePostselection);
}

TEST(BosonState, Json) {
    const auto s = evolve_full(sample_haar_unitary(1, 1), 1, 0.5);
    const auto j = state_to_json(s);
    EXPECT_EQ(j.at("basis").at("kind"), "full");
    EXPECT_EQ(j.at("amplitudes").size(), 2u);
}
