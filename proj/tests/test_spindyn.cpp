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

#include "bosonspin/analysis.hpp"
#include "bosonspin/spindyn.hpp"
#include "oracles.hpp"

using namespace bosonspin;

TEST(SpinHamiltonian, TwoLevel) {
    const auto r = ModeUnitary::from_matrix(CMatrix::Identity(1, 1));
    const auto h = build_spin_hamiltonian(r, make_sector(1, 1, SectorKind::hcb));
    const CMatrix d(h.matrix);
    CMatrix expect(2, 2);
    expect << 0.0, 1.0, 1.0, 0.0;
    EXPECT_EQ(d, expect);
}

TEST(SpinHamiltonian, RejectsNonHcb) {
    EXPECT_THROW(build_spin_hamiltonian(sample_haar_unitary(2, 1), make_sector(2, 2, SectorKind::full)), SectorError);
}

TEST(SpinHamiltonian, SingleExcitationSpectrum) {
    for (std::size_t m : {2, 5}) {
        const auto h = build_spin_hamiltonian(sample_haar_unitary(m, 3), make_sector(m, 1, SectorKind::hcb));
        Eigen::SelfAdjointEigenSolver<CMatrix> es{CMatrix(h.matrix)};
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
            EXPECT_NEAR(es.eigenvalues()[k], k < static_cast<Eigen::Index>(m) ? -1.0 : 1.0, 1e-12);
    }
}

TEST(SpinHamiltonian, HermitianAndSparse) {
    const std::size_t m = 6, n = 3;
    const auto h = build_spin_hamiltonian(sample_haar_unitary(m, 8), make_sector(m, n, SectorKind::hcb));
    EXPECT_LE(hermiticity_defect(h.matrix), 1e-12);
    // A row has k(M - N + k) + (N - k)(M - k) hops with k excitations out.
    for (Eigen::Index row = 0; row < h.matrix.outerSize(); ++row) {
        const auto nnz = h.matrix.outerIndexPtr()[row + 1] - h.matrix.outerIndexPtr()[row];
        EXPECT_LE(static_cast<std::size_t>(nnz), n * m);
    }
}

// Q H_BS Q from the Fock-space builder restricted to the hcb basis.
TEST(SpinHamiltonian, EqualsProjectedBosonHamiltonian) {
    const auto r = sample_haar_unitary(4, 21);
    const auto hcb = make_sector(4, 3, SectorKind::hcb);
    const CMatrix spin(build_spin_hamiltonian(r, hcb).matrix);
    const CMatrix boson(build_hbs_block(r, *hcb, *hcb));
    EXPECT_LE((spin - boson).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagate, IdentityAtZero) {
    const auto basis = make_sector(3, 2, SectorKind::hcb);
    const auto h = build_spin_hamiltonian(sample_haar_unitary(3, 2), basis);
    const auto psi0 = initial_spin_state(basis);
    EXPECT_EQ((propagate(h, psi0, 0.0).amplitudes - psi0.amplitudes).norm(), 0.0);
}

TEST(Propagate, RabiTransfer) {
    const auto basis = make_sector(1, 1, SectorKind::hcb);
    const auto h = build_spin_hamiltonian(ModeUnitary::from_matrix(CMatrix::Identity(1, 1)), basis);
    const auto psi = propagate(h, initial_spin_state(basis), kPi / 2);
    EXPECT_NEAR(std::abs(psi.amplitudes[1] - Complex(0.0, -1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(psi.amplitudes[0]), 0.0, 1e-12);
    EXPECT_NEAR(postselect_success(psi, 1), 1.0, 1e-12);
    const auto table = spin_output_distribution(psi, 1);
    EXPECT_EQ(table.size(), 1u);
    EXPECT_NEAR(table.at("1"), 1.0, 1e-12);
}

TEST(Propagate, DenseKrylovPadeAgree) {
    const auto basis = make_sector(5, 3, SectorKind::hcb);
    const auto h = build_spin_hamiltonian(sample_haar_unitary(5, 4), basis);
    PropagatorOptions dense, krylov;
    dense.method = PropagatorMethod::dense;
    krylov.method = PropagatorMethod::krylov;
    const auto psi0 = initial_spin_state(basis);
    const auto a = propagate(h, psi0, 1.3, dense);
    const auto b = propagate(h, psi0, 1.3, krylov);
    EXPECT_NEAR(a.norm(), 1.0, 1e-10);
    EXPECT_NEAR(b.norm(), 1.0, 1e-10);
    EXPECT_LE((a.amplitudes - b.amplitudes).norm(), 1e-9);
    EXPECT_LE((oracle::expm_apply(CMatrix(h.matrix), psi0.amplitudes, 1.3) - a.amplitudes).norm(), 1e-9);
}

TEST(SamplingError, ZeroAtStart) {
    const auto e = sampling_error_delta(sample_haar_unitary(5, 5), 3, 0.0);
    EXPECT_EQ(e.norm, 0.0);
}

TEST(SamplingError, SingleExcitationExact) {
    for (std::size_t m : {3, 8})
        for (double t : {kPi / 4, kPi / 2}) EXPECT_LE(sampling_error_delta(sample_haar_unitary(m, m), 1, t).norm, 1e-10);
}

// Tridiagonal real R: still exact for one excitation.
TEST(SamplingError, TridiagonalSingleExcitation) {
    const double c = std::cos(0.4), s = std::sin(0.4);
    CMatrix g = CMatrix::Identity(4, 4);
    g(1, 1) = c;
    g(1, 2) = -s;
    g(2, 1) = s;
    g(2, 2) = c;
    EXPECT_LE(sampling_error_delta(ModeUnitary::from_matrix(g), 1, 1.2).norm, 1e-10);
}

TEST(SamplingError, NonzeroWithBunching) {
    const auto e = sampling_error_delta(sample_haar_unitary(4, 3), 2, kPi / 2);
    EXPECT_GT(e.norm, 1e-3);
    EXPECT_LE((e.delta - (e.q_phi - e.psi.amplitudes)).norm(), 0.0);
}

TEST(Postselection, ZeroAtStart) {
    const auto basis = make_sector(4, 2, SectorKind::hcb);
    EXPECT_EQ(postselect_success(initial_spin_state(basis), 2), 0.0);
    EXPECT_THROW(spin_output_distribution(initial_spin_state(basis), 2), DegeneratePostselection);
}

TEST(Postselection, SinglePhotonMarginals) {
    const auto r = sample_haar_unitary(3, 13);
    const auto basis = make_sector(3, 1, SectorKind::hcb);
    const auto psi = propagate(build_spin_hamiltonian(r, basis), initial_spin_state(basis), kPi / 2);
    const auto table = spin_output_distribution(psi, 1);
    EXPECT_NEAR(table.total(), 1.0, 1e-12);
    EXPECT_NEAR(table.at("100"), std::norm(r(0, 0)), 1e-10);
    EXPECT_NEAR(table.at("010"), std::norm(r(1, 0)), 1e-10);
    EXPECT_NEAR(table.at("001"), std::norm(r(2, 0)), 1e-10);
}

// For N = 2, M = 12 record both sides; P_ok is bounded by 1 but is not
// forced equal to 1 - ||delta||^2.
TEST(Postselection, AgainstDeltaNorm) {
    const auto r = sample_haar_unitary(12, 40);
    const auto e = sampling_error_delta(r, 2, kPi / 2);
    const double p_ok = postselect_success(e.psi, 2);
    EXPECT_GE(p_ok, 0.0);
    EXPECT_LE(p_ok, 1.0 + 1e-12);
    EXPECT_NEAR(p_ok, 1.0 - e.norm * e.norm, 0.1);
}

TEST(Postselection, DistanceWithinThreeDelta) {
    const auto r = sample_haar_unitary(8, 99);
    const auto rep = distance_report(r, 2, kPi / 2);
    EXPECT_LE(rep.register_distance, rep.chain_bound + 1e-12);
    EXPECT_LE(rep.chain_bound, rep.bound + 1e-12);
    EXPECT_LE(rep.postselected_distance, rep.bound);
}
