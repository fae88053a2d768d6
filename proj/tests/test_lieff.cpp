// Copyright 2026 The ffsim Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ffsim/circuits.hpp"
#include "ffsim/error.hpp"
#include "ffsim/lieff.hpp"

namespace ffsim::lieff {
namespace {

std::vector<double> eigs(const DenseOperator& m) {
    const auto v = numkit::hermitian_eigendecompose(m).values;
    return {v.data(), v.data() + v.size()};
}

QuadraticFermionH reference_h() {
    DenseOperator a(2, 2), b(2, 2);
    a << 0.7, cplx(0.2, -0.3), cplx(0.2, 0.3), -0.4;
    b << 0, cplx(0.25, 0.1), cplx(-0.25, -0.1), 0;
    return QuadraticFermionH::make(a, b);
}

TEST(Nambu, DiagonalAlpha) {
    DenseOperator a = DenseOperator::Zero(3, 3);
    a(0, 0) = 0.5;
    a(1, 1) = -0.2;
    a(2, 2) = 0.9;
    const auto m = nambu_matrix(QuadraticFermionH::make(a, DenseOperator::Zero(3, 3)));
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(m(k, k).real(), a(k, k).real(), 1e-15);
        EXPECT_NEAR(m(k + 3, k + 3).real(), -a(k, k).real(), 1e-15);
    }
    EXPECT_LE(cartan_distance(m, Algebra::SO2N), 1e-15);
}

TEST(Nambu, SingleModeZero) {
    EXPECT_LE(nambu_matrix(QuadraticFermionH::make(DenseOperator::Zero(1, 1), DenseOperator::Zero(1, 1))).norm(), 0.0);
}

TEST(Nambu, SymmetricPartOfBetaStripped) {
    DenseOperator b = DenseOperator::Ones(2, 2);
    const auto h = QuadraticFermionH::make(DenseOperator::Zero(2, 2), b);
    EXPECT_LE((h.beta + h.beta.transpose()).norm(), 1e-15);
}

TEST(Fock, ReferenceSpectrum) {
    // numpy Jordan-Wigner reference, tests/oracles/oracle_values.py
    const std::vector<double> want{-0.5076473218982953, -0.40901699437494743, 0.7090169943749474, 0.8076473218982952};
    const auto h = reference_h();
    const auto direct = eigs(fock_rep_fermionic(h));
    const auto viaNambu = eigs(fock_from_nambu(nambu_matrix(h)));
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(direct[k], want[k], 1e-12);
        EXPECT_NEAR(viaNambu[k], want[k], 1e-12);
    }
}

TEST(Fock, NambuAgreesWithJordanWigner) {
    numkit::Rng rng(3);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto h = random_fermion_h(n, rng);
        EXPECT_LE((fock_from_nambu(nambu_matrix(h)) - fock_rep_fermionic(h)).norm(), 1e-9) << n;
    }
}

TEST(Fock, NumberOperatorAndZero) {
    const auto f = fock_rep_fermionic(QuadraticFermionH::make(DenseOperator::Ones(1, 1), DenseOperator::Zero(1, 1)));
    EXPECT_NEAR(f(0, 0).real(), 0.0, 1e-15);
    EXPECT_NEAR(f(1, 1).real(), 1.0, 1e-15);
    EXPECT_LE(fock_rep_fermionic(QuadraticFermionH::make(DenseOperator::Zero(2, 2), DenseOperator::Zero(2, 2))).norm(),
              0.0);
}

TEST(Fock, SpectrumFromQuasiparticles) {
    // F = sum_k eps_k (n_k - 1/2) + tr(alpha) / 2 with +-eps_k the Nambu spectrum.
    numkit::Rng rng(8);
    const auto h = random_fermion_h(3, rng);
    const auto f = fock_rep_fermionic(h);
    EXPECT_LE(numkit::hermiticity_defect(f), 1e-12);
    const auto nv = eigs(nambu_matrix(h));
    std::vector<double> eps(nv.begin() + 3, nv.end());
    const double shift = 0.5 * h.alpha.trace().real();
    std::vector<double> want;
    for (int mask = 0; mask < 8; ++mask) {
        double e = shift;
        for (int k = 0; k < 3; ++k) e += eps[static_cast<std::size_t>(k)] * (((mask >> k) & 1) - 0.5);
        want.push_back(e);
    }
    std::sort(want.begin(), want.end());
    const auto got = eigs(f);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(got[k], want[k], 1e-10);
}

TEST(ParticleHole, HoldsAndCorruptionBreaksIt) {
    numkit::Rng rng(2);
    const auto h = random_fermion_h(3, rng);
    EXPECT_LE(particle_hole_defect(nambu_matrix(h)), 1e-12);
    set_nambu_corruption(true);
    const double broken = particle_hole_defect(nambu_matrix(h));
    set_nambu_corruption(false);
    EXPECT_GT(broken, 1e-6);
}

TEST(CartanDistance, ReferenceAndScaling) {
    DenseOperator x(2, 2);
    x << 0, 1, 1, 0;
    EXPECT_NEAR(cartan_distance(x, Algebra::SUN), 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(cartan_distance(3.0 * x, Algebra::SUN), 6.0 * std::sqrt(2.0), 1e-13);
    EXPECT_LE(cartan_distance(DenseOperator::Identity(3, 3), Algebra::SUN), 0.0);
}

TEST(Roots, CountsAndBasis) {
    for (std::size_t n = 2; n <= 4; ++n) {
        EXPECT_EQ(positive_roots(n, Algebra::SO2N).size(), closed_form_root_count(n, Algebra::SO2N));
        EXPECT_EQ(positive_roots(n, Algebra::SUN).size(), closed_form_root_count(n, Algebra::SUN));
        EXPECT_EQ(closed_form_root_count(n, Algebra::SO2N), n * (n - 1));
        EXPECT_EQ(closed_form_root_count(n, Algebra::SUN), n * (n - 1) / 2);
        EXPECT_EQ(generator_basis_dimension(n, Algebra::SO2N), n * (2 * n - 1));
        EXPECT_EQ(generator_basis_dimension(n, Algebra::SUN), n * n - 1);
    }
}

TEST(Jacobi, TwoByTwoOneStep) {
    DenseOperator x(2, 2);
    x << 0, 1, 1, 0;
    const auto [rot, m] = jacobi_step(x, Algebra::SUN);
    EXPECT_NEAR(m(0, 0).real(), 1.0, 1e-14);
    EXPECT_NEAR(m(1, 1).real(), -1.0, 1e-14);
    EXPECT_LE(std::abs(m(0, 1)), 1e-14);
    const auto res = jacobi_diagonalize(x, Algebra::SUN, 1e-12);
    EXPECT_EQ(res.trace.r, 1u);
    EXPECT_EQ(res.trace.l, 1u);
}

TEST(Jacobi, PairingEntryAndItsImage) {
    DenseOperator b = DenseOperator::Zero(2, 2);
    b(0, 1) = 0.4;
    b(1, 0) = -0.4;
    const auto m = nambu_matrix(QuadraticFermionH::make(DenseOperator::Zero(2, 2), b));
    const auto [rot, next] = jacobi_step(m, Algebra::SO2N);
    EXPECT_LE(cartan_distance(next, Algebra::SO2N), 1e-12);
    EXPECT_LE(particle_hole_defect(next), 1e-12);
}

TEST(Jacobi, DiagonalInputs) {
    DenseOperator d = DenseOperator::Zero(3, 3);
    d(0, 0) = 1.0;
    d(2, 2) = -2.0;
    try {
        jacobi_step(d, Algebra::SUN);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::AlreadyDiagonal);
    }
    EXPECT_EQ(jacobi_diagonalize(d, Algebra::SUN, 1e-10).trace.r, 0u);
}

TEST(Jacobi, ContractsWithinBudget) {
    numkit::Rng rng(6);
    const auto m = nambu_matrix(random_fermion_h(4, rng));
    const auto res = jacobi_diagonalize(m, Algebra::SO2N, 1e-10);
    const double l = static_cast<double>(res.trace.l);
    double prev = res.trace.d_h_initial;
    for (const auto& s : res.trace.steps) {
        EXPECT_LE(s.d_h * s.d_h, (l - 1.0) / l * prev * prev + 1e-12 * m.norm() * prev);
        EXPECT_LE(s.ph_defect, 1e-12);
        prev = s.d_h;
    }
    EXPECT_LE(res.trace.r, res.trace.r_budget);
}

TEST(Boson, SectorBasics) {
    numkit::Rng rng(1);
    const auto a = random_mode_matrix(2, rng);
    EXPECT_LE((sector_rep_bosonic(a, 1) - a).norm(), 1e-14);
    EXPECT_LE((sector_rep_bosonic(DenseOperator::Identity(3, 3), 2) - 2.0 * DenseOperator::Identity(6, 6)).norm(), 1e-14);
    EXPECT_EQ(boson_sector_basis(3, 3).size(), 10u);
}

TEST(Boson, ReferenceSpectrum) {
    DenseOperator a(2, 2);
    a << 0.3, cplx(0, 0.5), cplx(0, -0.5), -0.2;
    const std::vector<double> want{-1.018033988749895, 0.09999999999999996, 1.218033988749895};
    const auto got = eigs(sector_rep_bosonic(a, 2));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
}

TEST(FermionicFF, DiagonalNeedsOnlyPhases) {
    DenseOperator a = DenseOperator::Zero(3, 3);
    a(0, 0) = 0.3;
    a(1, 1) = -0.8;
    a(2, 2) = 0.5;
    const auto r = fermionic_ff_circuit(QuadraticFermionH::make(a, DenseOperator::Zero(3, 3)), 5.0, 64.0, 1e-6);
    EXPECT_EQ(r.report.r, 0u);
    std::size_t phases = 0;
    for (const auto& g : r.circuit.gates()) phases += g.targets.size() == 1 ? 1 : 0;
    EXPECT_EQ(phases, 3u);
    EXPECT_LE(r.report.error_measured, 1e-10);
}

TEST(FermionicFF, ZeroTimeAndRandom) {
    numkit::Rng rng(4);
    const auto h = random_fermion_h(3, rng);
    const auto zero = fermionic_ff_circuit(h, 0.0, 64.0, 1e-6);
    EXPECT_LE((fock_unitary(zero.circuit) - DenseOperator::Identity(8, 8)).norm(), 1e-10);
    const auto r = fermionic_ff_circuit(h, 64.0, 64.0, 1e-6);
    EXPECT_LE(r.report.error_measured, 1e-6);
    EXPECT_LE((fock_unitary(r.circuit) - numkit::evolve_exact(fock_rep_fermionic(h), 64.0)).norm(), 1e-5);
    EXPECT_THROW(fermionic_ff_circuit(h, 100.0, 64.0, 1e-6), Error);
}

TEST(BosonicFF, IdentityIsGlobalPhase) {
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto r = bosonic_ff_circuit(DenseOperator::Identity(3, 3), 7.0, m, 10.0, 1e-6);
        EXPECT_EQ(r.report.r, 0u);
        const DenseOperator u = sector_unitary(r.circuit, m);
        const cplx phase = std::exp(cplx(0, -7.0 * static_cast<double>(m)));
        EXPECT_LE((u - phase * DenseOperator::Identity(u.rows(), u.cols())).norm(), 1e-10);
    }
}

TEST(BosonicFF, SmallAndLarge) {
    numkit::Rng rng(5);
    const auto a2 = random_mode_matrix(2, rng);
    const auto r2 = bosonic_ff_circuit(a2, 3.0, 1, 10.0, 1e-10);
    EXPECT_LE(r2.report.error_measured, 1e-10);
    EXPECT_LE(r2.report.r, 1u);
    const auto a3 = random_mode_matrix(3, rng);
    const auto r3 = bosonic_ff_circuit(a3, 1000.0, 3, 1000.0, 1e-6);
    EXPECT_LE(r3.report.error_measured, 1e-6);
}

}  // namespace
}  // namespace ffsim::lieff
