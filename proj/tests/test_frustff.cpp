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
#include "ffsim/frustff.hpp"

namespace ffsim::frustff {
namespace {

std::vector<double> sorted_eigs(const DenseOperator& m) {
    const auto v = numkit::hermitian_eigendecompose(m).values;
    return {v.data(), v.data() + v.size()};
}

// A low-energy state: random combination of eigenvectors with energy <= delta.
StateVector low_energy_state(const FFHamiltonian& h, double delta, std::uint64_t seed) {
    const auto es = numkit::hermitian_eigendecompose(h.matrix());
    numkit::Rng rng(seed);
    StateVector psi = StateVector::Zero(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        if (es.values(k) <= delta) psi += cplx(rng.normal(), rng.normal()) * es.vectors.col(k);
    }
    return psi.normalized();
}

TEST(Amplify, SingleTerm) {
    FFHamiltonian h{1, 2, {{{0}, circuits::projector_one()}}};
    const auto amp = amplify(h);
    EXPECT_LE((amp.matrix - numkit::kron(circuits::projector_one(), circuits::pauli_x())).norm(), 1e-14);
    const auto e = sorted_eigs(amp.matrix);
    const std::vector<double> want{-1.0, 0.0, 0.0, 1.0};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(e[k], want[k], 1e-12);
}

TEST(Amplify, ZeroTerms) {
    FFHamiltonian h{2, 2, {{{0, 1}, DenseOperator::Zero(4, 4)}, {{1}, DenseOperator::Zero(2, 2)}}};
    EXPECT_LE(amplify(h).matrix.norm(), 0.0);
}

TEST(Amplify, ReferenceSpectrum) {
    // |11><11| plus the singlet projector; numpy reference in tests/oracles.
    DenseOperator p11 = DenseOperator::Zero(4, 4);
    p11(3, 3) = 1.0;
    StateVector singlet = StateVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    FFHamiltonian h{2, 2, {{{0, 1}, p11}, {{0, 1}, singlet * singlet.adjoint()}}};
    const auto e = sorted_eigs(amplify(h).matrix);
    ASSERT_EQ(e.size(), 12u);
    const std::vector<double> want{-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1};
    for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(e[k], want[k], 1e-12);
}

TEST(Amplify, SpectrumIsSquareRoot) {
    const auto h = make_random_ff(3, 2, 3, 2, 11);
    const auto amp = amplify(h);
    std::vector<double> want;
    for (double lam : sorted_eigs(h.matrix())) {
        if (lam > 1e-8) {
            want.push_back(std::sqrt(lam));
            want.push_back(-std::sqrt(lam));
        }
    }
    std::sort(want.begin(), want.end());
    std::vector<double> got;
    for (double e : sorted_eigs(amp.matrix)) {
        if (std::abs(e) > 1e-6) got.push_back(e);
    }
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-8);
}

TEST(Amplify, Rejects) {
    FFHamiltonian frustrated{1, 2, {{{0}, DenseOperator::Identity(2, 2)}}};
    EXPECT_THROW(amplify(frustrated), Error);
    FFHamiltonian big{1, 2, {{{0}, 2.0 * circuits::projector_one()}}};
    try {
        amplify(big);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
    }
}

TEST(QeeAccuracy, ReferenceAndCrossing) {
    EXPECT_NEAR(qee_accuracy(0.1, 100.0, 0.01), 0.00125, 1e-15);
    const double eps = 0.2, t = 30.0;
    const double cross = eps / (16.0 * t);
    EXPECT_NEAR(qee_accuracy(eps, t, cross), std::sqrt(eps / (4.0 * t)), 1e-14);
    EXPECT_THROW(qee_accuracy(0.0, 1.0, 1.0), Error);
}

TEST(Qpe, IdentityGivesZero) {
    const auto q = build_qpe(DenseOperator::Identity(2, 2), 3, 1);
    StateVector in = StateVector::Zero(16);
    in(1) = 1.0;
    const StateVector out = circuits::apply(q.circuit, in);
    EXPECT_NEAR(std::norm(out(1)), 1.0, 1e-12);
    EXPECT_THROW(build_qpe(DenseOperator::Identity(2, 2), 3, 2), Error);
}

TEST(Pipeline, SpectralMatchesCircuit) {
    const auto h = scaled(make_random_ff(1, 2, 1, 1, 3), 0.7);
    numkit::Rng rng(5);
    const StateVector psi = numkit::random_state(2, rng);
    const double t = 2.3;
    for (std::size_t reps : {1u, 3u}) {
        for (std::size_t l : {2u, 3u}) {
            const auto c = build_pipeline_circuit(h, t, l, reps);
            const std::size_t d = 4;  // system x (L + 1)
            StateVector in = StateVector::Zero(static_cast<Eigen::Index>((std::size_t{1} << (l * reps)) * d));
            for (int x = 0; x < 2; ++x) in(2 * x) = psi(x);
            const StateVector out = circuits::apply(c, in);
            const auto sp = spectral_pipeline(h, t, psi, l, reps);
            EXPECT_LE((out.head(4) - sp.good).norm(), 1e-12);
            EXPECT_NEAR(1.0 - out.head(4).squaredNorm(), sp.garbage, 1e-12);
        }
    }
}

TEST(Simulate, ZeroTime) {
    const auto h = scaled(make_random_ff(2, 2, 2, 2, 1), 0.05);
    const auto psi = low_energy_state(h, 0.05, 2);
    const auto r = ff_low_energy_simulate(h, 0.0, 0.05, 0.3, psi);
    EXPECT_LE(r.report.error_measured, 1e-9);
}

TEST(Simulate, GroundStateIsFixed) {
    const auto h = make_random_ff(2, 2, 2, 2, 4);
    const auto es = numkit::hermitian_eigendecompose(h.matrix());
    const StateVector g = es.vectors.col(0);
    const auto r = ff_low_energy_simulate(h, 50.0, 0.01, 0.3, g);
    EXPECT_LE(r.report.error_measured, 0.3);
    EXPECT_LE((r.output - g).norm(), 0.3);
}

TEST(Simulate, RandomInstance) {
    const auto h0 = make_random_ff(2, 2, 2, 2, 9);
    double lambda1 = 0.0;
    for (double e : sorted_eigs(h0.matrix())) {
        if (e > 1e-8) {
            lambda1 = e;
            break;
        }
    }
    const auto h = scaled(h0, std::min(1.0, 0.05 / lambda1));
    const auto psi = low_energy_state(h, 0.05, 3);
    const auto r = ff_low_energy_simulate(h, 20.0, 0.05, 0.3, psi);
    EXPECT_LE(r.report.error_measured, 0.3);
    EXPECT_EQ(r.report.reps, confidence_reps(0.3));
}

TEST(Simulate, RejectsHighEnergy) {
    const auto h = make_random_ff(2, 2, 2, 2, 4);
    const auto es = numkit::hermitian_eigendecompose(h.matrix());
    const StateVector top = es.vectors.col(es.vectors.cols() - 1);
    try {
        ff_low_energy_simulate(h, 1.0, 1e-3, 0.3, top);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::StateNotLowEnergy);
    }
}

TEST(RandomFF, Properties) {
    const auto h = make_random_ff(2, 2, 1, 2, 7);
    ASSERT_EQ(h.num_terms(), 1u);
    EXPECT_NEAR(sorted_eigs(h.matrix())[0], 0.0, 1e-12);
    const auto p = h.terms[0].h;
    EXPECT_LE((p * p - p).norm(), 1e-10);
    EXPECT_LE(make_random_ff(2, 2, 0, 2, 7).matrix().norm(), 0.0);
    const auto again = make_random_ff(2, 2, 1, 2, 7);
    EXPECT_EQ(again.terms[0].subset, h.terms[0].subset);
    EXPECT_LE((again.terms[0].h - p).norm(), 0.0);
}

}  // namespace
}  // namespace ffsim::frustff
