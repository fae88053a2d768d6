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

#include <cmath>
#include <numeric>

#include "ffsim/circuits.hpp"
#include "ffsim/error.hpp"
#include "ffsim/qpe.hpp"

namespace ffsim::qpe {
namespace {

TEST(Qft, MatchesDft) {
    circuits::Circuit c({2, 2, 2});
    for (auto& g : qft({0, 1, 2})) c.add(g);
    const auto u = circuits::to_unitary(c);
    for (int x = 0; x < 8; ++x) {
        for (int y = 0; y < 8; ++y) {
            const cplx want = std::exp(cplx(0, 2 * kPi * x * y / 8.0)) / std::sqrt(8.0);
            EXPECT_NEAR(std::abs(u(y, x) - want), 0.0, 1e-12);
        }
    }
    circuits::Circuit inv({2, 2, 2});
    for (auto& g : inverse_qft({0, 1, 2})) inv.add(g);
    EXPECT_LE((circuits::to_unitary(inv) * u - DenseOperator::Identity(8, 8)).norm(), 1e-12);
}

TEST(Distribution, ReferenceValues) {
    // numpy Fejer kernel, tests/oracles/oracle_values.py
    const std::vector<double> ref{0.02159321892578288, 0.05176812953552164, 0.5775210180698611, 0.2593356191884278,
                                  0.0409067810742171,  0.0194402167979583,  0.01448747911761285, 0.01494753729061858};
    const auto p = outcome_distribution(0.3, 3);
    ASSERT_EQ(p.size(), 8u);
    for (std::size_t m = 0; m < 8; ++m) EXPECT_NEAR(p[m], ref[m], 1e-13);
    EXPECT_NEAR(outcome_probability(0.3, 3, 2), ref[2], 1e-13);
}

TEST(Distribution, ExactPhasesAreSharp) {
    EXPECT_NEAR(outcome_distribution(0.0, 5)[0], 1.0, 1e-14);
    EXPECT_NEAR(outcome_distribution(5.0 / 32.0, 5)[5], 1.0, 1e-14);
    const auto p = outcome_distribution(0.123, 6);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
}

TEST(Outcomes, SignedAndCircular) {
    EXPECT_EQ(signed_outcome(0, 3), 0);
    EXPECT_EQ(signed_outcome(4, 3), 4);
    EXPECT_EQ(signed_outcome(5, 3), -3);
    EXPECT_EQ(signed_outcome(7, 3), -1);
    EXPECT_EQ(circular_distance(1, 7, 3), 2u);
    EXPECT_EQ(circular_distance(0, 4, 3), 4u);
}

TEST(Median, SingleDrawIsIdentity) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const auto q = median_distribution(p, 1);
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(q[k], p[k], 1e-15);
}

TEST(Median, ThreeDrawsMatchEnumeration) {
    const std::vector<double> p{0.1, 0.5, 0.15, 0.25};
    std::vector<double> brute(4, 0.0);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                std::array<int, 3> v{a, b, c};
                std::sort(v.begin(), v.end());
                brute[static_cast<std::size_t>(v[1])] += p[a] * p[b] * p[c];
            }
        }
    }
    const auto q = median_distribution(p, 3);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(q[k], brute[k], 1e-14);
    EXPECT_THROW(median_distribution(p, 2), Error);
}

TEST(Median, SignedOrder) {
    // Index k holds the signed value k - N/2 + 1: for N = 4, values -1, 0, 1, 2.
    const std::vector<double> p{0.0, 1.0, 2.0, 3.0};
    const auto s = to_signed_order(p, 2);
    EXPECT_EQ(s, (std::vector<double>{3.0, 0.0, 1.0, 2.0}));
}

}  // namespace
}  // namespace ffsim::qpe
