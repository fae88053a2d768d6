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
#include "ffsim/schur.hpp"

namespace ffsim::schur {
namespace {

DenseOperator j_squared(std::size_t n) {
    const auto ops = collective_ops(n);
    return ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
}

TEST(CgAngle, ClosedFormPoints) {
    EXPECT_NEAR(cg_angle(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(cg_angle(1, 0), kPi / 4, 1e-15);
    EXPECT_NEAR(cg_angle(1, -2), kPi / 2, 1e-15);
    EXPECT_THROW(cg_angle(1, 1), Error);
}

TEST(UnaryIncrement, MovesTheMarker) {
    for (std::size_t width : {2u, 5u}) {
        std::vector<std::size_t> slots(width);
        for (std::size_t k = 0; k < width; ++k) slots[k] = k;
        circuits::Circuit c(std::vector<std::size_t>(width, 2));
        for (auto& g : unary_increment_gate(slots)) c.add(g);
        std::vector<std::size_t> in(width, 0), out(width, 0);
        in[0] = 1;
        out[1] = 1;
        circuits::SparseState s;
        s.amplitudes[circuits::basis_index(c.register_dims(), in)] = 1.0;
        circuits::apply_sparse(c, s);
        ASSERT_EQ(s.amplitudes.size(), 1u);
        EXPECT_EQ(s.amplitudes.begin()->first, circuits::basis_index(c.register_dims(), out));
        circuits::apply_sparse(c.inverse(), s);
        EXPECT_EQ(s.amplitudes.begin()->first, circuits::basis_index(c.register_dims(), in));
    }
}

TEST(CgUnitary, InverseRestores) {
    const auto c = build_cg_unitary(3, 3);
    circuits::Circuit round = c;
    round.append(c.inverse());
    circuits::SparseState s;
    s.amplitudes[12345] = 1.0;
    circuits::apply_sparse(round, s);
    ASSERT_EQ(s.amplitudes.size(), 1u);
    EXPECT_NEAR(std::abs(s.amplitudes.at(12345) - 1.0), 0.0, 1e-10);
}

TEST(CgUnitary, RotationCount) {
    // Valid (J, q') pairs at the third step of three spins.
    EXPECT_EQ(cg_rotation_count(3, 3), 6u);
    EXPECT_EQ(cg_rotation_count(3, 1), 2u);
}

TEST(SchurTransform, SingleSpin) {
    const auto& s = schur_matrix(1);
    ASSERT_EQ(s.rows(), 2);
    const auto labels = schur_labels(1);
    for (std::uint64_t x = 0; x < 2; ++x) {
        const int twoq = 2 * static_cast<int>(x) - 1;
        const SchurLabel want{1, {1}, twoq};
        const auto row = static_cast<Eigen::Index>(std::find(labels.begin(), labels.end(), want) - labels.begin());
        ASSERT_LT(row, 2);
        EXPECT_NEAR(std::abs(s(row, static_cast<Eigen::Index>(x))), 1.0, 1e-12);
    }
}

TEST(SchurTransform, SingletLandsInJZero) {
    const auto& s = schur_matrix(2);
    StateVector singlet = StateVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const StateVector out = s * singlet;
    const auto labels = schur_labels(2);
    double weight = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k].twoJ == 0) weight += std::norm(out(static_cast<Eigen::Index>(k)));
    }
    EXPECT_NEAR(weight, 1.0, 1e-12);
}

TEST(SchurTransform, UnitaryForSmallN) {
    for (std::size_t n = 1; n <= 5; ++n) EXPECT_LE(numkit::unitarity_defect(schur_matrix(n)), 1e-9) << n;
    EXPECT_LE(numkit::unitarity_defect(circuits::to_unitary(build_schur_transform(2))), 1e-9);
    EXPECT_THROW(build_schur_transform(0), Error);
}

TEST(SchurTransform, LabelsAndMultiplicity) {
    EXPECT_EQ(multiplicity(3, 1), 2u);
    EXPECT_EQ(multiplicity(3, 3), 1u);
    EXPECT_EQ(multiplicity(4, 0), 2u);
    EXPECT_EQ(multiplicity(4, 2), 3u);
    std::size_t total = 0;
    for (int twoJ = 4 % 2; twoJ <= 4; twoJ += 2) total += multiplicity(4, twoJ) * static_cast<std::size_t>(twoJ + 1);
    EXPECT_EQ(total, 16u);
    EXPECT_EQ(schur_labels(4).size(), 16u);
}

TEST(CollectiveOps, Spectra) {
    const auto one = collective_ops(1);
    EXPECT_LE((one.jz - 0.5 * circuits::pauli_z()).norm(), 1e-15);
    // J(J+1): {0, 2} for two spins, {3/4 x4, 15/4 x4} for three.
    const auto e2 = numkit::hermitian_eigendecompose(j_squared(2)).values;
    EXPECT_NEAR(e2(0), 0.0, 1e-12);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(e2(k), 2.0, 1e-12);
    const auto e3 = numkit::hermitian_eigendecompose(j_squared(3)).values;
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(e3(k), 0.75, 1e-12);
    for (int k = 4; k < 8; ++k) EXPECT_NEAR(e3(k), 3.75, 1e-12);
}

TEST(Lmg, ReducesToJz) {
    const auto h = build_lmg(3, 0.0, 0.0);
    EXPECT_LE((h - collective_ops(3).jz).norm(), 1e-14);
}

TEST(Lmg, CommutesWithSwap) {
    const auto h = build_lmg(2, 1.0, 0.0);
    const auto sw = circuits::swap_matrix();
    EXPECT_LE((h * sw - sw * h).norm(), 1e-12);
    EXPECT_LE(permutation_defect(build_lmg(4, 0.5, 0.3), 4), 1e-12);
}

TEST(ExtractBlocks, JSquaredTwoSpins) {
    const auto ex = extract_blocks(j_squared(2), 2);
    ASSERT_EQ(ex.blocks.size(), 2u);
    EXPECT_EQ(ex.blocks[0].twoJ, 0);
    EXPECT_NEAR(std::abs(ex.blocks[0].block(0, 0)), 0.0, 1e-12);
    EXPECT_EQ(ex.blocks[1].twoJ, 2);
    EXPECT_LE((ex.blocks[1].block - 2.0 * DenseOperator::Identity(3, 3)).norm(), 1e-12);
}

TEST(ExtractBlocks, JzThreeSpins) {
    const auto ex = extract_blocks(collective_ops(3).jz, 3);
    ASSERT_EQ(ex.blocks.size(), 2u);
    EXPECT_EQ(ex.blocks[0].twoJ, 1);
    EXPECT_EQ(ex.blocks[0].multiplicity, 2u);
    DenseOperator half = DenseOperator::Zero(2, 2);
    half(0, 0) = 0.5;
    half(1, 1) = -0.5;
    EXPECT_LE((ex.blocks[0].block - half).norm(), 1e-12);
    DenseOperator big = DenseOperator::Zero(4, 4);
    for (int k = 0; k < 4; ++k) big(k, k) = 1.5 - k;
    EXPECT_LE((ex.blocks[1].block - big).norm(), 1e-12);
}

TEST(ExtractBlocks, LmgIsBlockDiagonal) {
    const auto ex = extract_blocks(build_lmg(3, 0.5, 0.3), 3);
    EXPECT_LE(ex.off_block_norm, 1e-10);
    EXPECT_LE(ex.path_spread, 1e-10);
}

TEST(ExtractBlocks, ZeroAndRejects) {
    const auto ex = extract_blocks(DenseOperator::Zero(8, 8), 3);
    for (const auto& b : ex.blocks) EXPECT_LE(b.block.norm(), 0.0);
    DenseOperator bad = DenseOperator::Zero(4, 4);
    bad(0, 1) = bad(1, 0) = 1.0;
    try {
        extract_blocks(bad, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPermutationInvariant);
    }
}

TEST(RandomInvariant, IsInvariant) {
    numkit::Rng rng(3);
    const auto h = random_permutation_invariant(4, rng);
    EXPECT_LE(permutation_defect(h, 4), 1e-12);
    EXPECT_LE(numkit::hermiticity_defect(h), 1e-12);
}

}  // namespace
}  // namespace ffsim::schur
