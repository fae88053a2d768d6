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

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ffsim/circuits.hpp"
#include "ffsim/numkit.hpp"

namespace ffsim::schur {

/// Subsystem indices of the unary J register, unary q register and system
/// qubits, in that order. Half-integers are stored doubled (twoJ = 2J).
struct UnaryRegisterLayout {
    std::size_t n = 0;

    explicit UnaryRegisterLayout(std::size_t n_) : n(n_) {}

    std::size_t j_width() const { return n + 1; }
    std::size_t q_width() const { return 2 * n + 1; }
    std::size_t j_slot(int twoJ) const { return static_cast<std::size_t>(twoJ); }
    std::size_t q_slot(int twoq) const { return static_cast<std::size_t>(twoq + static_cast<int>(n)) + n + 1; }
    std::size_t system(std::size_t i) const { return 3 * n + 2 + i; }  // i is 0-based
    std::size_t num_qubits() const { return 4 * n + 2; }
    std::vector<std::size_t> register_dims() const { return std::vector<std::size_t>(num_qubits(), 2); }
};

/// One angular-momentum block. `path` lists p_1..p_n for a representative copy.
struct SchurBlock {
    int twoJ = 0;
    std::size_t multiplicity = 0;
    DenseOperator block;
};

/// Label of a Schur basis state: total spin, coupling path, magnetic number.
struct SchurLabel {
    int twoJ = 0;
    std::vector<int> path;  // p_i in {0,1}; 1 means J increased at step i
    int twoq = 0;

    friend bool operator==(const SchurLabel&, const SchurLabel&) = default;
};

double cg_angle(int twoJ, int twoq_prime);

/// Cyclic unary shift |a> -> |a + 1/2> on the given slots, as width-1 swaps.
std::vector<circuits::Gate> unary_increment_gate(const std::vector<std::size_t>& slots);

circuits::Circuit build_cg_unitary(std::size_t n, std::size_t i);

/// Full transform, including the preparation of the unary reference state
/// |J=0>|q=0> from the all-zero ancilla.
circuits::Circuit build_schur_transform(std::size_t n);

/// Number of CG rotations emitted at step i.
std::size_t cg_rotation_count(std::size_t n, std::size_t i);

std::size_t multiplicity(std::size_t n, int twoJ);

/// Valid labels in the canonical row order of schur_matrix.
std::vector<SchurLabel> schur_labels(std::size_t n);

/// Restriction of the circuit to system inputs with the ancilla in |0...0>,
/// rows in schur_labels order. Cached per n.
const DenseOperator& schur_matrix(std::size_t n);

/// Register basis index of a label (ancilla unary, system holds the path).
std::uint64_t label_index(std::size_t n, const SchurLabel& label);

struct CollectiveOps {
    DenseOperator jx, jy, jz;
};

CollectiveOps collective_ops(std::size_t n);

DenseOperator build_lmg(std::size_t n, double v, double w);

/// Random real polynomial of degree <= 3 in J_x, J_y, J_z, symmetrized and
/// rescaled to unit spectral norm.
DenseOperator random_permutation_invariant(std::size_t n, numkit::Rng& rng);

/// Largest commutator norm with the adjacent qubit transpositions.
double permutation_defect(const DenseOperator& h, std::size_t n);

struct BlockExtraction {
    std::vector<SchurBlock> blocks;  // ascending J
    double off_block_norm = 0.0;     // Frobenius norm outside the (J, p) blocks
    double path_spread = 0.0;        // max deviation between copies of one J
};

BlockExtraction extract_blocks(const DenseOperator& h, std::size_t n);

}  // namespace ffsim::schur
