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
#include <string>
#include <vector>

#include "ffsim/circuits.hpp"
#include "ffsim/numkit.hpp"

namespace ffsim::blockff {

enum class Encoding { Unary, Binary };

struct Block {
    std::string label;
    DenseOperator h;
};

/// Blocks H_mu evolved for time t, selected by a mu register.
struct BlockEvolutionSpec {
    std::vector<Block> blocks;
    double t = 0.0;
    Encoding encoding = Encoding::Unary;
};

/// One instruction of the classical description of U_mu(t). A two-level step
/// acts with `block` on local indices (i, j); a phase step multiplies index i
/// by exp(i * phase).
struct ProgramStep {
    enum class Kind { TwoLevel, Phase } kind = Kind::TwoLevel;
    std::size_t i = 0;
    std::size_t j = 0;
    Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity();
    double phase = 0.0;
};

/// Steps in application order. The step pattern depends only on the sparsity
/// of h, never on t.
std::vector<ProgramStep> block_program(const DenseOperator& h, double t);

/// Deterministic JSON-lines rendering of block_program for one labelled block.
std::string classical_block_program(const BlockEvolutionSpec& spec, const std::string& label);

/// Where a block lives: its controls, and the unary data slot of each local index.
struct BlockPlacement {
    std::vector<circuits::Control> controls;
    std::vector<std::size_t> data_slots;
};

void append_block_evolution(circuits::Circuit& c, const DenseOperator& h, double t, const BlockPlacement& where,
                            const std::string& label);

/// Register: mu register (one qubit per block if unary, ceil(log2 B) if binary)
/// followed by a unary data register as wide as the largest block.
circuits::Circuit build_block_unitary(const BlockEvolutionSpec& spec);

struct PermFFReport {
    std::size_t n = 0;
    double t = 0.0;
    double epsilon = 0.0;
    circuits::GateCount counts;
    std::size_t ancilla_width = 0;
    std::size_t modeled_ancillas = 0;
    double max_error_measured = 0.0;
    double max_block_error = 0.0;
    std::size_t states_checked = 0;
};

struct PermFFResult {
    circuits::Circuit circuit;
    PermFFReport report;
};

/// V(t) = U_Sch^dagger U'(t) U_Sch, checked on random system states with the
/// ancilla in |0...0>.
PermFFResult fast_forward_permutation_invariant(const DenseOperator& h, std::size_t n, double t, double eps,
                                                std::uint64_t seed = 0, std::size_t num_states = 20);

}  // namespace ffsim::blockff
