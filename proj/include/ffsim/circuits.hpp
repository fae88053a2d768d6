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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffsim/numkit.hpp"

namespace ffsim::circuits {

enum class CostModel { QubitTwoLocal, FermionicWeight2, BosonicWeight2 };

std::string_view to_string(CostModel model);
CostModel cost_model_from_string(std::string_view name);

struct Control {
    std::size_t subsystem = 0;
    std::size_t value = 1;

    friend bool operator==(const Control&, const Control&) = default;
};

/// A gate is either e^{-i angle * generator} on its targets' joint space or an
/// explicit unitary block. For the fermionic and bosonic models the generator
/// is given in the single-mode (defining) representation; lieff maps it onto
/// Fock space.
struct Gate {
    std::string label;
    std::vector<std::size_t> targets;
    std::vector<Control> controls;
    double angle = 0.0;
    DenseOperator generator;
    std::optional<DenseOperator> matrix;
    CostModel model = CostModel::QubitTwoLocal;
    // Nonzero overrides the angle-based accounting (opaque subroutine calls).
    std::size_t cost_units = 0;

    bool is_explicit() const { return matrix.has_value(); }
    DenseOperator local_unitary() const;
    Gate inverse() const;

    static Gate rotation(std::string label, std::vector<std::size_t> targets, DenseOperator generator,
                         double angle, CostModel model = CostModel::QubitTwoLocal);
    static Gate unitary(std::string label, std::vector<std::size_t> targets, DenseOperator matrix,
                        CostModel model = CostModel::QubitTwoLocal);
};

/// Acts as g when `control` holds its value and as the identity otherwise.
Gate controlled(const Gate& g, Control control);

struct GateCount {
    std::size_t raw_gates = 0;
    std::size_t elementary_count = 0;
    std::map<std::string, std::size_t> per_label;

    GateCount& operator+=(const GateCount& other);
};

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(std::vector<std::size_t> register_dims, CostModel model = CostModel::QubitTwoLocal);

    void add(Gate gate);
    void append(const Circuit& other);
    Circuit inverse() const;

    const std::vector<std::size_t>& register_dims() const { return dims_; }
    const std::vector<Gate>& gates() const { return gates_; }
    CostModel cost_model() const { return model_; }
    std::size_t num_subsystems() const { return dims_.size(); }
    /// Product of subsystem dimensions, saturating at UINT64_MAX.
    std::uint64_t total_dim() const;
    std::size_t size() const { return gates_.size(); }

private:
    void validate(const Gate& gate) const;

    std::vector<std::size_t> dims_;
    std::vector<Gate> gates_;
    CostModel model_ = CostModel::QubitTwoLocal;
};

/// Amplitudes keyed by mixed-radix basis index (subsystem 0 most significant).
struct SparseState {
    std::map<std::uint64_t, cplx> amplitudes;

    double norm() const;
    cplx inner(const SparseState& other) const;  // <this|other>
};

DenseOperator to_unitary(const Circuit& c);
StateVector apply(const Circuit& c, const StateVector& s);
void apply_sparse(const Circuit& c, SparseState& s);
GateCount count(const Circuit& c);

/// Basis index of the digit string (one digit per subsystem).
std::uint64_t basis_index(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& digits);
std::vector<std::size_t> basis_digits(const std::vector<std::size_t>& dims, std::uint64_t index);

/// Line-oriented JSON: a header line, then one gate per line.
std::string to_jsonl(const Circuit& c);
Circuit from_jsonl(std::string_view text);

/// Standard single-qubit matrices.
DenseOperator pauli_x();
DenseOperator pauli_y();
DenseOperator pauli_z();
DenseOperator hadamard();
DenseOperator swap_matrix();
DenseOperator projector_one();  // |1><1|

}  // namespace ffsim::circuits
