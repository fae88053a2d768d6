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

namespace ffsim::frustff {

struct LocalTerm {
    std::vector<std::size_t> subset;  // sorted spin indices
    DenseOperator h;                  // on the subset's joint space, 0 <= h <= I
};

struct FFHamiltonian {
    std::size_t n = 0;
    std::size_t d = 2;
    std::vector<LocalTerm> terms;

    std::size_t num_terms() const { return terms.size(); }
    std::size_t system_dim() const;
    /// Embeds one term on the full d^n space (spin 0 most significant).
    DenseOperator embed(const DenseOperator& local, const std::vector<std::size_t>& subset) const;
    DenseOperator matrix() const;
};

/// H' on system (x) ancilla, ancilla basis {|0>, |X_1>, ..., |X_L>}.
struct AmplifiedHamiltonian {
    DenseOperator matrix;
    std::size_t system_dim = 0;
    std::size_t L = 0;
};

AmplifiedHamiltonian amplify(const FFHamiltonian& h);

double qee_accuracy(double eps, double t, double delta_max);

/// Random product ground state |g>; each term projects onto a random subspace
/// orthogonal to |g> restricted to its subset. Each subset has k distinct
/// spins; at most `degree` terms touch any one spin.
FFHamiltonian make_random_ff(std::size_t n, std::size_t d, std::size_t L, std::size_t k, std::uint64_t seed,
                             std::size_t degree = 4);

/// Multiplies every term by s in (0, 1]; keeps 0 <= h_X <= I.
FFHamiltonian scaled(const FFHamiltonian& h, double s);

struct QpeCircuit {
    circuits::Circuit circuit;
    std::size_t l = 0;
    std::size_t reps = 0;
    /// Qubit indices of repetition r are [r*l, (r+1)*l); the target is the last subsystem.
    std::string postprocess = "median";
};

QpeCircuit build_qpe(const DenseOperator& w, std::size_t l, std::size_t reps);

std::size_t confidence_reps(double eps);

struct SimulateOptions {
    double horizon = 0.0;  // T; zero means use t
    int margin = 1;        // extra QPE bits beyond ceil(log2(sqrt(L)/delta_n))
};

struct FFReport {
    std::size_t n = 0;
    std::size_t L = 0;
    double t = 0.0;
    double horizon = 0.0;
    double delta_max = 0.0;
    double epsilon = 0.0;
    double delta_n = 0.0;
    double delta_lemma = 0.0;
    std::size_t l_bits = 0;
    std::size_t reps = 0;
    std::size_t w_uses = 0;
    double symbolic_cost = 0.0;  // log(1/eps) L^2 / delta_n
    double error_measured = 0.0;
    double garbage_weight = 0.0;
};

struct FFResult {
    StateVector output;  // system part of the branch with all registers returned to |0>
    FFReport report;
};

FFResult ff_low_energy_simulate(const FFHamiltonian& h, double t, double delta_max, double eps, const StateVector& psi,
                                const SimulateOptions& options = {});

/// Exact outcome of the coherent pipeline on psi (x) |0>_anc, evaluated in the
/// eigenbasis of H'. `good` is the system (x) ancilla branch with every phase
/// register back in |0>; `garbage` is the weight left elsewhere.
struct PipelineOutcome {
    StateVector good;
    double garbage = 0.0;
};

PipelineOutcome spectral_pipeline(const FFHamiltonian& h, double t, const StateVector& psi, std::size_t l,
                                  std::size_t reps);

/// Full gate-level pipeline (QPE, coherent median phase, inverse QPE) on
/// registers [reps*l qubits][system (x) ancilla]. Only for tiny instances.
circuits::Circuit build_pipeline_circuit(const FFHamiltonian& h, double t, std::size_t l, std::size_t reps);

/// Phase-register-to-eigenvalue rule: (2 pi m_signed sqrt(L) / 2^l)^2.
double eigenvalue_estimate(std::uint64_t m, std::size_t l, std::size_t L);

}  // namespace ffsim::frustff
