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
#include <functional>
#include <string>
#include <vector>

#include "ffsim/circuits.hpp"
#include "ffsim/numkit.hpp"

namespace ffsim::lieff {

/// H = sum alpha_ij c_i^dag c_j + beta_ij c_i c_j - beta_ij^* c_i^dag c_j^dag.
struct QuadraticFermionH {
    DenseOperator alpha;  // n x n Hermitian
    DenseOperator beta;   // n x n antisymmetric

    /// Validates alpha and strips the symmetric part of beta.
    static QuadraticFermionH make(const DenseOperator& alpha, const DenseOperator& beta);
    std::size_t n() const { return static_cast<std::size_t>(alpha.rows()); }
};

enum class Algebra { SO2N, SUN };

/// Root (p, q) of the Jacobi state; `partner` is the particle-hole image
/// plane for SO2N and unused for SUN.
struct Root {
    std::size_t p = 0;
    std::size_t q = 0;
    std::size_t partner_p = 0;
    std::size_t partner_q = 0;
};

std::vector<Root> positive_roots(std::size_t n, Algebra algebra);
std::size_t closed_form_root_count(std::size_t n, Algebra algebra);
/// Dimension of the constructed generator basis (asserted against n(2n-1) or n^2-1).
std::size_t generator_basis_dimension(std::size_t n, Algebra algebra);

/// M = [[alpha, -2 beta^*], [2 beta, -alpha^T]] over (c_1..c_n, c_1^dag..c_n^dag).
DenseOperator nambu_matrix(const QuadraticFermionH& h);
/// Test hook: replaces -alpha^T with -alpha in the lower block.
void set_nambu_corruption(bool on);

double particle_hole_defect(const DenseOperator& m);

double cartan_distance(const DenseOperator& m, Algebra algebra);

struct Rotation {
    Root root;
    double theta = 0.0;   // G = exp(-i theta K) on the root plane
    double phi = 0.0;     // phase of the pivot entry
    double pi_x = 0.0;    // generator coefficients: theta K = -(pi_x X + pi_y Y)
    double pi_y = 0.0;
    DenseOperator generator;  // full defining-representation K~ (Hermitian)
};

struct JacobiStep {
    Root pivot;
    double pivot_modulus = 0.0;
    double d_h = 0.0;  // after the step
    double ratio = 0.0;  // d_h^2 after / before
    double ph_defect = 0.0;
};

struct JacobiTrace {
    std::vector<JacobiStep> steps;
    std::size_t r = 0;
    std::size_t l = 0;
    double d_h_initial = 0.0;
    std::size_t r_budget = 0;
};

struct JacobiResult {
    std::vector<Rotation> rotations;
    DenseOperator m_final;
    JacobiTrace trace;
};

/// One Jacobi step: pivot is the root of largest modulus (lowest (row, col) on ties).
std::pair<Rotation, DenseOperator> jacobi_step(const DenseOperator& m, Algebra algebra);

/// Iterates until ||M - diag M||_F <= target_offdiag.
JacobiResult jacobi_diagonalize(const DenseOperator& m, Algebra algebra, double target_offdiag);

/// Iterates until `done(M)` holds. The trace's r_budget is left to the caller.
JacobiResult jacobi_until(const DenseOperator& m, Algebra algebra, const std::function<bool(const DenseOperator&)>& done);

/// ceil(2 ln(p d_h / target) / ln(l/(l-1))) with ||X - X_D||_F = p d_h.
std::size_t iteration_budget(double d_h, double target_offdiag, std::size_t l, Algebra algebra);

/// Jordan-Wigner Fock operator of h built directly from its definition.
DenseOperator fock_rep_fermionic(const QuadraticFermionH& h);
/// Fock operator 1/2 Psi^dag K Psi + 1/2 tr(upper-left block) of a Nambu matrix.
DenseOperator fock_from_nambu(const DenseOperator& k);
/// Jordan-Wigner annihilators c_0..c_{n-1} (occupied = |1>, mode 0 most significant).
std::vector<DenseOperator> jw_annihilators(std::size_t n);

/// m-boson sector basis: occupation tuples, lexicographically descending.
std::vector<std::vector<std::size_t>> boson_sector_basis(std::size_t n, std::size_t m);
DenseOperator sector_rep_bosonic(const DenseOperator& alpha, std::size_t m);

struct FFReport {
    std::size_t n = 0;
    std::size_t m = 0;  // bosons only
    double t = 0.0;
    double horizon = 0.0;
    double epsilon = 0.0;
    std::size_t r = 0;
    std::size_t l = 0;
    std::size_t r_budget = 0;
    double target_dh = 0.0;
    double final_d_h = 0.0;
    double max_ratio = 0.0;
    double max_ph_defect = 0.0;
    double error_measured = 0.0;
    std::size_t unit_cost_count = 0;
    circuits::GateCount counts;
};

struct FFResult {
    circuits::Circuit circuit;
    FFReport report;
};

FFResult fermionic_ff_circuit(const QuadraticFermionH& h, double t, double horizon, double eps,
                              std::uint64_t seed = 0, std::size_t num_states = 20);
FFResult bosonic_ff_circuit(const DenseOperator& alpha, double t, std::size_t m, double horizon, double eps,
                            std::uint64_t seed = 0, std::size_t num_states = 20);

/// Representation of a lieff circuit on Fock space (fermions) or the
/// m-boson sector.
DenseOperator fock_unitary(const circuits::Circuit& c);
DenseOperator sector_unitary(const circuits::Circuit& c, std::size_t m);

QuadraticFermionH random_fermion_h(std::size_t n, numkit::Rng& rng);
DenseOperator random_mode_matrix(std::size_t n, numkit::Rng& rng);

}  // namespace ffsim::lieff
