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
#include <vector>

#include "ffsim/circuits.hpp"
#include "ffsim/numkit.hpp"

namespace ffsim::energymeas {

struct MeasurementParams {
    double eta = 1.0;
    double delta_e = 0.0;
    double xi = 0.0;
    std::size_t gates = 0;
};

/// Black-box time evolution e^{-itH} valid for |t| <= horizon.
struct EvolutionProvider {
    std::function<DenseOperator(double)> evolve;
    double horizon = 0.0;
    double error = 0.0;
    std::size_t gate_cost = 1;
    std::size_t dim = 0;
};

EvolutionProvider exact_provider(const DenseOperator& h, double horizon);

double confidence_bound(int c);

struct MeasurementCircuit {
    circuits::Circuit circuit;  // [l energy qubits][system]
    MeasurementParams params;
    std::size_t l = 0;
};

/// Phase estimation on e^{i(H+I)}; outcome m means E = 2 pi m / 2^l - 1.
MeasurementCircuit ff_to_measurement(const EvolutionProvider& sim, std::size_t l, int c);

double energy_from_outcome(std::uint64_t m, std::size_t l);

/// Exact outcome distribution for an eigenvalue E with an ideal provider.
std::vector<double> energy_distribution(double e, std::size_t l);

/// Pr(|E_hat - E| <= delta_e), distance taken on the phase circle.
double confidence_for_eigenvalue(double e, std::size_t l, double delta_e);

/// Draws outcomes from a distribution (demonstration mode).
std::vector<std::uint64_t> sample_outcomes(const std::vector<double>& p, std::size_t shots, std::uint64_t seed);

/// U_meas, per-bit phases implementing e^{-itE_hat}, U_meas^dagger.
circuits::Circuit measurement_to_ff(const DenseOperator& u_meas, std::size_t l, std::size_t system_dim, double t,
                                    const MeasurementParams& params, double alpha = 1.0);

double backward_error_bound(const MeasurementParams& params, double t);

struct EquivalenceReport {
    std::size_t l = 0;
    int c = 0;
    double t = 0.0;
    double alpha = 1.0;
    MeasurementParams forward;
    double forward_horizon = 0.0;         // 2^(l-1)
    double confidence_measured = 0.0;     // min over eigenstates
    double confidence_dense = 0.0;        // same, from the simulated circuit
    double backward_horizon = 0.0;        // alpha / delta_e
    double backward_error_bound = 0.0;
    double backward_error_measured = 0.0; // max over random superpositions
    std::size_t backward_gates = 0;
};

EquivalenceReport equivalence_report(const DenseOperator& h, std::size_t l, int c, double t, double alpha = 1.0,
                                     std::uint64_t seed = 0, std::size_t num_states = 50);

}  // namespace ffsim::energymeas
