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

// Phase-estimation helpers shared by the simulation and measurement
// pipelines. Registers are big-endian: the first qubit is the most
// significant bit of the outcome m.
namespace ffsim::qpe {

/// Quantum Fourier transform |x> -> sum_y exp(2 pi i x y / N) |y> / sqrt(N),
/// as Hadamards, controlled phases and a final reversal.
std::vector<circuits::Gate> qft(const std::vector<std::size_t>& qubits);
std::vector<circuits::Gate> inverse_qft(const std::vector<std::size_t>& qubits);

/// Pr(m) for an eigenphase exp(2 pi i phi) read with l bits.
double outcome_probability(double phi, std::size_t l, std::uint64_t m);
std::vector<double> outcome_distribution(double phi, std::size_t l);

/// Register value m read as a phase in (-pi, pi]: m in (-N/2, N/2].
std::int64_t signed_outcome(std::uint64_t m, std::size_t l);

/// Circular distance between register values.
std::uint64_t circular_distance(std::uint64_t a, std::uint64_t b, std::size_t l);

/// Distribution of the median of `reps` independent draws, where `p` is
/// already ordered by the value the median is taken over.
std::vector<double> median_distribution(const std::vector<double>& p, std::size_t reps);

/// Reorders an outcome distribution so index k holds signed value k - N/2 + 1.
std::vector<double> to_signed_order(const std::vector<double>& p, std::size_t l);

}  // namespace ffsim::qpe
