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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ffsim {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// True unless FFSIM_DESK_CAP is set to 0/off/false in the environment.
bool desk_cap_enabled();

namespace numkit {

struct Eigensystem {
    RealVector values;     // ascending
    DenseOperator vectors; // columns are eigenvectors
};

/// One factor of a two-level decomposition: the 2x2 `block` acts on basis
/// levels (i, j), i < j, and the identity elsewhere.
struct TwoLevelFactor {
    std::size_t dim = 0;
    std::size_t i = 0;
    std::size_t j = 1;
    Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity();

    DenseOperator embed() const;
};

struct TwoLevelOptions {
    // Emit every Givens slot and every diagonal fixup even when it is the
    // identity, so the factor pattern depends only on the dimension.
    bool keep_identity_factors = false;
};

double spectral_norm(const DenseOperator& a);
double hermiticity_defect(const DenseOperator& a);
double unitarity_defect(const DenseOperator& u);

Eigensystem hermitian_eigendecompose(const DenseOperator& a);

/// e^{-itH}.
DenseOperator evolve_exact(const DenseOperator& h, double t);

DenseOperator psd_sqrt(const DenseOperator& a);

/// Factors F_0..F_{k-1} with U = F_0 * F_1 * ... * F_{k-1}.
std::vector<TwoLevelFactor> two_level_decompose(const DenseOperator& u,
                                                const TwoLevelOptions& options = {});

DenseOperator reconstruct(const std::vector<TwoLevelFactor>& factors, std::size_t dim);

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

/// Seeded generator shared by fixtures and randomized checks.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

DenseOperator random_hermitian(std::size_t dim, Rng& rng);
DenseOperator random_unitary(std::size_t dim, Rng& rng);
StateVector random_state(std::size_t dim, Rng& rng);

}  // namespace numkit
}  // namespace ffsim
