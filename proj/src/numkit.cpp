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

#include "ffsim/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "ffsim/error.hpp"

namespace ffsim {

bool desk_cap_enabled() {
    const char* env = std::getenv("FFSIM_DESK_CAP");
    if (env == nullptr) return true;
    std::string v(env);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    return !(v == "0" || v == "off" || v == "false" || v == "no");
}

namespace numkit {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPsdClamp = 1e-10;
constexpr double kUnitaryTol = 1e-9;
// Entries below this are treated as already eliminated.
constexpr double kGivensZero = 1e-14;

}  // namespace

DenseOperator TwoLevelFactor::embed() const {
    DenseOperator out = DenseOperator::Identity(dim, dim);
    out(i, i) = block(0, 0);
    out(i, j) = block(0, 1);
    out(j, i) = block(1, 0);
    out(j, j) = block(1, 1);
    return out;
}

double spectral_norm(const DenseOperator& a) {
    if (a.size() == 0) return 0.0;
    if (a.rows() == a.cols() && (a - a.adjoint()).norm() == 0.0) {
        Eigen::SelfAdjointEigenSolver<DenseOperator> es(a, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::BDCSVD<DenseOperator> svd(a);
    return svd.singularValues()(0);
}

double hermiticity_defect(const DenseOperator& a) {
    DenseOperator anti = a - a.adjoint();
    if (anti.norm() == 0.0) return 0.0;
    // i(A - A^dagger) is Hermitian; its spectral radius is the defect.
    DenseOperator herm = cplx(0.0, 1.0) * anti;
    herm = 0.5 * (herm + herm.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double unitarity_defect(const DenseOperator& u) {
    if (u.rows() != u.cols()) return INFINITY;
    DenseOperator d = u.adjoint() * u - DenseOperator::Identity(u.rows(), u.cols());
    return spectral_norm(d);
}

Eigensystem hermitian_eigendecompose(const DenseOperator& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "numkit", "eigendecomposition needs a nonempty square matrix");
    }
    if (!a.allFinite()) throw Error(ErrorKind::NotHermitian, "numkit", "matrix has non-finite entries");
    DenseOperator sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(sym);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::NotHermitian, "numkit", "eigensolver failed to converge");
    }
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    const double cheap = (a - a.adjoint()).norm();
    if (cheap > kHermitianTol * scale && hermiticity_defect(a) > kHermitianTol * scale) {
        throw Error(ErrorKind::NotHermitian, "numkit", "||A - A^dagger|| exceeds 1e-10 ||A||");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

DenseOperator evolve_exact(const DenseOperator& h, double t) {
    const Eigensystem es = hermitian_eigendecompose(h);
    Eigen::VectorXcd phases(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        phases(k) = std::polar(1.0, -t * es.values(k));
    }
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

DenseOperator psd_sqrt(const DenseOperator& a) {
    const Eigensystem es = hermitian_eigendecompose(a);
    if (es.values.minCoeff() < -kPsdClamp) {
        throw Error(ErrorKind::NotPSD, "numkit",
                    "minimum eigenvalue " + std::to_string(es.values.minCoeff()) + " below -1e-10");
    }
    RealVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
    DenseOperator out = es.vectors * roots.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

std::vector<TwoLevelFactor> two_level_decompose(const DenseOperator& u, const TwoLevelOptions& options) {
    if (u.rows() != u.cols() || u.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "numkit", "two-level decomposition needs a square matrix");
    }
    const auto dim = static_cast<std::size_t>(u.rows());
    if (unitarity_defect(u) > kUnitaryTol) {
        throw Error(ErrorKind::NotUnitary, "numkit", "||U^dagger U - I|| exceeds 1e-9");
    }

    // Reduce G_k ... G_1 U = D column by column; then U = G_1^dagger ... G_k^dagger D.
    DenseOperator work = u;
    std::vector<TwoLevelFactor> factors;
    std::vector<TwoLevelFactor> phases;

    for (std::size_t c = 0; c + 1 < dim; ++c) {
        bool rotated = false;
        for (std::size_t r = c + 1; r < dim; ++r) {
            const cplx a = work(c, c);
            const cplx b = work(r, c);
            if (std::abs(b) <= kGivensZero && !options.keep_identity_factors) {
                work(r, c) = 0.0;
                continue;
            }
            Eigen::Matrix2cd g;
            const double nrm = std::hypot(std::abs(a), std::abs(b));
            if (nrm == 0.0) {
                g.setIdentity();
            } else {
                g << std::conj(a) / nrm, std::conj(b) / nrm, -b / nrm, a / nrm;
            }
            for (std::size_t col = 0; col < dim; ++col) {
                const cplx x = work(c, col);
                const cplx y = work(r, col);
                work(c, col) = g(0, 0) * x + g(0, 1) * y;
                work(r, col) = g(1, 0) * x + g(1, 1) * y;
            }
            work(r, c) = 0.0;
            factors.push_back({dim, c, r, g.adjoint()});
            rotated = rotated || nrm != 0.0;
        }
        // A rotation leaves the pivot real and positive, so only untouched
        // columns can carry a residual phase.
        const cplx pivot = work(c, c);
        if (options.keep_identity_factors || std::abs(pivot - 1.0) > kGivensZero) {
            const cplx phase = pivot / std::abs(pivot);
            Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity();
            block(0, 0) = phase;
            phases.push_back({dim, c, c + 1, block});
        }
    }
    const cplx last = work(dim - 1, dim - 1);
    if (dim >= 2 && (options.keep_identity_factors || std::abs(last - 1.0) > kGivensZero)) {
        Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity();
        block(1, 1) = last / std::abs(last);
        phases.push_back({dim, dim - 2, dim - 1, block});
    }
    if (dim == 1) {
        Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity();
        if (options.keep_identity_factors || std::abs(last - 1.0) > kGivensZero) {
            // A 1x1 "two-level" factor degenerates to a pure phase on level 0.
            block(0, 0) = last / std::abs(last);
            factors.push_back({1, 0, 0, block});
        }
        return factors;
    }

    // Diagonal factors commute with each other and sit at the right end.
    factors.insert(factors.end(), phases.begin(), phases.end());
    if (options.keep_identity_factors) return factors;

    std::vector<TwoLevelFactor> merged;
    for (const auto& f : factors) {
        if (!merged.empty() && merged.back().i == f.i && merged.back().j == f.j) {
            merged.back().block = merged.back().block * f.block;
        } else {
            merged.push_back(f);
        }
    }
    std::erase_if(merged, [](const TwoLevelFactor& f) {
        return (f.block - Eigen::Matrix2cd::Identity()).norm() <= kGivensZero;
    });
    return merged;
}

DenseOperator reconstruct(const std::vector<TwoLevelFactor>& factors, std::size_t dim) {
    DenseOperator out = DenseOperator::Identity(dim, dim);
    for (const auto& f : factors) {
        if (f.i == f.j) {
            out.col(f.i) *= f.block(0, 0);
            continue;
        }
        // out <- out * F acts on columns i and j.
        const Eigen::VectorXcd ci = out.col(f.i);
        const Eigen::VectorXcd cj = out.col(f.j);
        out.col(f.i) = ci * f.block(0, 0) + cj * f.block(1, 0);
        out.col(f.j) = ci * f.block(0, 1) + cj * f.block(1, 1);
    }
    return out;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DenseOperator random_hermitian(std::size_t dim, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    DenseOperator g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    }
    return 0.5 * (g + g.adjoint());
}

DenseOperator random_unitary(std::size_t dim, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    DenseOperator g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    }
    Eigen::HouseholderQR<DenseOperator> qr(g);
    DenseOperator q = qr.householderQ();
    const DenseOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the distribution is Haar.
    for (Eigen::Index k = 0; k < d; ++k) {
        const cplx rk = r(k, k);
        if (std::abs(rk) > 0.0) q.col(k) *= rk / std::abs(rk);
    }
    return q;
}

StateVector random_state(std::size_t dim, Rng& rng) {
    StateVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(rng.normal(), rng.normal());
    return v / v.norm();
}

}  // namespace numkit
}  // namespace ffsim
