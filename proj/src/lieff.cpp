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

#include "ffsim/lieff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "ffsim/error.hpp"

namespace ffsim::lieff {

using circuits::Circuit;
using circuits::CostModel;
using circuits::Gate;

namespace {

constexpr double kStructTol = 1e-12;
constexpr double kEntryBound = 1.0 + 1e-12;
constexpr std::size_t kMaxFockModes = 5;
constexpr std::size_t kMaxSectorDim = 2048;
// Absolute slack on the contraction test, relative to ||M||_F * d_h, absorbs
// rounding once d_h reaches the 1e-10 regime.
constexpr double kContractionSlack = 1e-12;

std::atomic<bool> g_corrupt_nambu{false};

std::size_t modes_of(const DenseOperator& m, Algebra algebra) {
    const auto rows = static_cast<std::size_t>(m.rows());
    if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "lieff", "matrix must be square");
    if (algebra == Algebra::SO2N) {
        if (rows % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "lieff", "Nambu matrix must be 2n x 2n");
        return rows / 2;
    }
    return rows;
}

double off_frobenius(const DenseOperator& m) {
    double s = 0.0;
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            if (a != b) s += std::norm(m(a, b));
        }
    }
    return std::sqrt(s);
}

DenseOperator off_part(const DenseOperator& m) {
    DenseOperator o = m;
    o.diagonal().setZero();
    return o;
}

double trace_norm(const DenseOperator& hermitian) {
    const DenseOperator sym = 0.5 * (hermitian + hermitian.adjoint());
    return numkit::hermitian_eigendecompose(sym).values.cwiseAbs().sum();
}

// Frobenius off-diagonal norm per unit d_h: off^2 = 4 S (Nambu), 2 S (mode),
// d_h^2 = 8 S.
double frobenius_per_dh(Algebra algebra) { return algebra == Algebra::SO2N ? std::sqrt(4.0 / 8.0) : std::sqrt(2.0 / 8.0); }

DenseOperator tau(std::size_t n) {
    const auto nn = static_cast<Eigen::Index>(n);
    DenseOperator t = DenseOperator::Zero(2 * nn, 2 * nn);
    t.block(0, nn, nn, nn).setIdentity();
    t.block(nn, 0, nn, nn).setIdentity();
    return t;
}

std::vector<std::size_t> root_modes(const Root& r, std::size_t n, Algebra algebra) {
    if (algebra == Algebra::SUN) return {r.p, r.q};
    const std::size_t a = r.p % n;
    const std::size_t b = r.q % n;
    return {std::min(a, b), std::max(a, b)};
}

// Restriction of a full generator to the listed modes.
DenseOperator local_generator(const DenseOperator& full, const std::vector<std::size_t>& modes, std::size_t n,
                              Algebra algebra) {
    std::vector<Eigen::Index> idx;
    for (auto m : modes) idx.push_back(static_cast<Eigen::Index>(m));
    if (algebra == Algebra::SO2N) {
        for (auto m : modes) idx.push_back(static_cast<Eigen::Index>(n + m));
    }
    const auto k = static_cast<Eigen::Index>(idx.size());
    DenseOperator out(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) out(a, b) = full(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
    return out;
}

DenseOperator embed_generator(const DenseOperator& local, const std::vector<std::size_t>& modes, std::size_t n,
                              Algebra algebra) {
    std::vector<Eigen::Index> idx;
    for (auto m : modes) idx.push_back(static_cast<Eigen::Index>(m));
    if (algebra == Algebra::SO2N) {
        for (auto m : modes) idx.push_back(static_cast<Eigen::Index>(n + m));
    }
    const auto full = static_cast<Eigen::Index>(algebra == Algebra::SO2N ? 2 * n : n);
    if (local.rows() != static_cast<Eigen::Index>(idx.size())) {
        throw Error(ErrorKind::InvalidGate, "lieff", "generator does not match its target modes");
    }
    DenseOperator out = DenseOperator::Zero(full, full);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = 0; b < idx.size(); ++b) {
            out(idx[a], idx[b]) = local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
    }
    return out;
}

void check_fock_size(std::size_t n) {
    if (n > kMaxFockModes && desk_cap_enabled()) {
        throw Error(ErrorKind::DimensionOverflow, "lieff", "Fock representation limited to 5 modes");
    }
}

std::uint64_t binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::size_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

}  // namespace

QuadraticFermionH QuadraticFermionH::make(const DenseOperator& alpha, const DenseOperator& beta) {
    const auto n = alpha.rows();
    if (alpha.cols() != n || beta.rows() != n || beta.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "lieff", "alpha and beta must both be n x n");
    }
    if ((alpha - alpha.adjoint()).cwiseAbs().maxCoeff() > kStructTol) {
        throw Error(ErrorKind::NotHermitian, "lieff", "alpha must be Hermitian");
    }
    QuadraticFermionH h;
    h.alpha = 0.5 * (alpha + alpha.adjoint());
    h.beta = 0.5 * (beta - beta.transpose());
    if (n > 0 && (h.alpha.cwiseAbs().maxCoeff() > kEntryBound || h.beta.cwiseAbs().maxCoeff() > kEntryBound)) {
        throw Error(ErrorKind::OutOfRange, "lieff", "entries of alpha and beta must have modulus <= 1");
    }
    return h;
}

std::vector<Root> positive_roots(std::size_t n, Algebra algebra) {
    std::vector<Root> roots;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (algebra == Algebra::SUN) {
                roots.push_back({i, j, 0, 0});
            } else {
                roots.push_back({i, j, n + i, n + j});
                roots.push_back({i, n + j, n + i, j});
            }
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        return a.p != b.p ? a.p < b.p : a.q < b.q;
    });
    return roots;
}

std::size_t closed_form_root_count(std::size_t n, Algebra algebra) {
    return algebra == Algebra::SO2N ? n * (n - (n > 0 ? 1 : 0)) : n * (n - (n > 0 ? 1 : 0)) / 2;
}

std::size_t generator_basis_dimension(std::size_t n, Algebra algebra) {
    const std::size_t full = algebra == Algebra::SO2N ? 2 * n : n;
    const auto f = static_cast<Eigen::Index>(full);
    std::vector<DenseOperator> basis;
    if (algebra == Algebra::SO2N) {
        for (std::size_t i = 0; i < n; ++i) {
            DenseOperator h = DenseOperator::Zero(f, f);
            h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
            h(static_cast<Eigen::Index>(n + i), static_cast<Eigen::Index>(n + i)) = -1.0;
            basis.push_back(h);
        }
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            DenseOperator h = DenseOperator::Zero(f, f);
            h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
            h(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i + 1)) = -1.0;
            basis.push_back(h);
        }
    }
    const DenseOperator t = algebra == Algebra::SO2N ? tau(n) : DenseOperator();
    for (const auto& r : positive_roots(n, algebra)) {
        for (const cplx v : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
            DenseOperator k = DenseOperator::Zero(f, f);
            k(static_cast<Eigen::Index>(r.p), static_cast<Eigen::Index>(r.q)) = v;
            k(static_cast<Eigen::Index>(r.q), static_cast<Eigen::Index>(r.p)) = std::conj(v);
            if (algebra == Algebra::SO2N) k = k - t * k.conjugate() * t;
            basis.push_back(k);
        }
    }
    // Real rank of the vectorized family.
    Eigen::MatrixXd vecs(2 * f * f, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        for (Eigen::Index a = 0; a < f * f; ++a) {
            vecs(a, col) = basis[c](a % f, a / f).real();
            vecs(f * f + a, col) = basis[c](a % f, a / f).imag();
        }
    }
    if (basis.empty()) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vecs);
    qr.setThreshold(1e-10);
    return static_cast<std::size_t>(qr.rank());
}

void set_nambu_corruption(bool on) { g_corrupt_nambu = on; }

DenseOperator nambu_matrix(const QuadraticFermionH& h) {
    const auto n = static_cast<Eigen::Index>(h.n());
    DenseOperator m(2 * n, 2 * n);
    m.block(0, 0, n, n) = h.alpha;
    m.block(0, n, n, n) = -2.0 * h.beta.conjugate();
    m.block(n, 0, n, n) = 2.0 * h.beta;
    m.block(n, n, n, n) = g_corrupt_nambu ? DenseOperator(-h.alpha) : DenseOperator(-h.alpha.transpose());
    return m;
}

double particle_hole_defect(const DenseOperator& m) {
    const std::size_t n = modes_of(m, Algebra::SO2N);
    const DenseOperator t = tau(n);
    return (m + t * m.transpose() * t).cwiseAbs().maxCoeff();
}

double cartan_distance(const DenseOperator& m, Algebra algebra) {
    const std::size_t n = modes_of(m, algebra);
    double s = 0.0;
    for (const auto& r : positive_roots(n, algebra)) s += std::norm(m(static_cast<Eigen::Index>(r.p), static_cast<Eigen::Index>(r.q)));
    return std::sqrt(8.0 * s);
}

std::pair<Rotation, DenseOperator> jacobi_step(const DenseOperator& m, Algebra algebra) {
    const std::size_t n = modes_of(m, algebra);
    const auto roots = positive_roots(n, algebra);
    const Root* best = nullptr;
    double best_mod = 0.0;
    for (const auto& r : roots) {
        const double v = std::abs(m(static_cast<Eigen::Index>(r.p), static_cast<Eigen::Index>(r.q)));
        if (v > best_mod) {
            best_mod = v;
            best = &r;
        }
    }
    if (best == nullptr) throw Error(ErrorKind::AlreadyDiagonal, "lieff", "no nonzero root coefficient left");

    const auto p = static_cast<Eigen::Index>(best->p);
    const auto q = static_cast<Eigen::Index>(best->q);
    const cplx b = m(p, q);
    const double a = m(p, p).real();
    const double d = m(q, q).real();
    Rotation rot;
    rot.root = *best;
    rot.phi = std::arg(b);
    rot.theta = std::abs(a - d) < 1e-300 ? kPi / 4.0 : 0.5 * std::atan(2.0 * std::abs(b) / (a - d));
    rot.pi_x = -rot.theta * std::sin(rot.phi);
    rot.pi_y = -rot.theta * std::cos(rot.phi);

    const double c = std::cos(rot.theta);
    const double s = std::sin(rot.theta);
    const cplx e = std::exp(cplx(0.0, rot.phi));
    const auto dim = m.rows();
    DenseOperator g = DenseOperator::Identity(dim, dim);
    g(p, p) = c;
    g(p, q) = -s * e;
    g(q, p) = s * std::conj(e);
    g(q, q) = c;
    // K = sin(phi) X + cos(phi) Y on the root plane, G = exp(-i theta K).
    DenseOperator k = DenseOperator::Zero(dim, dim);
    k(p, q) = cplx(0.0, -1.0) * e;
    k(q, p) = cplx(0.0, 1.0) * std::conj(e);
    if (algebra == Algebra::SO2N) {
        const auto pp = static_cast<Eigen::Index>(best->partner_p);
        const auto pq = static_cast<Eigen::Index>(best->partner_q);
        // Partner plane carries tau G^* tau.
        g(pp, pp) = c;
        g(pp, pq) = std::conj(g(p, q));
        g(pq, pp) = std::conj(g(q, p));
        g(pq, pq) = c;
        const DenseOperator t = tau(n);
        k = k - t * k.conjugate() * t;
    }
    rot.generator = k;
    DenseOperator next = g.adjoint() * m * g;
    next = 0.5 * (next + next.adjoint());
    return {rot, next};
}

std::size_t iteration_budget(double d_h, double target_offdiag, std::size_t l, Algebra algebra) {
    const double start = frobenius_per_dh(algebra) * d_h;
    if (start <= target_offdiag || l == 0) return 0;
    if (l == 1) return 1;
    const double ld = static_cast<double>(l);
    return static_cast<std::size_t>(std::ceil(2.0 * std::log(start / target_offdiag) / std::log(ld / (ld - 1.0))));
}

JacobiResult jacobi_until(const DenseOperator& m, Algebra algebra, const std::function<bool(const DenseOperator&)>& done) {
    const std::size_t n = modes_of(m, algebra);
    JacobiResult out;
    out.trace.l = positive_roots(n, algebra).size();
    if (out.trace.l != closed_form_root_count(n, algebra)) {
        throw Error(ErrorKind::PipelineFailure, "lieff", "root pairing does not match the closed-form count");
    }
    out.trace.d_h_initial = cartan_distance(m, algebra);
    const double scale = m.norm();
    const double l = static_cast<double>(out.trace.l);
    const double bound = out.trace.l > 0 ? (l - 1.0) / l : 0.0;
    const std::size_t max_steps = 1000 + 200 * out.trace.l * out.trace.l;

    DenseOperator cur = m;
    double dh = out.trace.d_h_initial;
    while (!done(cur)) {
        if (out.rotations.size() >= max_steps) {
            throw Error(ErrorKind::ConvergenceStall, "lieff", "no convergence within the step limit");
        }
        auto [rot, next] = jacobi_step(cur, algebra);
        const double dh_next = cartan_distance(next, algebra);
        JacobiStep step;
        step.pivot = rot.root;
        step.pivot_modulus = std::abs(cur(static_cast<Eigen::Index>(rot.root.p), static_cast<Eigen::Index>(rot.root.q)));
        step.d_h = dh_next;
        step.ratio = dh > 0.0 ? (dh_next * dh_next) / (dh * dh) : 0.0;
        step.ph_defect = algebra == Algebra::SO2N ? particle_hole_defect(next) : 0.0;
        if (dh_next * dh_next > bound * dh * dh + kContractionSlack * scale * dh) {
            throw Error(ErrorKind::ConvergenceStall, "lieff",
                        "step " + std::to_string(out.rotations.size() + 1) + " contracted by " +
                            std::to_string(step.ratio) + " > (l-1)/l");
        }
        out.trace.steps.push_back(step);
        out.rotations.push_back(std::move(rot));
        cur = std::move(next);
        dh = dh_next;
    }
    out.trace.r = out.rotations.size();
    out.m_final = std::move(cur);
    return out;
}

JacobiResult jacobi_diagonalize(const DenseOperator& m, Algebra algebra, double target_offdiag) {
    if (!(target_offdiag > 0.0)) throw Error(ErrorKind::NonPositiveInput, "lieff", "target must be positive");
    auto out = jacobi_until(m, algebra, [&](const DenseOperator& x) { return off_frobenius(x) <= target_offdiag; });
    out.trace.r_budget = iteration_budget(out.trace.d_h_initial, target_offdiag, out.trace.l, algebra);
    return out;
}

std::vector<DenseOperator> jw_annihilators(std::size_t n) {
    check_fock_size(n);
    DenseOperator lower = DenseOperator::Zero(2, 2);
    lower(0, 1) = 1.0;  // |1> occupied -> |0>
    const DenseOperator z = circuits::pauli_z();
    const DenseOperator id = DenseOperator::Identity(2, 2);
    std::vector<DenseOperator> cs;
    for (std::size_t j = 0; j < n; ++j) {
        DenseOperator op = DenseOperator::Ones(1, 1);
        for (std::size_t k = 0; k < n; ++k) op = numkit::kron(op, k < j ? z : (k == j ? lower : id));
        cs.push_back(op);
    }
    return cs;
}

DenseOperator fock_rep_fermionic(const QuadraticFermionH& h) {
    const std::size_t n = h.n();
    const auto cs = jw_annihilators(n);
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    DenseOperator out = DenseOperator::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            out += h.alpha(ii, jj) * (cs[i].adjoint() * cs[j]);
            out += h.beta(ii, jj) * (cs[i] * cs[j]);
            out -= std::conj(h.beta(ii, jj)) * (cs[i].adjoint() * cs[j].adjoint());
        }
    }
    return out;
}

DenseOperator fock_from_nambu(const DenseOperator& k) {
    const std::size_t n = modes_of(k, Algebra::SO2N);
    const auto cs = jw_annihilators(n);
    std::vector<DenseOperator> psi;
    for (const auto& c : cs) psi.push_back(c);
    for (const auto& c : cs) psi.push_back(c.adjoint());
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    DenseOperator out = DenseOperator::Zero(dim, dim);
    for (std::size_t a = 0; a < 2 * n; ++a) {
        for (std::size_t b = 0; b < 2 * n; ++b) {
            const cplx v = k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            if (v != cplx(0.0)) out += 0.5 * v * (psi[a].adjoint() * psi[b]);
        }
    }
    const auto nn = static_cast<Eigen::Index>(n);
    out += 0.5 * k.block(0, 0, nn, nn).trace() * DenseOperator::Identity(dim, dim);
    return out;
}

std::vector<std::vector<std::size_t>> boson_sector_basis(std::size_t n, std::size_t m) {
    std::vector<std::vector<std::size_t>> out;
    if (n == 0) return out;
    std::vector<std::size_t> cur(n, 0);
    // Lexicographically descending: fill the first mode as much as possible.
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t mode, std::size_t left) {
        if (mode + 1 == n) {
            cur[mode] = left;
            out.push_back(cur);
            return;
        }
        for (std::size_t k = left + 1; k-- > 0;) {
            cur[mode] = k;
            rec(mode + 1, left - k);
        }
    };
    rec(0, m);
    return out;
}

DenseOperator sector_rep_bosonic(const DenseOperator& alpha, std::size_t m) {
    const auto n = static_cast<std::size_t>(alpha.rows());
    if (alpha.cols() != alpha.rows() || n == 0) throw Error(ErrorKind::DimensionMismatch, "lieff", "alpha must be square");
    if (binom(n + m - 1, m) > kMaxSectorDim && desk_cap_enabled()) {
        throw Error(ErrorKind::DimensionOverflow, "lieff", "boson sector dimension exceeds 2048");
    }
    const auto basis = boson_sector_basis(n, m);
    std::map<std::vector<std::size_t>, Eigen::Index> index;
    for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = static_cast<Eigen::Index>(k);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    DenseOperator out = DenseOperator::Zero(dim, dim);
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto& s = basis[col];
        const auto c = static_cast<Eigen::Index>(col);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const cplx v = alpha(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                if (v == cplx(0.0)) continue;
                if (a == b) {
                    out(c, c) += v * static_cast<double>(s[a]);
                    continue;
                }
                if (s[b] == 0) continue;
                auto t = s;
                t[b] -= 1;
                t[a] += 1;
                out(index.at(t), c) += v * std::sqrt(static_cast<double>(s[b]) * static_cast<double>(s[a] + 1));
            }
        }
    }
    return out;
}

DenseOperator fock_unitary(const Circuit& c) {
    if (c.cost_model() != CostModel::FermionicWeight2) {
        throw Error(ErrorKind::InvalidGate, "lieff", "Fock mapping needs a FermionicWeight2 circuit");
    }
    const std::size_t n = c.num_subsystems();
    check_fock_size(n);
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    DenseOperator u = DenseOperator::Identity(dim, dim);
    for (const auto& g : c.gates()) {
        if (!g.controls.empty() || g.is_explicit()) {
            throw Error(ErrorKind::InvalidGate, "lieff", "mode gates must be uncontrolled generator gates");
        }
        if (g.targets.empty()) {
            u *= std::exp(cplx(0.0, -g.angle) * g.generator(0, 0));
            continue;
        }
        const DenseOperator f = fock_from_nambu(embed_generator(g.generator, g.targets, n, Algebra::SO2N));
        u = numkit::evolve_exact(f, g.angle) * u;
    }
    return u;
}

DenseOperator sector_unitary(const Circuit& c, std::size_t m) {
    if (c.cost_model() != CostModel::BosonicWeight2) {
        throw Error(ErrorKind::InvalidGate, "lieff", "sector mapping needs a BosonicWeight2 circuit");
    }
    const std::size_t n = c.num_subsystems();
    const auto dim = static_cast<Eigen::Index>(binom(n + m - 1, m));
    DenseOperator u = DenseOperator::Identity(dim, dim);
    for (const auto& g : c.gates()) {
        if (!g.controls.empty() || g.is_explicit()) {
            throw Error(ErrorKind::InvalidGate, "lieff", "mode gates must be uncontrolled generator gates");
        }
        if (g.targets.empty()) {
            u *= std::exp(cplx(0.0, -g.angle) * g.generator(0, 0));
            continue;
        }
        const DenseOperator f = sector_rep_bosonic(embed_generator(g.generator, g.targets, n, Algebra::SUN), m);
        u = numkit::evolve_exact(f, g.angle) * u;
    }
    return u;
}

namespace {

double max_error_on_states(const DenseOperator& exact, const DenseOperator& approx, std::uint64_t seed, std::size_t count) {
    numkit::Rng rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const StateVector psi = numkit::random_state(static_cast<std::size_t>(exact.rows()), rng);
        worst = std::max(worst, ((exact - approx) * psi).norm());
    }
    return worst;
}

// V(t) = V_1 ... V_r exp(-i t H_D) V_r^dag ... V_1^dag; the first gate applied is V_1^dag.
Circuit assemble(const JacobiResult& jr, std::size_t n, Algebra algebra, double t, double global_phase,
                 std::vector<std::size_t> dims) {
    const CostModel model = algebra == Algebra::SO2N ? CostModel::FermionicWeight2 : CostModel::BosonicWeight2;
    Circuit c(std::move(dims), model);
    std::vector<Gate> forward;
    for (const auto& rot : jr.rotations) {
        const auto modes = root_modes(rot.root, n, algebra);
        forward.push_back(Gate::rotation("V", modes, local_generator(rot.generator, modes, n, algebra), rot.theta, model));
    }
    for (const auto& g : forward) c.add(g.inverse());
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        DenseOperator gen;
        if (algebra == Algebra::SO2N) {
            gen = DenseOperator::Zero(2, 2);
            gen(0, 0) = 1.0;
            gen(1, 1) = -1.0;
        } else {
            gen = DenseOperator::Ones(1, 1);
        }
        c.add(Gate::rotation("phase", {j}, gen, std::remainder(t * jr.m_final(jj, jj).real(), 2.0 * kPi), model));
    }
    if (global_phase != 0.0) {
        c.add(Gate::rotation("global-phase", {}, DenseOperator::Ones(1, 1), std::remainder(global_phase, 2.0 * kPi), model));
    }
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) c.add(*it);
    return c;
}

void fill_trace_stats(FFReport& rep, const JacobiResult& jr) {
    rep.r = jr.trace.r;
    rep.l = jr.trace.l;
    rep.final_d_h = jr.trace.steps.empty() ? jr.trace.d_h_initial : jr.trace.steps.back().d_h;
    for (const auto& s : jr.trace.steps) {
        rep.max_ratio = std::max(rep.max_ratio, s.ratio);
        rep.max_ph_defect = std::max(rep.max_ph_defect, s.ph_defect);
    }
}

}  // namespace

FFResult fermionic_ff_circuit(const QuadraticFermionH& h, double t, double horizon, double eps, std::uint64_t seed,
                              std::size_t num_states) {
    if (!(eps > 0.0) || !(horizon > 0.0) || t < 0.0) {
        throw Error(ErrorKind::NonPositiveInput, "lieff", "need epsilon > 0, T > 0 and t >= 0");
    }
    if (t > horizon) throw Error(ErrorKind::OutOfRange, "lieff", "t exceeds the horizon T");
    const std::size_t n = h.n();
    const DenseOperator m = nambu_matrix(h);
    const double tol = eps / (2.0 * horizon);
    const double p = n > 1 ? 0.5 * std::sqrt(static_cast<double>(n) / static_cast<double>(n - 1)) : 1.0;

    FFReport rep;
    rep.n = n;
    rep.t = t;
    rep.horizon = horizon;
    rep.epsilon = eps;
    rep.target_dh = tol / p;
    rep.max_ph_defect = particle_hole_defect(m);
    // Stop on the d_h rule, then until the exact Fock-norm condition
    // ||F(O)|| = ||O||_tr / 4 <= eps / (2T) holds.
    auto jr = jacobi_until(m, Algebra::SO2N, [&](const DenseOperator& x) {
        if (cartan_distance(x, Algebra::SO2N) > rep.target_dh) return false;
        return 0.25 * trace_norm(off_part(x)) <= tol;
    });
    jr.trace.r_budget = iteration_budget(jr.trace.d_h_initial, tol, jr.trace.l, Algebra::SO2N);
    rep.r_budget = jr.trace.r_budget;
    const double rep_ph = rep.max_ph_defect;
    fill_trace_stats(rep, jr);
    rep.max_ph_defect = std::max(rep.max_ph_defect, rep_ph);

    const auto nn = static_cast<Eigen::Index>(n);
    const double shift = 0.5 * (m.block(0, 0, nn, nn).trace().real() - jr.m_final.block(0, 0, nn, nn).trace().real());
    FFResult out{assemble(jr, n, Algebra::SO2N, t, t * shift, std::vector<std::size_t>(n, 2)), rep};
    out.report.counts = circuits::count(out.circuit);
    out.report.unit_cost_count = out.report.counts.raw_gates;

    if (n <= 4 || !desk_cap_enabled()) {
        out.report.error_measured =
            max_error_on_states(numkit::evolve_exact(fock_rep_fermionic(h), t), fock_unitary(out.circuit), seed, num_states);
        if (out.report.error_measured > eps) {
            throw Error(ErrorKind::ToleranceUnachievable, "lieff",
                        "Fock error " + std::to_string(out.report.error_measured) + " exceeds epsilon");
        }
    }
    return out;
}

FFResult bosonic_ff_circuit(const DenseOperator& alpha, double t, std::size_t m, double horizon, double eps,
                            std::uint64_t seed, std::size_t num_states) {
    if (!(eps > 0.0) || !(horizon > 0.0) || t < 0.0 || m == 0) {
        throw Error(ErrorKind::NonPositiveInput, "lieff", "need epsilon > 0, T > 0, t >= 0 and m >= 1");
    }
    if (t > horizon) throw Error(ErrorKind::OutOfRange, "lieff", "t exceeds the horizon T");
    const std::size_t n = modes_of(alpha, Algebra::SUN);
    if ((alpha - alpha.adjoint()).cwiseAbs().maxCoeff() > kStructTol) {
        throw Error(ErrorKind::NotHermitian, "lieff", "mode matrix must be Hermitian");
    }
    const double mean = alpha.trace().real() / static_cast<double>(n);
    DenseOperator traceless = 0.5 * (alpha + alpha.adjoint());
    traceless.diagonal().array() -= mean;

    const double tol = eps / (2.0 * horizon);
    const double md = static_cast<double>(m);
    const double p = md / std::sqrt(2.0 * static_cast<double>(n));
    FFReport rep;
    rep.n = n;
    rep.m = m;
    rep.t = t;
    rep.horizon = horizon;
    rep.epsilon = eps;
    rep.target_dh = tol / p;
    auto jr = jacobi_until(traceless, Algebra::SUN, [&](const DenseOperator& x) {
        if (cartan_distance(x, Algebra::SUN) > rep.target_dh) return false;
        return md * numkit::spectral_norm(off_part(x)) <= tol;
    });
    jr.trace.r_budget = iteration_budget(jr.trace.d_h_initial, tol / md, jr.trace.l, Algebra::SUN);
    rep.r_budget = jr.trace.r_budget;
    fill_trace_stats(rep, jr);

    // The trace part is N * tr(alpha)/n, a pure phase on the m-boson sector.
    FFResult out{assemble(jr, n, Algebra::SUN, t, t * md * mean, std::vector<std::size_t>(n, m + 1)), rep};
    out.report.counts = circuits::count(out.circuit);
    out.report.unit_cost_count = out.report.counts.raw_gates;
    out.report.error_measured = max_error_on_states(numkit::evolve_exact(sector_rep_bosonic(alpha, m), t),
                                                    sector_unitary(out.circuit, m), seed, num_states);
    if (out.report.error_measured > eps) {
        throw Error(ErrorKind::ToleranceUnachievable, "lieff",
                    "sector error " + std::to_string(out.report.error_measured) + " exceeds epsilon");
    }
    return out;
}

QuadraticFermionH random_fermion_h(std::size_t n, numkit::Rng& rng) {
    const auto nn = static_cast<Eigen::Index>(n);
    DenseOperator alpha = DenseOperator::Zero(nn, nn);
    DenseOperator beta = DenseOperator::Zero(nn, nn);
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < nn; ++i) {
        alpha(i, i) = rng.uniform(-1.0, 1.0);
        for (Eigen::Index j = i + 1; j < nn; ++j) {
            alpha(i, j) = cplx(rng.uniform(-r, r), rng.uniform(-r, r));
            alpha(j, i) = std::conj(alpha(i, j));
            beta(i, j) = cplx(rng.uniform(-r, r), rng.uniform(-r, r));
            beta(j, i) = -beta(i, j);
        }
    }
    return QuadraticFermionH::make(alpha, beta);
}

DenseOperator random_mode_matrix(std::size_t n, numkit::Rng& rng) {
    const auto nn = static_cast<Eigen::Index>(n);
    DenseOperator alpha = DenseOperator::Zero(nn, nn);
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < nn; ++i) {
        alpha(i, i) = rng.uniform(-1.0, 1.0);
        for (Eigen::Index j = i + 1; j < nn; ++j) {
            alpha(i, j) = cplx(rng.uniform(-r, r), rng.uniform(-r, r));
            alpha(j, i) = std::conj(alpha(i, j));
        }
    }
    return alpha;
}

}  // namespace ffsim::lieff
