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

#include "ffsim/frustff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ffsim/error.hpp"
#include "ffsim/qpe.hpp"

namespace ffsim::frustff {

using circuits::Circuit;
using circuits::Control;
using circuits::Gate;

namespace {

constexpr double kTermTol = 1e-10;
constexpr double kGroundTol = 1e-8;
constexpr double kLowEnergyTol = 1e-6;
constexpr std::size_t kMaxBits = 12;
constexpr std::size_t kMaxLocalDim = 64;

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < e; ++k) r *= b;
    return r;
}

void check_term(const LocalTerm& term, std::size_t d) {
    const auto ld = static_cast<Eigen::Index>(ipow(d, term.subset.size()));
    if (term.h.rows() != ld || term.h.cols() != ld) {
        throw Error(ErrorKind::DimensionMismatch, "frustff", "term matrix does not match its subset");
    }
    const auto es = numkit::hermitian_eigendecompose(term.h);
    if (es.values.minCoeff() < -kTermTol || es.values.maxCoeff() > 1.0 + kTermTol) {
        throw Error(ErrorKind::NotPSD, "frustff", "local term spectrum must lie in [0, 1]");
    }
}

// Median of the signed outcomes of `reps` registers packed big-endian in `index`.
std::int64_t median_outcome(std::uint64_t index, std::size_t l, std::size_t reps) {
    std::vector<std::int64_t> values(reps);
    const std::uint64_t mask = (std::uint64_t{1} << l) - 1;
    for (std::size_t r = 0; r < reps; ++r) {
        const std::uint64_t m = (index >> (l * (reps - 1 - r))) & mask;
        values[r] = qpe::signed_outcome(m, l);
    }
    std::nth_element(values.begin(), values.begin() + static_cast<long>(reps / 2), values.end());
    return values[reps / 2];
}

double estimate_from_signed(std::int64_t s, std::size_t l, std::size_t L) {
    const double x = 2.0 * kPi * static_cast<double>(s) * std::sqrt(static_cast<double>(L)) / std::ldexp(1.0, static_cast<int>(l));
    return x * x;
}

}  // namespace

std::size_t FFHamiltonian::system_dim() const { return ipow(d, n); }

DenseOperator FFHamiltonian::embed(const DenseOperator& local, const std::vector<std::size_t>& subset) const {
    const std::size_t dim = system_dim();
    const std::size_t ld = ipow(d, subset.size());
    std::vector<std::uint64_t> stride(n);
    for (std::size_t s = 0; s < n; ++s) stride[s] = ipow(d, n - 1 - s);
    DenseOperator out = DenseOperator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t a = 0; a < dim; ++a) {
        // Local index of a and a with the subset digits cleared.
        std::uint64_t la = 0;
        std::uint64_t rest = a;
        for (auto s : subset) {
            const std::uint64_t digit = (a / stride[s]) % d;
            la = la * d + digit;
            rest -= digit * stride[s];
        }
        for (std::uint64_t lb = 0; lb < ld; ++lb) {
            const cplx v = local(static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(lb));
            if (v == cplx(0.0)) continue;
            std::uint64_t b = rest;
            std::uint64_t r = lb;
            for (std::size_t k = subset.size(); k-- > 0;) {
                b += (r % d) * stride[subset[k]];
                r /= d;
            }
            out(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
        }
    }
    return out;
}

DenseOperator FFHamiltonian::matrix() const {
    const auto dim = static_cast<Eigen::Index>(system_dim());
    DenseOperator h = DenseOperator::Zero(dim, dim);
    for (const auto& term : terms) h += embed(term.h, term.subset);
    return h;
}

AmplifiedHamiltonian amplify(const FFHamiltonian& h) {
    for (const auto& term : h.terms) check_term(term, h.d);
    const std::size_t dim = h.system_dim();
    const std::size_t L = h.num_terms();
    if (L > 0) {
        const double ground = numkit::hermitian_eigendecompose(h.matrix()).values(0);
        if (ground > kGroundTol) {
            throw Error(ErrorKind::NotFrustrationFree, "frustff", "ground energy " + std::to_string(ground) + " > 1e-8");
        }
    }
    const auto a = static_cast<Eigen::Index>(L + 1);
    AmplifiedHamiltonian out;
    out.system_dim = dim;
    out.L = L;
    out.matrix = DenseOperator::Zero(static_cast<Eigen::Index>(dim) * a, static_cast<Eigen::Index>(dim) * a);
    for (std::size_t x = 0; x < L; ++x) {
        DenseOperator hop = DenseOperator::Zero(a, a);
        hop(static_cast<Eigen::Index>(x + 1), 0) = 1.0;
        hop(0, static_cast<Eigen::Index>(x + 1)) = 1.0;
        out.matrix += numkit::kron(h.embed(numkit::psd_sqrt(h.terms[x].h), h.terms[x].subset), hop);
    }
    return out;
}

double qee_accuracy(double eps, double t, double delta_max) {
    if (!(eps > 0.0) || !(t > 0.0) || !(delta_max > 0.0)) {
        throw Error(ErrorKind::NonPositiveInput, "frustff", "epsilon, t and Delta must be positive");
    }
    return std::min(std::sqrt(eps / (4.0 * t)), eps / (8.0 * t * std::sqrt(delta_max)));
}

FFHamiltonian make_random_ff(std::size_t n, std::size_t d, std::size_t L, std::size_t k, std::uint64_t seed,
                             std::size_t degree) {
    if (n == 0 || d < 2 || k == 0 || k > n || L * k > n * degree || ipow(d, k) > kMaxLocalDim) {
        throw Error(ErrorKind::InfeasibleParameters, "frustff",
                    "need 1 <= k <= n, d >= 2, L*k <= n*degree and d^k <= 64");
    }
    numkit::Rng rng(seed);
    std::vector<StateVector> ground(n);
    for (auto& g : ground) g = numkit::random_state(d, rng);

    FFHamiltonian h;
    h.n = n;
    h.d = d;
    std::vector<std::size_t> used(n, 0);
    const std::size_t ld = ipow(d, k);
    for (std::size_t x = 0; x < L; ++x) {
        std::vector<std::size_t> open;
        for (std::size_t s = 0; s < n; ++s) {
            if (used[s] < degree) open.push_back(s);
        }
        if (open.size() < k) throw Error(ErrorKind::InfeasibleParameters, "frustff", "degree bound leaves too few spins");
        std::shuffle(open.begin(), open.end(), rng.engine());
        std::vector<std::size_t> subset(open.begin(), open.begin() + static_cast<long>(k));
        std::sort(subset.begin(), subset.end());
        for (auto s : subset) used[s] += 1;

        DenseOperator gx = DenseOperator::Ones(1, 1);
        for (auto s : subset) gx = numkit::kron(gx, ground[s]);
        DenseOperator basis(static_cast<Eigen::Index>(ld), static_cast<Eigen::Index>(ld));
        basis.col(0) = gx.col(0);
        for (Eigen::Index c = 1; c < basis.cols(); ++c) basis.col(c) = numkit::random_state(ld, rng);
        Eigen::HouseholderQR<DenseOperator> qr(basis);
        const DenseOperator q = qr.householderQ();
        const auto rank = static_cast<Eigen::Index>(1 + rng.index(ld - 1));
        const DenseOperator span = q.middleCols(1, rank);
        DenseOperator proj = span * span.adjoint();
        proj = 0.5 * (proj + proj.adjoint());
        h.terms.push_back({subset, proj});
    }
    return h;
}

FFHamiltonian scaled(const FFHamiltonian& h, double s) {
    if (!(s > 0.0) || s > 1.0) throw Error(ErrorKind::OutOfRange, "frustff", "scale must lie in (0, 1]");
    FFHamiltonian out = h;
    for (auto& term : out.terms) term.h *= s;
    return out;
}

std::size_t confidence_reps(double eps) {
    if (!(eps > 0.0)) throw Error(ErrorKind::NonPositiveInput, "frustff", "epsilon must be positive");
    return 2 * static_cast<std::size_t>(std::ceil(std::log(4.0 / eps))) + 1;
}

double eigenvalue_estimate(std::uint64_t m, std::size_t l, std::size_t L) {
    return estimate_from_signed(qpe::signed_outcome(m, l), l, L);
}

QpeCircuit build_qpe(const DenseOperator& w, std::size_t l, std::size_t reps) {
    if (l == 0 || l > kMaxBits) throw Error(ErrorKind::RegisterOverflow, "frustff", "QPE register must have 1..12 bits");
    if (reps % 2 == 0) throw Error(ErrorKind::OutOfRange, "frustff", "repetition count must be odd");
    if (numkit::unitarity_defect(w) > 1e-9) throw Error(ErrorKind::NotUnitary, "frustff", "W is not unitary");

    std::vector<std::size_t> dims(reps * l, 2);
    dims.push_back(static_cast<std::size_t>(w.rows()));
    const std::size_t target = reps * l;
    QpeCircuit out{Circuit(dims), l, reps};
    for (std::size_t r = 0; r < reps; ++r) {
        std::vector<std::size_t> reg(l);
        std::iota(reg.begin(), reg.end(), r * l);
        for (auto q : reg) out.circuit.add(Gate::unitary("H", {q}, circuits::hadamard()));
        DenseOperator power = w;
        for (std::size_t j = 0; j < l; ++j) {
            // Bit j (weight 2^j) sits at big-endian position l-1-j.
            Gate g = Gate::unitary("c-W^2^k", {target}, power);
            g.cost_units = std::size_t{1} << j;
            out.circuit.add(circuits::controlled(g, Control{reg[l - 1 - j], 1}));
            power = power * power;
        }
        for (auto& g : qpe::inverse_qft(reg)) out.circuit.add(std::move(g));
    }
    return out;
}

Circuit build_pipeline_circuit(const FFHamiltonian& h, double t, std::size_t l, std::size_t reps) {
    const auto amp = amplify(h);
    if (amp.L == 0) throw Error(ErrorKind::InfeasibleParameters, "frustff", "pipeline needs at least one term");
    const double sl = std::sqrt(static_cast<double>(amp.L));
    const DenseOperator w = numkit::evolve_exact(amp.matrix / sl, 1.0);
    const QpeCircuit q = build_qpe(w, l, reps);

    const std::size_t bits = l * reps;
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << bits);
    DenseOperator phase = DenseOperator::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const double lam = estimate_from_signed(median_outcome(static_cast<std::uint64_t>(idx), l, reps), l, amp.L);
        phase(idx, idx) = std::exp(cplx(0.0, -t * lam));
    }
    std::vector<std::size_t> reg(bits);
    std::iota(reg.begin(), reg.end(), 0);

    Circuit c = q.circuit;
    c.add(Gate::unitary("median-phase", reg, phase));
    c.append(q.circuit.inverse());
    return c;
}

PipelineOutcome spectral_pipeline(const FFHamiltonian& h, double t, const StateVector& psi, std::size_t l,
                                  std::size_t reps) {
    const auto amp = amplify(h);
    if (amp.L == 0) throw Error(ErrorKind::InfeasibleParameters, "frustff", "pipeline needs at least one term");
    if (l == 0 || l > kMaxBits) throw Error(ErrorKind::RegisterOverflow, "frustff", "QPE register must have 1..12 bits");
    const double sl = std::sqrt(static_cast<double>(amp.L));
    const std::uint64_t n_out = std::uint64_t{1} << l;
    const auto aes = numkit::hermitian_eigendecompose(amp.matrix);
    const auto a = static_cast<Eigen::Index>(amp.L + 1);
    StateVector in = StateVector::Zero(static_cast<Eigen::Index>(amp.system_dim) * a);
    for (Eigen::Index x = 0; x < psi.size(); ++x) in(x * a) = psi(x);
    const StateVector coeff = aes.vectors.adjoint() * in;

    std::vector<double> lam_hat(n_out);
    for (std::uint64_t k = 0; k < n_out; ++k) {
        const auto s = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(n_out / 2) + 1;
        lam_hat[k] = estimate_from_signed(s, l, amp.L);
    }
    StateVector good_coeff = StateVector::Zero(coeff.size());
    PipelineOutcome out;
    for (Eigen::Index v = 0; v < coeff.size(); ++v) {
        const double w2 = std::norm(coeff(v));
        if (w2 < 1e-30) continue;
        // W = exp(-i H'/sqrt(L)) has eigenphase 2 pi phi with phi = -mu / (2 pi sqrt(L)).
        const double phi = -aes.values(v) / (2.0 * kPi * sl);
        const auto med = qpe::median_distribution(qpe::to_signed_order(qpe::outcome_distribution(phi, l), l), reps);
        cplx g = 0.0;
        for (std::uint64_t k = 0; k < n_out; ++k) g += med[k] * std::exp(cplx(0.0, -t * lam_hat[k]));
        good_coeff(v) = coeff(v) * g;
        out.garbage += w2 * std::max(0.0, 1.0 - std::norm(g));
    }
    out.good = aes.vectors * good_coeff;
    return out;
}

FFResult ff_low_energy_simulate(const FFHamiltonian& h, double t, double delta_max, double eps, const StateVector& psi,
                                const SimulateOptions& options) {
    if (!(eps > 0.0) || !(delta_max > 0.0) || t < 0.0) {
        throw Error(ErrorKind::NonPositiveInput, "frustff", "need epsilon > 0, Delta > 0 and t >= 0");
    }
    const std::size_t dim = h.system_dim();
    if (static_cast<std::size_t>(psi.size()) != dim) {
        throw Error(ErrorKind::DimensionMismatch, "frustff", "state does not match the system dimension");
    }
    const DenseOperator hm = h.matrix();
    const auto es = numkit::hermitian_eigendecompose(hm);
    {
        StateVector low = StateVector::Zero(psi.size());
        for (Eigen::Index k = 0; k < es.values.size(); ++k) {
            if (es.values(k) <= delta_max) low += es.vectors.col(k) * es.vectors.col(k).dot(psi);
        }
        const double leak = (psi - low).norm();
        if (leak > kLowEnergyTol) {
            throw Error(ErrorKind::StateNotLowEnergy, "frustff",
                        "state has weight " + std::to_string(leak) + " above Delta");
        }
    }

    FFReport report;
    report.n = h.n;
    report.L = h.num_terms();
    report.t = t;
    report.horizon = options.horizon > 0.0 ? options.horizon : t;
    report.delta_max = delta_max;
    report.epsilon = eps;
    const double horizon = std::max(report.horizon, 1.0);
    report.delta_n = eps / (8.0 * std::sqrt(horizon));
    report.delta_lemma = qee_accuracy(eps, horizon, delta_max);
    report.reps = confidence_reps(eps);

    const StateVector exact = numkit::evolve_exact(hm, t) * psi;
    if (report.L == 0) {
        report.error_measured = (psi - exact).norm();
        return {psi, report};
    }

    const double sl = std::sqrt(static_cast<double>(report.L));
    const long bits = static_cast<long>(std::ceil(std::log2(sl / report.delta_n))) + options.margin;
    report.l_bits = static_cast<std::size_t>(std::max<long>(1, bits));
    if (report.l_bits > kMaxBits) {
        throw Error(ErrorKind::PrecisionOverflow, "frustff",
                    "phase register needs " + std::to_string(report.l_bits) + " > 12 bits");
    }
    const std::size_t l = report.l_bits;
    const std::uint64_t n_out = std::uint64_t{1} << l;
    report.w_uses = 2 * report.reps * static_cast<std::size_t>(n_out - 1);
    report.symbolic_cost = std::log(1.0 / eps) * static_cast<double>(report.L * report.L) / report.delta_n;

    const auto outcome = spectral_pipeline(h, t, psi, l, report.reps);
    const auto a = static_cast<Eigen::Index>(report.L + 1);
    const StateVector& good = outcome.good;
    StateVector target = StateVector::Zero(good.size());
    for (Eigen::Index x = 0; x < exact.size(); ++x) target(x * a) = exact(x);
    report.garbage_weight = outcome.garbage;
    report.error_measured = std::sqrt((good - target).squaredNorm() + outcome.garbage);

    StateVector out(psi.size());
    for (Eigen::Index x = 0; x < psi.size(); ++x) out(x) = good(x * a);
    return {out, report};
}

}  // namespace ffsim::frustff
