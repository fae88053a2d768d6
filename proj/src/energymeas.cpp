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

#include "ffsim/energymeas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ffsim/error.hpp"
#include "ffsim/qpe.hpp"

namespace ffsim::energymeas {

using circuits::Circuit;
using circuits::Control;
using circuits::Gate;

namespace {

constexpr double kNormTol = 1e-10;
constexpr std::size_t kMaxBits = 12;

std::vector<std::size_t> register_qubits(std::size_t l) {
    std::vector<std::size_t> q(l);
    std::iota(q.begin(), q.end(), 0);
    return q;
}

}  // namespace

EvolutionProvider exact_provider(const DenseOperator& h, double horizon) {
    if (numkit::spectral_norm(h) > 1.0 + kNormTol) {
        throw Error(ErrorKind::OutOfRange, "energymeas", "Hamiltonian must satisfy ||H|| <= 1");
    }
    const auto es = numkit::hermitian_eigendecompose(h);
    EvolutionProvider p;
    p.evolve = [es](double t) {
        Eigen::VectorXcd ph(es.values.size());
        for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(cplx(0.0, -t * es.values(k)));
        return DenseOperator(es.vectors * ph.asDiagonal() * es.vectors.adjoint());
    };
    p.horizon = horizon;
    p.error = 0.0;
    p.gate_cost = 1;
    p.dim = static_cast<std::size_t>(h.rows());
    return p;
}

double confidence_bound(int c) {
    if (c < 3) throw Error(ErrorKind::InvalidC, "energymeas", "c must be at least 3");
    return 1.0 - 1.0 / (2.0 * (c - 2));
}

MeasurementCircuit ff_to_measurement(const EvolutionProvider& sim, std::size_t l, int c) {
    if (l == 0 || l > kMaxBits) throw Error(ErrorKind::RegisterOverflow, "energymeas", "energy register needs 1..12 bits");
    if (c < 3 || static_cast<std::uint64_t>(c) >= (std::uint64_t{1} << l)) {
        throw Error(ErrorKind::InvalidC, "energymeas", "need 3 <= c < 2^l");
    }
    const double longest = std::ldexp(1.0, static_cast<int>(l) - 1);
    if (longest > sim.horizon) {
        throw Error(ErrorKind::HorizonExceeded, "energymeas", "2^(l-1) exceeds the provider horizon");
    }
    std::vector<std::size_t> dims(l, 2);
    dims.push_back(sim.dim);
    MeasurementCircuit out{Circuit(dims), {}, l};
    const auto reg = register_qubits(l);
    for (auto q : reg) out.circuit.add(Gate::unitary("H", {q}, circuits::hadamard()));
    for (std::size_t k = 0; k < l; ++k) {
        const double power = std::ldexp(1.0, static_cast<int>(k));
        const std::size_t q = reg[l - 1 - k];
        // e^{i 2^k} from the +I shift, as a phase gate on the control qubit.
        out.circuit.add(Gate::rotation("Rz(2^k)", {q}, circuits::projector_one(), std::remainder(-power, 2.0 * kPi)));
        Gate u = Gate::unitary("c-e^{i2^kH}", {l}, sim.evolve(-power));
        u.cost_units = sim.gate_cost;
        out.circuit.add(circuits::controlled(u, Control{q, 1}));
    }
    for (auto& g : qpe::inverse_qft(reg)) out.circuit.add(std::move(g));

    out.params.eta = confidence_bound(c);
    out.params.delta_e = 2.0 * kPi * c / std::ldexp(1.0, static_cast<int>(l));
    out.params.xi = static_cast<double>(l) * sim.error;
    out.params.gates = circuits::count(out.circuit).elementary_count;
    return out;
}

double energy_from_outcome(std::uint64_t m, std::size_t l) {
    return 2.0 * kPi * static_cast<double>(m) / std::ldexp(1.0, static_cast<int>(l)) - 1.0;
}

std::vector<double> energy_distribution(double e, std::size_t l) {
    return qpe::outcome_distribution((e + 1.0) / (2.0 * kPi), l);
}

double confidence_for_eigenvalue(double e, std::size_t l, double delta_e) {
    const auto p = energy_distribution(e, l);
    double s = 0.0;
    for (std::uint64_t m = 0; m < p.size(); ++m) {
        double d = std::remainder(energy_from_outcome(m, l) - e, 2.0 * kPi);
        if (std::abs(d) <= delta_e + 1e-12) s += p[m];
    }
    return s;
}

std::vector<std::uint64_t> sample_outcomes(const std::vector<double>& p, std::size_t shots, std::uint64_t seed) {
    numkit::Rng rng(seed);
    std::discrete_distribution<std::uint64_t> dist(p.begin(), p.end());
    std::vector<std::uint64_t> out(shots);
    for (auto& x : out) x = dist(rng.engine());
    return out;
}

Circuit measurement_to_ff(const DenseOperator& u_meas, std::size_t l, std::size_t system_dim, double t,
                          const MeasurementParams& params, double alpha) {
    if (!(params.delta_e > 0.0)) throw Error(ErrorKind::NonPositiveInput, "energymeas", "delta_e must be positive");
    if (std::abs(t) > alpha / params.delta_e) {
        throw Error(ErrorKind::HorizonExceeded, "energymeas", "t exceeds alpha / delta_e");
    }
    const auto total = static_cast<Eigen::Index>((std::uint64_t{1} << l) * system_dim);
    if (u_meas.rows() != total || u_meas.cols() != total) {
        throw Error(ErrorKind::DimensionMismatch, "energymeas", "U_meas does not act on energy register and system");
    }
    std::vector<std::size_t> dims(l, 2);
    dims.push_back(system_dim);
    std::vector<std::size_t> all(l + 1);
    std::iota(all.begin(), all.end(), 0);
    Circuit c(dims);
    c.add(Gate::unitary("U_meas", all, u_meas));
    // e^{-it E_hat} = e^{it} prod_k e^{-it 2 pi 2^k b_k / 2^l}.
    for (std::size_t k = 0; k < l; ++k) {
        const double w = 2.0 * kPi * std::ldexp(1.0, static_cast<int>(k)) / std::ldexp(1.0, static_cast<int>(l));
        c.add(Gate::rotation("phase", {l - 1 - k}, circuits::projector_one(), std::remainder(t * w, 2.0 * kPi)));
    }
    c.add(Gate::rotation("global-phase", {}, DenseOperator::Ones(1, 1), std::remainder(-t, 2.0 * kPi)));
    c.add(Gate::unitary("U_meas^dag", all, u_meas.adjoint()));
    return c;
}

double backward_error_bound(const MeasurementParams& params, double t) {
    return params.eta * params.delta_e * std::abs(t) + 2.0 * (1.0 - params.eta + params.xi);
}

EquivalenceReport equivalence_report(const DenseOperator& h, std::size_t l, int c, double t, double alpha,
                                     std::uint64_t seed, std::size_t num_states) {
    EquivalenceReport rep;
    rep.l = l;
    rep.c = c;
    rep.t = t;
    rep.alpha = alpha;
    rep.forward_horizon = std::ldexp(1.0, static_cast<int>(l) - 1);
    const auto sim = exact_provider(h, rep.forward_horizon);
    const auto meas = ff_to_measurement(sim, l, c);
    rep.forward = meas.params;

    const auto es = numkit::hermitian_eigendecompose(h);
    const DenseOperator u = circuits::to_unitary(meas.circuit);
    const std::size_t dim = sim.dim;
    const std::uint64_t n_out = std::uint64_t{1} << l;
    rep.confidence_measured = 1.0;
    rep.confidence_dense = 1.0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        const double e = es.values(k);
        rep.confidence_measured = std::min(rep.confidence_measured, confidence_for_eigenvalue(e, l, rep.forward.delta_e));
        // Same quantity read off the simulated circuit: input |0>|E>.
        const StateVector out = u.leftCols(static_cast<Eigen::Index>(dim)) * es.vectors.col(k);
        double s = 0.0;
        for (std::uint64_t m = 0; m < n_out; ++m) {
            const double d = std::remainder(energy_from_outcome(m, l) - e, 2.0 * kPi);
            if (std::abs(d) > rep.forward.delta_e + 1e-12) continue;
            s += out.segment(static_cast<Eigen::Index>(m * dim), static_cast<Eigen::Index>(dim)).squaredNorm();
        }
        rep.confidence_dense = std::min(rep.confidence_dense, s);
    }

    rep.backward_horizon = alpha / rep.forward.delta_e;
    const Circuit back = measurement_to_ff(u, l, dim, t, rep.forward, alpha);
    rep.backward_gates = circuits::count(back).elementary_count;
    rep.backward_error_bound = backward_error_bound(rep.forward, t);
    const DenseOperator v = circuits::to_unitary(back);
    const DenseOperator exact = sim.evolve(t);
    numkit::Rng rng(seed);
    for (std::size_t s = 0; s < num_states; ++s) {
        const StateVector psi = numkit::random_state(dim, rng);
        const StateVector got = v.leftCols(static_cast<Eigen::Index>(dim)) * psi;
        StateVector want = StateVector::Zero(got.size());
        want.head(static_cast<Eigen::Index>(dim)) = exact * psi;
        rep.backward_error_measured = std::max(rep.backward_error_measured, (got - want).norm());
    }
    return rep;
}

}  // namespace ffsim::energymeas
