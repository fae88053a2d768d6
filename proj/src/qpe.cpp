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

#include "ffsim/qpe.hpp"

#include <algorithm>
#include <cmath>

#include "ffsim/error.hpp"

namespace ffsim::qpe {

using circuits::Control;
using circuits::Gate;

std::vector<Gate> qft(const std::vector<std::size_t>& qubits) {
    std::vector<Gate> gates;
    const std::size_t l = qubits.size();
    for (std::size_t j = 0; j < l; ++j) {
        gates.push_back(Gate::unitary("H", {qubits[j]}, circuits::hadamard()));
        for (std::size_t k = j + 1; k < l; ++k) {
            const double alpha = 2.0 * kPi / std::ldexp(1.0, static_cast<int>(k - j + 1));
            Gate g = Gate::rotation("CPhase", {qubits[j]}, circuits::projector_one(), -alpha);
            gates.push_back(circuits::controlled(g, Control{qubits[k], 1}));
        }
    }
    for (std::size_t j = 0; j < l / 2; ++j) {
        gates.push_back(Gate::unitary("swap", {qubits[j], qubits[l - 1 - j]}, circuits::swap_matrix()));
    }
    return gates;
}

std::vector<Gate> inverse_qft(const std::vector<std::size_t>& qubits) {
    const auto forward = qft(qubits);
    std::vector<Gate> out;
    for (auto it = forward.rbegin(); it != forward.rend(); ++it) out.push_back(it->inverse());
    return out;
}

double outcome_probability(double phi, std::size_t l, std::uint64_t m) {
    const double n = std::ldexp(1.0, static_cast<int>(l));
    const double delta = phi - static_cast<double>(m) / n;
    const double den = std::sin(kPi * delta);
    if (std::abs(den) < 1e-13) return 1.0;
    const double num = std::sin(kPi * n * delta);
    return std::min(1.0, (num * num) / (n * n * den * den));
}

std::vector<double> outcome_distribution(double phi, std::size_t l) {
    if (l == 0 || l > 24) throw Error(ErrorKind::RegisterOverflow, "qpe", "register width must lie in 1..24");
    const std::uint64_t n = std::uint64_t{1} << l;
    std::vector<double> p(n);
    double total = 0.0;
    for (std::uint64_t m = 0; m < n; ++m) total += p[m] = outcome_probability(phi, l, m);
    for (auto& x : p) x /= total;
    return p;
}

std::int64_t signed_outcome(std::uint64_t m, std::size_t l) {
    const std::uint64_t n = std::uint64_t{1} << l;
    return m <= n / 2 ? static_cast<std::int64_t>(m) : static_cast<std::int64_t>(m) - static_cast<std::int64_t>(n);
}

std::uint64_t circular_distance(std::uint64_t a, std::uint64_t b, std::size_t l) {
    const std::uint64_t n = std::uint64_t{1} << l;
    const std::uint64_t d = (a % n + n - b % n) % n;
    return std::min(d, n - d);
}

std::vector<double> to_signed_order(const std::vector<double>& p, std::size_t l) {
    const std::uint64_t n = std::uint64_t{1} << l;
    std::vector<double> out(n);
    for (std::uint64_t m = 0; m < n; ++m) {
        const std::int64_t s = signed_outcome(m, l);
        out[static_cast<std::size_t>(s + static_cast<std::int64_t>(n / 2) - 1)] = p[m];
    }
    return out;
}

std::vector<double> median_distribution(const std::vector<double>& p, std::size_t reps) {
    if (reps % 2 == 0) throw Error(ErrorKind::OutOfRange, "qpe", "median needs an odd number of repetitions");
    if (reps == 1) return p;
    const std::size_t half = (reps + 1) / 2;
    std::vector<double> binom(reps + 1);
    binom[0] = 1.0;
    for (std::size_t j = 1; j <= reps; ++j) binom[j] = binom[j - 1] * static_cast<double>(reps - j + 1) / static_cast<double>(j);
    // Pr(median <= k) = Pr(at least `half` draws are <= k).
    auto at_most = [&](double f) {
        double s = 0.0;
        for (std::size_t j = half; j <= reps; ++j) {
            s += binom[j] * std::pow(f, static_cast<double>(j)) * std::pow(1.0 - f, static_cast<double>(reps - j));
        }
        return s;
    };
    std::vector<double> out(p.size());
    double cdf = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        cdf = std::min(1.0, cdf + p[k]);
        const double now = at_most(cdf);
        out[k] = std::max(0.0, now - prev);
        prev = now;
    }
    return out;
}

}  // namespace ffsim::qpe
