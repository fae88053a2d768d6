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

#include "ffsim/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "ffsim/blockff.hpp"
#include "ffsim/circuits.hpp"
#include "ffsim/energymeas.hpp"
#include "ffsim/error.hpp"
#include "ffsim/frustff.hpp"
#include "ffsim/lieff.hpp"
#include "ffsim/qpe.hpp"
#include "ffsim/report.hpp"
#include "ffsim/schur.hpp"

namespace ffsim::verify {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed = true;
    json details = json::object();

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            details["failures"].push_back(what);
        }
    }
};

using Check = std::function<Outcome(std::uint64_t seed)>;

double max_offdiag_frobenius(const DenseOperator& m) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) s += std::norm(m(i, j));
        }
    }
    return std::sqrt(s);
}

Outcome schur_unitarity(std::uint64_t seed) {
    Outcome o;
    const auto t0 = Clock::now();
    json rows = json::array();
    for (std::size_t n = 1; n <= 6; ++n) {
        const double ud = numkit::unitarity_defect(schur::schur_matrix(n));
        double off = 0.0, spread = 0.0;
        numkit::Rng rng(seed + n);
        for (int k = 0; k < 3; ++k) {
            const auto ex = schur::extract_blocks(schur::random_permutation_invariant(n, rng), n);
            off = std::max(off, ex.off_block_norm);
            spread = std::max(spread, ex.path_spread);
        }
        json row = {{"n", n}, {"unitarity_defect", ud}, {"off_block_norm", off}, {"path_spread", spread}};
        o.require(ud <= 1e-9, "unitarity n=" + std::to_string(n));
        o.require(off <= 1e-8, "off-block n=" + std::to_string(n));
        o.require(spread <= 1e-8, "path spread n=" + std::to_string(n));
        if (n <= 2) {
            // Whole circuit, ancillas included.
            const double full = numkit::unitarity_defect(circuits::to_unitary(schur::build_schur_transform(n)));
            row["circuit_unitarity_defect"] = full;
            o.require(full <= 1e-9, "circuit unitarity n=" + std::to_string(n));
        }
        rows.push_back(row);
    }
    o.details["per_n"] = rows;
    o.details["runtime_limit_s"] = 60;
    o.require(std::chrono::duration<double>(Clock::now() - t0).count() < 60.0, "runtime");
    return o;
}

Outcome schur_scaling(std::uint64_t) {
    Outcome o;
    std::vector<double> ns, counts;
    for (std::size_t n = 2; n <= 6; ++n) {
        ns.push_back(static_cast<double>(n));
        counts.push_back(static_cast<double>(circuits::count(schur::build_schur_transform(n)).elementary_count));
    }
    const auto fit = report::fit_power_law(ns, counts);
    o.details = {{"n", ns}, {"elementary_count", counts}, {"exponent", fit.exponent}, {"r2", fit.r2}};
    o.require(fit.exponent <= 3.5, "exponent");
    o.require(fit.r2 >= 0.98, "r2");
    return o;
}

Outcome perm_ff(std::uint64_t seed) {
    Outcome o;
    json rows = json::array();
    double worst = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        numkit::Rng rng(seed + 10 * n);
        std::vector<DenseOperator> hs{schur::build_lmg(n, 0.5, 0.3)};
        for (int k = 0; k < 5; ++k) hs.push_back(schur::random_permutation_invariant(n, rng));
        for (std::size_t k = 0; k < hs.size(); ++k) {
            const double p = std::ldexp(1.0, static_cast<int>(n));
            std::vector<std::size_t> counts;
            for (double t : {1.0, p, p * p}) {
                const auto r = blockff::fast_forward_permutation_invariant(hs[k], n, t, 1e-8, seed + k);
                worst = std::max(worst, r.report.max_error_measured);
                counts.push_back(r.report.counts.elementary_count);
            }
            const bool same = counts[0] == counts[1] && counts[1] == counts[2];
            o.require(same, "t-dependent count n=" + std::to_string(n) + " instance " + std::to_string(k));
            rows.push_back({{"n", n}, {"instance", k == 0 ? "lmg" : "random"}, {"counts", counts}});
        }
    }
    o.details["instances"] = rows;
    o.details["max_error"] = worst;
    o.require(worst <= 1e-8, "state error");
    return o;
}

Outcome gap_amplification(std::uint64_t seed) {
    Outcome o;
    double worst_square = 0.0, worst_vec = 0.0, worst_spec = 0.0;
    for (int k = 0; k < 10; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        const std::size_t L = 1 + static_cast<std::size_t>(k % 4);
        const auto h = frustff::make_random_ff(n, 2, L, 2, seed + 7 * static_cast<std::uint64_t>(k));
        const auto amp = frustff::amplify(h);
        const DenseOperator hm = h.matrix();
        const auto a = static_cast<Eigen::Index>(L + 1);
        const auto dim = static_cast<Eigen::Index>(amp.system_dim);
        auto lift = [&](const StateVector& phi) {
            StateVector v = StateVector::Zero(dim * a);
            for (Eigen::Index s = 0; s < dim; ++s) v(s * a) = phi(s);
            return v;
        };
        const auto es = numkit::hermitian_eigendecompose(hm);
        numkit::Rng rng(seed + 100 + static_cast<std::uint64_t>(k));
        const StateVector phi = numkit::random_state(amp.system_dim, rng);
        worst_square = std::max(worst_square, (amp.matrix * (amp.matrix * lift(phi)) - lift(hm * phi)).norm());

        std::vector<double> expected;
        for (Eigen::Index j = 0; j < es.values.size(); ++j) {
            const double lam = es.values(j);
            if (lam <= 1e-8) continue;
            const double s = std::sqrt(lam);
            expected.push_back(s);
            expected.push_back(-s);
            // |v+-> = (|phi_j>|0> +- H'|phi_j>|0> / sqrt(lambda)) / sqrt 2
            const StateVector base = lift(es.vectors.col(j));
            const StateVector up = amp.matrix * base / s;
            for (double sign : {1.0, -1.0}) {
                const StateVector v = (base + sign * up) / std::sqrt(2.0);
                worst_vec = std::max(worst_vec, (amp.matrix * v - sign * s * v).norm());
            }
        }
        const auto ea = numkit::hermitian_eigendecompose(amp.matrix);
        std::vector<double> nonzero;
        for (Eigen::Index j = 0; j < ea.values.size(); ++j) {
            if (std::abs(ea.values(j)) > 1e-6) nonzero.push_back(ea.values(j));
        }
        std::sort(expected.begin(), expected.end());
        if (nonzero.size() != expected.size()) {
            o.require(false, "nonzero spectrum size, instance " + std::to_string(k));
            continue;
        }
        for (std::size_t j = 0; j < expected.size(); ++j) worst_spec = std::max(worst_spec, std::abs(nonzero[j] - expected[j]));
    }
    o.details = {{"square_identity", worst_square}, {"eigenvector_relation", worst_vec}, {"spectrum", worst_spec}};
    o.require(worst_square <= 1e-9, "(H')^2 identity");
    o.require(worst_vec <= 1e-8, "eigenvector relation");
    o.require(worst_spec <= 1e-8, "spectrum");
    return o;
}

Outcome delta_rule(std::uint64_t seed) {
    Outcome o;
    numkit::Rng rng(seed);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double big_delta = std::pow(10.0, rng.uniform(-4.0, 0.0));
        const double lam = rng.uniform(0.0, big_delta);
        const double t = std::pow(10.0, rng.uniform(0.0, 4.0));
        const double eps = std::pow(10.0, rng.uniform(-3.0, 0.0));
        const double d = frustff::qee_accuracy(eps, t, big_delta);
        const double bound = eps / (2.0 * t);
        for (double sign : {1.0, -1.0}) {
            const double r = std::sqrt(lam) + sign * d;
            const double dev = std::abs(r * r - lam) / bound;
            worst = std::max(worst, dev);
            if (dev > 1.0 + 1e-12) ++violations;
        }
    }
    o.details = {{"points", 1000}, {"violations", violations}, {"max_deviation_over_bound", worst}};
    o.require(violations == 0, "violations");
    return o;
}

Outcome qpe_tail(std::uint64_t seed) {
    Outcome o;
    constexpr std::size_t l = 6;
    numkit::Rng rng(seed);
    std::map<int, double> worst;
    std::size_t violations = 0;
    for (int k = 0; k < 50; ++k) {
        const double phi = rng.uniform();
        const auto p = qpe::outcome_distribution(phi, l);
        const auto fl = static_cast<std::uint64_t>(std::floor(phi * 64.0)) % 64;
        for (int c = 2; c <= 5; ++c) {
            double tail = 0.0;
            for (std::uint64_t m = 0; m < p.size(); ++m) {
                if (qpe::circular_distance(m, fl, l) > static_cast<std::uint64_t>(c)) tail += p[m];
            }
            const double bound = 1.0 / (2.0 * (c - 1));
            worst[c] = std::max(worst[c], tail / bound);
            if (tail > bound) ++violations;
        }
    }
    json w = json::object();
    for (auto [c, v] : worst) w[std::to_string(c)] = v;
    o.details = {{"phases", 50}, {"violations", violations}, {"max_tail_over_bound", w}};
    o.require(violations == 0, "tail bound");
    return o;
}

Outcome frustfree_ff(std::uint64_t seed) {
    Outcome o;
    const auto t0 = Clock::now();
    double worst = 0.0;
    json rows = json::array();
    std::map<std::pair<std::size_t, std::size_t>, std::map<int, std::size_t>> lbits;
    for (std::size_t n = 2; n <= 3; ++n) {
        for (double T : {100.0, 1000.0}) {
            for (std::size_t L = 1; L <= 4; ++L) {
                for (std::uint64_t s = 0; s < 2; ++s) {
                    const auto h0 = frustff::make_random_ff(n, 2, L, 2, seed + 17 * s + L);
                    const auto es0 = numkit::hermitian_eigendecompose(h0.matrix());
                    double lambda1 = 0.0;
                    for (Eigen::Index k = 0; k < es0.values.size(); ++k) {
                        if (es0.values(k) > 1e-8) {
                            lambda1 = es0.values(k);
                            break;
                        }
                    }
                    const double delta = 1.0 / T;
                    const auto h = lambda1 > 0.0 ? frustff::scaled(h0, std::min(1.0, delta / lambda1)) : h0;
                    const auto es = numkit::hermitian_eigendecompose(h.matrix());
                    numkit::Rng rng(seed + 1000 * s + L);
                    StateVector psi = StateVector::Zero(es.values.size());
                    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
                        if (es.values(k) <= delta) psi += cplx(rng.normal(), rng.normal()) * es.vectors.col(k);
                    }
                    psi.normalize();
                    const auto r = frustff::ff_low_energy_simulate(h, T, delta, 0.3, psi);
                    worst = std::max(worst, r.report.error_measured);
                    lbits[{n, L}][static_cast<int>(T)] = r.report.l_bits;
                    rows.push_back({{"n", n}, {"T", T}, {"L", L}, {"l_bits", r.report.l_bits},
                                    {"error", r.report.error_measured}});
                }
            }
        }
    }
    // l grows by log2(sqrt(10)) per decade of T, up to rounding.
    const double expected = 0.5 * std::log2(10.0);
    double worst_growth = 0.0;
    for (const auto& [key, by_t] : lbits) {
        const double growth = static_cast<double>(by_t.at(1000)) - static_cast<double>(by_t.at(100));
        worst_growth = std::max(worst_growth, std::abs(growth - expected));
    }
    o.details = {{"runs", rows}, {"max_error", worst}, {"expected_l_growth", expected},
                 {"max_growth_deviation", worst_growth}, {"runtime_limit_s", 300}};
    o.require(worst <= 0.3, "error");
    o.require(worst_growth <= 1.0, "l_bits growth");
    o.require(std::chrono::duration<double>(Clock::now() - t0).count() < 300.0, "runtime");
    return o;
}

// d_{j+1}^2 <= (l-1)/l d_j^2, with slack for rounding at the end of the run.
bool contracts(const lieff::JacobiTrace& tr, double scale, double& worst) {
    bool ok = true;
    double prev = tr.d_h_initial;
    const double ll = static_cast<double>(tr.l);
    for (const auto& s : tr.steps) {
        const double allowed = (ll - 1.0) / ll * prev * prev + 1e-12 * scale * prev;
        // With a single root the bound is zero and one rotation must finish the job.
        if (prev > 0.0 && tr.l > 1) worst = std::max(worst, s.d_h * s.d_h / (prev * prev) / ((ll - 1.0) / ll));
        if (s.d_h * s.d_h > allowed) ok = false;
        prev = s.d_h;
    }
    return ok;
}

Outcome contraction(std::uint64_t seed) {
    Outcome o;
    numkit::Rng rng(seed);
    double worst_ratio = 0.0, worst_final = 0.0;
    json rows = json::array();
    for (int k = 0; k < 40; ++k) {
        const bool so = k < 20;
        const std::size_t n = so ? 2 + static_cast<std::size_t>(k % 3) : 2 + static_cast<std::size_t>(k % 5);
        const DenseOperator m = so ? lieff::nambu_matrix(lieff::random_fermion_h(n, rng)) : lieff::random_mode_matrix(n, rng);
        const auto alg = so ? lieff::Algebra::SO2N : lieff::Algebra::SUN;
        const auto jr = lieff::jacobi_diagonalize(m, alg, 1e-10);
        const double fin = max_offdiag_frobenius(jr.m_final);
        worst_final = std::max(worst_final, fin);
        const std::string tag = std::string(so ? "so" : "su") + " n=" + std::to_string(n);
        o.require(contracts(jr.trace, m.norm(), worst_ratio), "contraction " + tag);
        o.require(fin <= 1e-10, "final off-diagonal " + tag);
        o.require(jr.trace.r <= jr.trace.r_budget, "budget " + tag);
        rows.push_back({{"algebra", so ? "so(2n)" : "su(n)"}, {"n", n}, {"r", jr.trace.r}, {"budget", jr.trace.r_budget}});
    }
    o.details = {{"instances", rows}, {"max_ratio_over_bound", worst_ratio}, {"max_final_offdiag", worst_final}};
    return o;
}

Outcome fermion_ff(std::uint64_t seed) {
    Outcome o;
    numkit::Rng rng(seed);
    double worst = 0.0, worst_ph = 0.0;
    std::vector<double> x, y;
    json rows = json::array();
    for (std::size_t n = 2; n <= 4; ++n) {
        const double T = std::pow(4.0, static_cast<double>(n));
        for (int k = 0; k < 2; ++k) {
            const auto h = lieff::random_fermion_h(n, rng);
            const double ph0 = lieff::particle_hole_defect(lieff::nambu_matrix(h));
            worst_ph = std::max(worst_ph, ph0);
            if (ph0 > 1e-12) {
                o.require(false, "PH symmetry of the input Nambu matrix, n=" + std::to_string(n));
                continue;
            }
            for (double t : {1.0, T}) {
                const auto r = lieff::fermionic_ff_circuit(h, t, T, 1e-6, seed + n);
                worst = std::max(worst, r.report.error_measured);
                worst_ph = std::max(worst_ph, r.report.max_ph_defect);
                x.push_back(static_cast<double>(n * n) * std::log(T));
                y.push_back(static_cast<double>(r.report.counts.raw_gates));
                rows.push_back({{"n", n}, {"t", t}, {"T", T}, {"r", r.report.r}, {"raw", r.report.counts.raw_gates},
                                {"elementary", r.report.counts.elementary_count}, {"error", r.report.error_measured}});
            }
        }
    }
    const auto fit = report::fit_linear(x, y);
    o.details = {{"runs", rows}, {"max_error", worst}, {"max_ph_defect", worst_ph},
                 {"fit", {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}}}};
    o.require(worst <= 1e-6, "Fock error");
    o.require(fit.r2 >= 0.95, "count fit");
    o.require(worst_ph <= 1e-12, "PH symmetry");
    return o;
}

Outcome boson_ff(std::uint64_t seed) {
    Outcome o;
    numkit::Rng rng(seed);
    constexpr double T = 1000.0;
    double worst = 0.0;
    json rows = json::array();
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto a = lieff::random_mode_matrix(3, rng);
        const auto r = lieff::bosonic_ff_circuit(a, T, m, T, 1e-6, seed + m);
        worst = std::max(worst, r.report.error_measured);
        // alpha = I: e^{-itm} on the whole sector, no rotations.
        const auto id = lieff::bosonic_ff_circuit(DenseOperator::Identity(3, 3), T, m, T, 1e-6, seed + m);
        const DenseOperator u = lieff::sector_unitary(id.circuit, m);
        const cplx phase = std::exp(cplx(0.0, -T * static_cast<double>(m)));
        const double pure = (u - phase * DenseOperator::Identity(u.rows(), u.cols())).norm();
        o.require(id.report.r == 0, "identity needs no rotations");
        o.require(pure <= 1e-6, "identity phase m=" + std::to_string(m));
        rows.push_back({{"m", m}, {"r", r.report.r}, {"error", r.report.error_measured}, {"identity_phase_error", pure}});
    }
    o.details = {{"runs", rows}, {"max_error", worst}};
    o.require(worst <= 1e-6, "sector error");
    return o;
}

Outcome energy_round_trip(std::uint64_t seed) {
    Outcome o;
    constexpr double kAlpha = 2.0;
    numkit::Rng rng(seed);
    std::vector<DenseOperator> hs{circuits::pauli_z() * 0.5};
    for (int k = 0; k < 5; ++k) {
        DenseOperator h = numkit::random_hermitian(4, rng);
        hs.push_back(h * (rng.uniform(0.5, 1.0) / numkit::spectral_norm(h)));
    }
    json rows = json::array();
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const auto r = energymeas::equivalence_report(hs[k], 6, 4, 5.0, kAlpha, seed + k, 50);
        const std::string tag = " instance " + std::to_string(k);
        o.require(r.forward.delta_e == 8.0 * kPi / 64.0, "deltaE" + tag);
        o.require(r.confidence_measured >= 0.75 && r.confidence_dense >= 0.75, "confidence" + tag);
        o.require(r.backward_error_measured <= r.backward_error_bound, "backward error" + tag);
        rows.push_back({{"confidence", r.confidence_measured},
                        {"confidence_circuit", r.confidence_dense},
                        {"eta", r.forward.eta},
                        {"deltaE", r.forward.delta_e},
                        {"error_bound", r.backward_error_bound},
                        {"error_measured", r.backward_error_measured}});
    }
    o.details = {{"alpha", kAlpha}, {"instances", rows}};
    return o;
}

struct Entry {
    int id;
    const char* name;
    Check check;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r = {
        {1, "schur-unitarity-blocks", schur_unitarity},
        {2, "schur-count-scaling", schur_scaling},
        {3, "permutation-invariant-ff", perm_ff},
        {4, "gap-amplification", gap_amplification},
        {5, "delta-rule", delta_rule},
        {6, "qpe-tail-bound", qpe_tail},
        {7, "frustration-free-ff", frustfree_ff},
        {8, "jacobi-contraction", contraction},
        {9, "fermionic-ff", fermion_ff},
        {10, "bosonic-ff", boson_ff},
        {11, "energy-measurement-round-trip", energy_round_trip},
    };
    return r;
}

bool selected(const VerifyOptions& opt, int id) { return opt.only.empty() || opt.only.count(id) > 0; }

std::vector<CriterionResult> run_checks(const VerifyOptions& opt) {
    std::vector<CriterionResult> out;
    for (const auto& e : registry()) {
        if (!selected(opt, e.id)) continue;
        CriterionResult res;
        res.id = e.id;
        res.name = e.name;
        const auto t0 = Clock::now();
        // Each criterion draws from its own stream so selections do not shift seeds.
        const std::uint64_t seed = opt.seed * 1000ULL + static_cast<std::uint64_t>(e.id);
        try {
            auto o = e.check(seed);
            res.passed = o.passed;
            res.details = std::move(o.details);
        } catch (const Error& err) {
            res.passed = false;
            res.details = {{"error", err.what()}};
        }
        res.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    return out;
}

json results_json(std::uint64_t seed, const std::vector<CriterionResult>& rs) {
    json crit = json::array();
    bool all = true;
    for (const auto& r : rs) {
        crit.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"details", r.details}});
        all = all && r.passed;
    }
    return {{"seed", seed}, {"version", report::kVersion}, {"criteria", crit}, {"all_passed", all}};
}

class CorruptionGuard {
public:
    explicit CorruptionGuard(bool on) : on_(on) {
        if (on_) lieff::set_nambu_corruption(true);
    }
    ~CorruptionGuard() {
        if (on_) lieff::set_nambu_corruption(false);
    }
    CorruptionGuard(const CorruptionGuard&) = delete;
    CorruptionGuard& operator=(const CorruptionGuard&) = delete;

private:
    bool on_;
};

}  // namespace

bool VerifyOutput::all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

json VerifyOutput::report() const { return results_json(seed, results); }

json VerifyOutput::timing() const {
    json t = json::array();
    for (const auto& r : results) t.push_back({{"id", r.id}, {"wall_time_ms", r.wall_ms}});
    return {{"seed", seed}, {"criteria", t}};
}

std::string VerifyOutput::summary() const {
    std::ostringstream os;
    for (const auto& r : results) {
        os << "criterion " << r.id << " [" << r.name << "]: " << (r.passed ? "PASS" : "FAIL");
        if (!r.passed && r.details.contains("error")) os << " (" << r.details["error"].get<std::string>() << ")";
        if (!r.passed && r.details.contains("failures")) os << " (" << r.details["failures"].dump() << ")";
        os << '\n';
    }
    return os.str();
}

VerifyOutput verify_all(const VerifyOptions& options) {
    CorruptionGuard guard(options.corrupt_nambu);
    VerifyOutput out;
    out.seed = options.seed;
    out.results = run_checks(options);
    if (selected(options, 12)) {
        // Re-run everything selected and compare the serialized reports.
        CriterionResult det;
        det.id = 12;
        det.name = "determinism";
        const auto t0 = Clock::now();
        const auto again = run_checks(options);
        const std::string a = results_json(options.seed, out.results).dump();
        const std::string b = results_json(options.seed, again).dump();
        det.passed = a == b;
        det.details = {{"compared_bytes", a.size()}, {"identical", a == b}};
        det.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        out.results.push_back(std::move(det));
    }
    return out;
}

}  // namespace ffsim::verify
