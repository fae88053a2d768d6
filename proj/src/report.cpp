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

#include "ffsim/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "ffsim/blockff.hpp"
#include "ffsim/circuits.hpp"
#include "ffsim/energymeas.hpp"
#include "ffsim/error.hpp"
#include "ffsim/frustff.hpp"
#include "ffsim/lieff.hpp"
#include "ffsim/schur.hpp"

namespace ffsim::report {

using nlohmann::json;

namespace {

struct Caps {
    std::size_t lo, hi;
};

Caps desk_caps(Pipeline p) {
    switch (p) {
        case Pipeline::Schur: return {1, 8};
        case Pipeline::PermFF: return {1, 6};
        case Pipeline::FrustFreeFF: return {2, 4};
        case Pipeline::FermionFF: return {1, 5};
        case Pipeline::BosonFF: return {1, 4};
        case Pipeline::EnergyEquiv: return {1, 3};
    }
    return {1, 1};
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, "cli", msg); }

json counts_json(const circuits::GateCount& c) {
    return {{"raw", c.raw_gates}, {"elementary", c.elementary_count}};
}

std::uint64_t sub_seed(std::uint64_t seed, std::size_t n, std::size_t k) { return seed * 1000003ULL + n * 101ULL + k; }

std::vector<double> times_for(const ExperimentConfig& cfg, std::vector<double> fallback) {
    return cfg.t.empty() ? std::move(fallback) : cfg.t;
}

double horizon_for(const ExperimentConfig& cfg, double fallback) { return cfg.horizon > 0.0 ? cfg.horizon : fallback; }

struct Collected {
    json records = json::array();
    json timing = json::array();
    std::vector<double> n_values, counts, n2_log_t;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void run_schur(const ExperimentConfig& cfg, Collected& out) {
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        const auto t0 = Clock::now();
        const auto cnt = circuits::count(schur::build_schur_transform(n));
        const double ud = numkit::unitarity_defect(schur::schur_matrix(n));
        numkit::Rng rng(sub_seed(cfg.seed, n, 0));
        const auto ex = schur::extract_blocks(schur::random_permutation_invariant(n, rng), n);
        out.records.push_back({{"n", n}, {"counts", counts_json(cnt)}, {"unitarity_defect", ud},
                               {"off_block_norm", ex.off_block_norm}, {"path_spread", ex.path_spread}});
        out.timing.push_back({{"n", n}, {"wall_time_ms", ms_since(t0)}});
        out.n_values.push_back(static_cast<double>(n));
        out.counts.push_back(static_cast<double>(cnt.elementary_count));
    }
}

void run_perm(const ExperimentConfig& cfg, Collected& out) {
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        const auto h = schur::build_lmg(n, 0.5, 0.3);
        const double p2 = std::ldexp(1.0, static_cast<int>(n));
        std::size_t worst = 0;
        for (double t : times_for(cfg, {1.0, p2, p2 * p2})) {
            const auto t0 = Clock::now();
            const auto r = blockff::fast_forward_permutation_invariant(h, n, t, cfg.epsilon, sub_seed(cfg.seed, n, 0));
            out.records.push_back({{"n", n}, {"t", t}, {"counts", counts_json(r.report.counts)},
                                   {"error", r.report.max_error_measured}, {"ancilla_width", r.report.ancilla_width},
                                   {"modeled_ancillas", r.report.modeled_ancillas}});
            out.timing.push_back({{"n", n}, {"t", t}, {"wall_time_ms", ms_since(t0)}});
            worst = std::max(worst, r.report.counts.elementary_count);
        }
        out.n_values.push_back(static_cast<double>(n));
        out.counts.push_back(static_cast<double>(worst));
    }
}

void run_frustfree(const ExperimentConfig& cfg, Collected& out) {
    const double horizon = horizon_for(cfg, 100.0);
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        const std::size_t L = n;
        const auto h0 = frustff::make_random_ff(n, 2, L, 2, sub_seed(cfg.seed, n, 0));
        const double delta = 1.0 / horizon;
        const auto es0 = numkit::hermitian_eigendecompose(h0.matrix());
        double lambda1 = 0.0;
        for (Eigen::Index k = 0; k < es0.values.size(); ++k) {
            if (es0.values(k) > 1e-8) {
                lambda1 = es0.values(k);
                break;
            }
        }
        const auto h = lambda1 > 0.0 ? frustff::scaled(h0, std::min(1.0, delta / lambda1)) : h0;
        const auto es = numkit::hermitian_eigendecompose(h.matrix());
        numkit::Rng rng(sub_seed(cfg.seed, n, 1));
        StateVector psi = StateVector::Zero(es.values.size());
        for (Eigen::Index k = 0; k < es.values.size(); ++k) {
            if (es.values(k) <= delta) psi += cplx(rng.normal(), rng.normal()) * es.vectors.col(k);
        }
        psi.normalize();
        std::size_t worst = 0;
        for (double t : times_for(cfg, {horizon})) {
            const auto t0 = Clock::now();
            frustff::SimulateOptions opt;
            opt.horizon = horizon;
            const auto r = frustff::ff_low_energy_simulate(h, t, delta, cfg.epsilon, psi, opt);
            out.records.push_back({{"n", n}, {"t", t}, {"horizon", horizon}, {"L", L}, {"l_bits", r.report.l_bits},
                                   {"reps", r.report.reps}, {"w_uses", r.report.w_uses},
                                   {"symbolic_cost", r.report.symbolic_cost}, {"error", r.report.error_measured}});
            out.timing.push_back({{"n", n}, {"t", t}, {"wall_time_ms", ms_since(t0)}});
            worst = std::max(worst, r.report.w_uses);
        }
        out.n_values.push_back(static_cast<double>(n));
        out.counts.push_back(static_cast<double>(worst));
    }
}

void run_quadratic(const ExperimentConfig& cfg, Collected& out, bool bosons) {
    constexpr std::size_t kBosons = 2;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        const double horizon = horizon_for(cfg, bosons ? 1000.0 : std::pow(4.0, static_cast<double>(n)));
        numkit::Rng rng(sub_seed(cfg.seed, n, 0));
        lieff::QuadraticFermionH fh;
        DenseOperator alpha;
        if (bosons) {
            alpha = lieff::random_mode_matrix(n, rng);
        } else {
            fh = lieff::random_fermion_h(n, rng);
        }
        std::size_t worst = 0;
        for (double t : times_for(cfg, bosons ? std::vector<double>{horizon} : std::vector<double>{1.0, horizon})) {
            const auto t0 = Clock::now();
            const auto r = bosons ? lieff::bosonic_ff_circuit(alpha, t, kBosons, horizon, cfg.epsilon, sub_seed(cfg.seed, n, 1))
                                  : lieff::fermionic_ff_circuit(fh, t, horizon, cfg.epsilon, sub_seed(cfg.seed, n, 1));
            json rec = {{"n", n}, {"t", t}, {"horizon", horizon}, {"counts", counts_json(r.report.counts)},
                        {"unit_cost_count", r.report.unit_cost_count}, {"iterations", r.report.r},
                        {"iteration_budget", r.report.r_budget}, {"error", r.report.error_measured},
                        {"max_ph_defect", r.report.max_ph_defect}};
            if (bosons) rec["m"] = kBosons;
            out.records.push_back(std::move(rec));
            out.timing.push_back({{"n", n}, {"t", t}, {"wall_time_ms", ms_since(t0)}});
            worst = std::max(worst, r.report.counts.raw_gates);
        }
        out.n_values.push_back(static_cast<double>(n));
        out.counts.push_back(static_cast<double>(worst));
        out.n2_log_t.push_back(static_cast<double>(n * n) * std::log(horizon));
    }
}

void run_energy(const ExperimentConfig& cfg, Collected& out) {
    constexpr std::size_t kBits = 6;
    constexpr int kC = 4;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        numkit::Rng rng(sub_seed(cfg.seed, n, 0));
        DenseOperator h = numkit::random_hermitian(std::size_t{1} << n, rng);
        h /= numkit::spectral_norm(h);
        std::size_t gates = 0;
        for (double t : times_for(cfg, {1.0})) {
            const auto t0 = Clock::now();
            const auto r = energymeas::equivalence_report(h, kBits, kC, t, cfg.alpha, sub_seed(cfg.seed, n, 1));
            out.records.push_back(
                {{"n", n},
                 {"t", t},
                 {"forward", {{"eta", r.forward.eta}, {"deltaE", r.forward.delta_e}, {"xi", r.forward.xi},
                              {"G", r.forward.gates}, {"confidence_measured", r.confidence_measured}}},
                 {"backward", {{"horizon", r.backward_horizon}, {"error_bound", r.backward_error_bound},
                               {"error_measured", r.backward_error_measured}, {"gates", r.backward_gates}}}});
            out.timing.push_back({{"n", n}, {"t", t}, {"wall_time_ms", ms_since(t0)}});
            gates = r.forward.gates;
        }
        out.n_values.push_back(static_cast<double>(n));
        out.counts.push_back(static_cast<double>(gates));
    }
}

json power_json(const PowerLawFit& f) { return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"r2", f.r2}}; }

}  // namespace

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    const auto lin = fit_linear(lx, ly);
    return {lin.slope, std::exp(lin.intercept), lin.r2};
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return {};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return {0.0, my, 0.0};
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // A perfectly flat response is fit exactly.
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

std::string to_string(Pipeline p) {
    switch (p) {
        case Pipeline::Schur: return "schur";
        case Pipeline::PermFF: return "perm-ff";
        case Pipeline::FrustFreeFF: return "frustfree-ff";
        case Pipeline::FermionFF: return "fermion-ff";
        case Pipeline::BosonFF: return "boson-ff";
        case Pipeline::EnergyEquiv: return "energy-equiv";
    }
    return "?";
}

Pipeline pipeline_from_string(const std::string& s) {
    for (auto p : {Pipeline::Schur, Pipeline::PermFF, Pipeline::FrustFreeFF, Pipeline::FermionFF, Pipeline::BosonFF,
                   Pipeline::EnergyEquiv}) {
        if (to_string(p) == s) return p;
    }
    invalid("unknown pipeline '" + s + "'");
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
    const auto dots = s.find("..");
    auto num = [&](const std::string& part) -> std::size_t {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) invalid("bad n range '" + s + "'");
        return static_cast<std::size_t>(std::stoull(part));
    };
    if (dots == std::string::npos) {
        const auto v = num(s);
        return {v, v};
    }
    return {num(s.substr(0, dots)), num(s.substr(dots + 2))};
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.n_max < cfg.n_min) invalid("empty n range");
    if (!(cfg.epsilon > 0.0)) invalid("eps must be positive");
    if (cfg.horizon < 0.0) invalid("T must be non-negative");
    if (!(cfg.alpha > 0.0)) invalid("alpha must be positive");
    for (double t : cfg.t) {
        if (!(t > 0.0) || !std::isfinite(t)) invalid("times must be positive");
    }
    const auto caps = desk_caps(cfg.pipeline);
    if (cfg.n_min < caps.lo) invalid("n below the pipeline minimum of " + std::to_string(caps.lo));
    if (desk_cap_enabled() && cfg.n_max > caps.hi) {
        invalid("n above the desk-scale cap of " + std::to_string(caps.hi) + " (set FFSIM_DESK_CAP=off to lift)");
    }
}

json config_json(const ExperimentConfig& cfg) {
    return {{"pipeline", to_string(cfg.pipeline)}, {"n_min", cfg.n_min}, {"n_max", cfg.n_max}, {"t", cfg.t},
            {"horizon", cfg.horizon}, {"epsilon", cfg.epsilon}, {"alpha", cfg.alpha}, {"seed", cfg.seed}};
}

RunOutput run(const ExperimentConfig& cfg) {
    validate(cfg);
    Collected c;
    try {
        switch (cfg.pipeline) {
            case Pipeline::Schur: run_schur(cfg, c); break;
            case Pipeline::PermFF: run_perm(cfg, c); break;
            case Pipeline::FrustFreeFF: run_frustfree(cfg, c); break;
            case Pipeline::FermionFF: run_quadratic(cfg, c, false); break;
            case Pipeline::BosonFF: run_quadratic(cfg, c, true); break;
            case Pipeline::EnergyEquiv: run_energy(cfg, c); break;
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigInvalid) throw;
        throw Error(ErrorKind::PipelineFailure, "cli", to_string(cfg.pipeline) + " failed: " + e.what());
    }

    RunOutput out;
    json fit = {{"count_vs_n", power_json(fit_power_law(c.n_values, c.counts))}};
    if (!c.n2_log_t.empty()) {
        const auto lin = fit_linear(c.n2_log_t, c.counts);
        fit["count_vs_n2_log_T"] = {{"slope", lin.slope}, {"intercept", lin.intercept}, {"r2", lin.r2}};
    }
    for (auto& r : c.records) r["provenance"] = {{"seed", cfg.seed}, {"version", kVersion}};
    out.report = {{"config", config_json(cfg)}, {"records", c.records}, {"scaling_fit", fit}};
    out.timing = {{"config", config_json(cfg)}, {"records", c.timing}};

    std::ostringstream csv;
    csv.precision(17);
    csv << "n,count\n";
    for (std::size_t i = 0; i < c.n_values.size(); ++i) csv << c.n_values[i] << ',' << c.counts[i] << '\n';
    out.csv = csv.str();
    return out;
}

}  // namespace ffsim::report
