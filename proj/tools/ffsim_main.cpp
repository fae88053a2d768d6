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

// ffsim command-line front end.
//
//   ffsim run --pipeline schur --n 1..5 --seed 1 --out schur.json
//   ffsim verify --seed 42 [--out report.json] [--only 1,2,3]
//
// Exit codes: 0 pass, 1 configuration error, 2 criterion or pipeline failure.

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ffsim/error.hpp"
#include "ffsim/report.hpp"
#include "ffsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailure = 2;

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << text;
    return static_cast<bool>(f);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ffsim: fast-forwarding circuit constructions and their desk-scale checks"};
    app.require_subcommand(1);

    std::string pipeline, n_range, out_path;
    std::vector<double> times;
    double horizon = 0.0, eps = 1e-6, alpha = 1.0;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "run one pipeline over a range of n");
    run->add_option("--pipeline", pipeline, "schur|perm-ff|frustfree-ff|fermion-ff|boson-ff|energy-equiv")->required();
    run->add_option("--n", n_range, "n range a..b")->required();
    run->add_option("--t", times, "evolution times, comma separated")->delimiter(',');
    run->add_option("--T", horizon, "horizon T (pipeline default when omitted)");
    run->add_option("--eps", eps, "target error");
    run->add_option("--alpha", alpha, "energy-equiv horizon constant");
    run->add_option("--seed", seed, "random seed");
    run->add_option("--out", out_path, "report path; CSV and timing files are written beside it")->required();

    std::uint64_t vseed = 42;
    std::string vout, hook;
    std::vector<int> only;
    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    ver->add_option("--seed", vseed, "random seed");
    ver->add_option("--out", vout, "write the JSON report here");
    ver->add_option("--only", only, "criterion ids, comma separated")->delimiter(',');
    ver->add_option("--test-hook", hook, "corrupt-nambu: negative check")->check(CLI::IsMember({"corrupt-nambu"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*run) {
        try {
            ffsim::report::ExperimentConfig cfg;
            cfg.pipeline = ffsim::report::pipeline_from_string(pipeline);
            std::tie(cfg.n_min, cfg.n_max) = ffsim::report::parse_range(n_range);
            cfg.t = times;
            cfg.horizon = horizon;
            cfg.epsilon = eps;
            cfg.alpha = alpha;
            cfg.seed = seed;
            const auto result = ffsim::report::run(cfg);
            if (!write_file(out_path, dump(result.report)) || !write_file(out_path + ".csv", result.csv) ||
                !write_file(out_path + ".timing.json", dump(result.timing))) {
                std::cerr << "ffsim: cannot write " << out_path << "\n";
                return kExitConfig;
            }
            std::cout << "wrote " << out_path << "\n";
            return kExitOk;
        } catch (const ffsim::Error& e) {
            std::cerr << "ffsim: " << e.what() << "\n";
            return e.kind() == ffsim::ErrorKind::ConfigInvalid ? kExitConfig : kExitFailure;
        }
    }

    ffsim::verify::VerifyOptions opt;
    opt.seed = vseed;
    for (int id : only) {
        if (id < 1 || id > ffsim::verify::kNumCriteria) {
            std::cerr << "ffsim: unknown criterion " << id << "\n";
            return kExitConfig;
        }
        opt.only.insert(id);
    }
    opt.corrupt_nambu = hook == "corrupt-nambu";
    const auto result = ffsim::verify::verify_all(opt);
    std::cout << result.summary();
    if (!vout.empty()) {
        if (!write_file(vout, dump(result.report())) || !write_file(vout + ".timing.json", dump(result.timing()))) {
            std::cerr << "ffsim: cannot write " << vout << "\n";
            return kExitConfig;
        }
    }
    return result.all_passed() ? kExitOk : kExitFailure;
}
