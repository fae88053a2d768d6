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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ffsim/error.hpp"
#include "ffsim/report.hpp"
#include "ffsim/verify.hpp"

#ifndef FFSIM_CLI_PATH
#error "FFSIM_CLI_PATH must point at the ffsim executable"
#endif

namespace ffsim {
namespace {

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(FFSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "ffsim_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::ParseError;
}

TEST(Fit, PowerLawExact) {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(3.0 * v * v * v);
    const auto f = report::fit_power_law(x, y);
    EXPECT_NEAR(f.exponent, 3.0, 1e-12);
    EXPECT_NEAR(f.prefactor, 3.0, 1e-11);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Fit, LinearWithNoise) {
    const auto f = report::fit_linear({0, 1, 2, 3}, {1, 3, 5, 7});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r2, 1.0, 1e-14);
    // Hand-computed: x = 0..3, y = (0, 2, 1, 3): slope 0.8, R^2 = 0.64.
    const auto g = report::fit_linear({0, 1, 2, 3}, {0, 2, 1, 3});
    EXPECT_NEAR(g.slope, 0.8, 1e-14);
    EXPECT_NEAR(g.r2, 0.64, 1e-14);
}

TEST(Config, Parsing) {
    EXPECT_EQ(report::parse_range("2..5"), (std::pair<std::size_t, std::size_t>{2, 5}));
    EXPECT_EQ(report::parse_range("3"), (std::pair<std::size_t, std::size_t>{3, 3}));
    EXPECT_EQ(kind_of([] { report::parse_range("a..b"); }), ErrorKind::ConfigInvalid);
    EXPECT_EQ(kind_of([] { report::pipeline_from_string("nope"); }), ErrorKind::ConfigInvalid);
    for (auto p : {report::Pipeline::Schur, report::Pipeline::PermFF, report::Pipeline::FrustFreeFF,
                   report::Pipeline::FermionFF, report::Pipeline::BosonFF, report::Pipeline::EnergyEquiv}) {
        EXPECT_EQ(report::pipeline_from_string(report::to_string(p)), p);
    }
}

TEST(Config, EmptyRangeRejected) {
    report::ExperimentConfig cfg;
    cfg.n_min = 3;
    cfg.n_max = 2;
    EXPECT_EQ(kind_of([&] { report::run(cfg); }), ErrorKind::ConfigInvalid);
}

TEST(Run, SchurFitAndDeterminism) {
    report::ExperimentConfig cfg;
    cfg.pipeline = report::Pipeline::Schur;
    cfg.n_min = 1;
    cfg.n_max = 5;
    cfg.seed = 4;
    const auto a = report::run(cfg);
    const auto b = report::run(cfg);
    EXPECT_EQ(a.report.dump(), b.report.dump());
    EXPECT_LE(a.report["scaling_fit"]["count_vs_n"]["exponent"].get<double>(), 3.5);
    for (const auto& r : a.report["records"]) {
        EXPECT_LE(r["unitarity_defect"].get<double>(), 1e-9);
        EXPECT_EQ(r["provenance"]["seed"], 4);
    }
    EXPECT_EQ(a.csv.substr(0, 8), "n,count\n");
}

TEST(Run, FermionCountsFollowNSquaredLogT) {
    report::ExperimentConfig cfg;
    cfg.pipeline = report::Pipeline::FermionFF;
    cfg.n_min = 2;
    cfg.n_max = 4;
    const auto out = report::run(cfg);
    for (const auto& r : out.report["records"]) EXPECT_LE(r["error"].get<double>(), cfg.epsilon);
    EXPECT_GE(out.report["scaling_fit"]["count_vs_n2_log_T"]["r2"].get<double>(), 0.9);
}

TEST(Run, PipelineFailureCarriesModuleError) {
    report::ExperimentConfig cfg;
    cfg.pipeline = report::Pipeline::EnergyEquiv;
    cfg.n_min = cfg.n_max = 1;
    cfg.t = {5.0};
    try {
        report::run(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PipelineFailure);
        EXPECT_NE(std::string(e.what()).find("HorizonExceeded"), std::string::npos);
    }
}

TEST(Verify, SelectedCriteria) {
    verify::VerifyOptions opt;
    opt.only = {5, 6, 12};
    const auto out = verify::verify_all(opt);
    ASSERT_EQ(out.results.size(), 3u);
    EXPECT_TRUE(out.all_passed()) << out.summary();
}

TEST(Verify, CorruptedNambuFailsLoudly) {
    verify::VerifyOptions opt;
    opt.only = {9};
    opt.corrupt_nambu = true;
    const auto out = verify::verify_all(opt);
    ASSERT_EQ(out.results.size(), 1u);
    EXPECT_FALSE(out.results[0].passed);
    EXPECT_NE(out.summary().find("PH symmetry"), std::string::npos);
    // The hook is scoped to the call.
    opt.corrupt_nambu = false;
    EXPECT_TRUE(verify::verify_all(opt).all_passed());
}

TEST(Cli, ExitCodes) {
    const auto out = scratch("schur.json");
    EXPECT_EQ(run_cli("run --pipeline schur --n 1..3 --seed 1 --out " + out.string()), 0);
    EXPECT_TRUE(std::filesystem::exists(out.string() + ".csv"));
    EXPECT_TRUE(std::filesystem::exists(out.string() + ".timing.json"));
    EXPECT_EQ(run_cli("run --pipeline schur --n 3..2 --out " + out.string()), 1);
    EXPECT_EQ(run_cli("run --pipeline bogus --n 1 --out " + out.string()), 1);
    EXPECT_EQ(run_cli("run --pipeline energy-equiv --n 1 --t 5 --out " + out.string()), 2);
    EXPECT_EQ(run_cli("verify --only 13"), 1);
    EXPECT_EQ(run_cli("verify --only 9 --test-hook corrupt-nambu"), 2);
}

TEST(Cli, DeskCapOverride) {
    const auto out = scratch("cap.json");
    EXPECT_EQ(run_cli("run --pipeline perm-ff --n 7 --t 1 --out " + out.string()), 1);
    EXPECT_EQ(run_cli("run --pipeline perm-ff --n 7 --t 1 --out " + out.string(), "FFSIM_DESK_CAP=off"), 0);
}

TEST(Cli, RunIsByteIdentical) {
    const auto a = scratch("a.json"), b = scratch("b.json");
    ASSERT_EQ(run_cli("run --pipeline boson-ff --n 2..3 --seed 9 --out " + a.string()), 0);
    ASSERT_EQ(run_cli("run --pipeline boson-ff --n 2..3 --seed 9 --out " + b.string()), 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a.string() + ".csv"), slurp(b.string() + ".csv"));
}

}  // namespace
}  // namespace ffsim
