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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Experiment runner: builds instances for one pipeline over a range of n,
// records counts and measured errors, and fits scaling laws.
namespace ffsim::report {

inline constexpr const char* kVersion = "1.0.0";

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r2 = 0.0;
};

/// Least squares of log y against log x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

enum class Pipeline { Schur, PermFF, FrustFreeFF, FermionFF, BosonFF, EnergyEquiv };

std::string to_string(Pipeline p);
Pipeline pipeline_from_string(const std::string& s);

struct ExperimentConfig {
    Pipeline pipeline = Pipeline::Schur;
    std::size_t n_min = 1;
    std::size_t n_max = 0;           // empty range is rejected
    std::vector<double> t;           // evolution times; empty means the pipeline default
    double horizon = 0.0;            // T; zero means the pipeline default
    double epsilon = 1e-6;
    double alpha = 1.0;              // energy-equiv only
    std::uint64_t seed = 0;
};

/// Throws ConfigInvalid.
void validate(const ExperimentConfig& config);

/// Parses "a..b" or a single integer.
std::pair<std::size_t, std::size_t> parse_range(const std::string& s);

struct RunOutput {
    nlohmann::json report;   // deterministic under the seed
    std::string csv;         // scaling table
    nlohmann::json timing;   // wall times, kept apart from the report
};

/// Throws ConfigInvalid, or PipelineFailure carrying the module error text.
RunOutput run(const ExperimentConfig& config);

nlohmann::json config_json(const ExperimentConfig& config);

}  // namespace ffsim::report
