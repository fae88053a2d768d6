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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ffsim::verify {

struct VerifyOptions {
    std::uint64_t seed = 42;
    std::set<int> only;          // empty runs everything
    bool corrupt_nambu = false;  // test hook for the negative check
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    nlohmann::json details;
    double wall_ms = 0.0;
};

struct VerifyOutput {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> results;

    bool all_passed() const;
    nlohmann::json report() const;  // deterministic
    nlohmann::json timing() const;
    std::string summary() const;    // one line per criterion
};

inline constexpr int kNumCriteria = 12;

VerifyOutput verify_all(const VerifyOptions& options);

}  // namespace ffsim::verify
