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

// Acceptance driver: runs `ffsim verify --seed 42` twice through the real
// executable, prints one line per criterion and checks the negative hook.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#ifndef FFSIM_CLI_PATH
#error "FFSIM_CLI_PATH must point at the ffsim executable"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FFSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main() {
    const auto dir = std::filesystem::temp_directory_path() / "ffsim_acceptance";
    std::filesystem::create_directories(dir);
    const auto first = dir / "verify_a.json";
    const auto second = dir / "verify_b.json";

    const int code_a = run("verify --seed 42 --out " + first.string());
    const int code_b = run("verify --seed 42 --out " + second.string());
    const std::string a = slurp(first);
    const std::string b = slurp(second);
    if (a.empty()) {
        std::cout << "FAIL: no report produced (exit " << code_a << ")\n";
        return 1;
    }
    const auto report = nlohmann::json::parse(a);

    bool all = true;
    for (const auto& c : report["criteria"]) {
        bool ok = c["passed"].get<bool>();
        const int id = c["id"].get<int>();
        std::string note;
        if (id == 12) {
            // In-process rerun plus two separate processes.
            const bool same = a == b && code_a == code_b;
            ok = ok && same;
            note = same ? " (reports byte-identical across processes)" : " (reports differ across processes)";
        }
        all = all && ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << c["name"].get<std::string>() << note
                  << "\n";
    }
    if (report["criteria"].size() != 12) {
        std::cout << "FAIL  expected 12 criteria, got " << report["criteria"].size() << "\n";
        all = false;
    }

    // Negative check: the corrupted Nambu convention must be caught.
    const auto neg = dir / "verify_corrupt.json";
    const int code_neg = run("verify --seed 42 --only 9 --test-hook corrupt-nambu --out " + neg.string());
    const auto neg_report = nlohmann::json::parse(slurp(neg));
    const bool caught = code_neg == 2 && !neg_report["criteria"][0]["passed"].get<bool>() &&
                        neg_report["criteria"][0]["details"].dump().find("PH symmetry") != std::string::npos;
    std::cout << (caught ? "PASS" : "FAIL") << "  negative check: corrupted Nambu convention is rejected\n";
    all = all && caught;

    std::cout << (all ? "acceptance: all criteria pass" : "acceptance: FAILURES") << "\n";
    return all && code_a == 0 ? 0 : 1;
}
