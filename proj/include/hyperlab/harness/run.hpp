// Copyright 2026 The Hyperlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Scenario execution: experiments in declared order, one report, one exit code.

#pragma once

#include <chrono>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/harness/ops.hpp"
#include "hyperlab/harness/report.hpp"
#include "hyperlab/harness/scenario.hpp"

namespace hyperlab {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitError = 2 };

struct RunOutcome {
  Report report;
  // "experiment: message" for experiments that raised.
  std::vector<std::string> errors;
  std::vector<std::pair<std::string, std::string>> files;
  // Wall time per experiment; kept out of the report so output stays deterministic.
  std::vector<std::pair<std::string, double>> seconds;

  int exit_code() const {
    if (!errors.empty()) {
      return kExitError;
    }
    return report.all_pass() ? kExitPass : kExitCheckFailed;
  }
};

// Runs every experiment. An experiment that raises contributes no rows and
// an error; the others still run.
inline RunOutcome run_scenario(const Scenario& scenario, std::ostream* log = nullptr) {
  RunContext ctx(scenario);
  RunOutcome out;
  for (const auto& e : scenario.experiments) {
    auto t0 = std::chrono::steady_clock::now();
    struct Timer {
      RunOutcome& out;
      const std::string& name;
      std::chrono::steady_clock::time_point t0;
      ~Timer() {
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        out.seconds.emplace_back(name, dt.count());
      }
    } timer{out, e.name, t0};
    try {
      OpResult r = run_experiment(ctx, e);
      if (log) {
        std::size_t bad = 0;
        for (const auto& row : r.rows) {
          bad += row.pass ? 0 : 1;
        }
        *log << e.name << ": " << r.rows.size() << " rows"
             << (bad ? ", " + std::to_string(bad) + " failed" : std::string()) << "\n";
      }
      out.report.append(r.rows);
      for (auto& f : r.files) {
        out.files.push_back(std::move(f));
      }
    } catch (const Error& err) {
      out.errors.push_back(e.name + ": " + err.what());
      if (log) {
        *log << e.name << ": error: " << err.what() << "\n";
      }
    } catch (const nlohmann::json::exception& err) {
      out.errors.push_back(e.name + ": bad parameter: " + err.what());
      if (log) {
        *log << e.name << ": error: " << err.what() << "\n";
      }
    }
  }
  return out;
}

// Writes <dir>/<stem>.csv, <dir>/<stem>.json and any side files.
inline void emit_outcome(const RunOutcome& outcome, const std::filesystem::path& dir,
                         const std::string& stem) {
  emit_report(outcome.report, dir, stem);
  for (const auto& [name, text] : outcome.files) {
    write_file(dir / name, text);
  }
}

}  // namespace hyperlab
