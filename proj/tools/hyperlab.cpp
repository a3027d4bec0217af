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


// hyperlab command line. Single-op subcommands build one experiment from
// their flags and run it like a one-line scenario; `run` executes a scenario
// file and `verify` the bundled suite.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperlab/hyperlab.hpp"
#include "json.hpp"

namespace {

using hyperlab::ConfigError;
using hyperlab::Experiment;
using hyperlab::RunOutcome;
using hyperlab::Scenario;
using nlohmann::json;

struct Globals {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

// A flag that lands in the experiment parameters under `key`.
struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

struct OpCommand {
  const char* name;
  const char* op;
  const char* help;
  std::vector<Flag> flags;
};

const std::vector<OpCommand>& op_commands() {
  static const std::vector<OpCommand> cmds{
      {"delta-estimate", "delta_estimate", "four-point delta estimate",
       {{"--model", "model", "model name"},
        {"--region", "region", "ball or disk"},
        {"--radius", "radius", "ball radius"},
        {"--disk-radius", "disk_radius", "disk radius"},
        {"--count", "count", "sampled quadruples"},
        {"--exhaustive", "exhaustive", "true to check every quadruple"},
        {"--max", "max", "fail if the estimate exceeds this"},
        {"--min", "min", "fail if the estimate is below this"}}},
      {"gromov", "gromov", "extended Gromov product",
       {{"--model", "model", "model name"},
        {"--x", "x", "point or boundary spec (+w, -w, u|v, r:x)"},
        {"--y", "y", "point or boundary spec"},
        {"--o", "o", "base point (default: model base)"}}},
      {"busemann", "cocycle", "Busemann cocycle c(g, x)",
       {{"--model", "model", "model name"},
        {"--g", "g", "group element"},
        {"--x", "x", "boundary spec"},
        {"--convention", "convention", "direct or inverse"}}},
      {"length", "length", "translation lengths",
       {{"--model", "model", "model name"},
        {"--method", "method", "best, cyclic_reduction, trace or power_difference"},
        {"--expect", "expect", "expected length (single word)"}}},
      {"spectrum", "spectrum", "marked length spectrum on a ball",
       {{"--model", "model", "model name"},
        {"--radius", "radius", "word radius"},
        {"--method", "method", "length method"}}},
      {"compare", "spectrum_compare", "compare two spectra on a ball",
       {{"--model-a", "model_a", "first model"},
        {"--model-b", "model_b", "second model"},
        {"--radius", "radius", "word radius"},
        {"--expect", "expect", "equal or differ"}}},
      {"rigid-set", "rigid_set", "build a rigid set and check sparsity",
       {{"--model", "model", "model name"},
        {"--construction", "construction", "phi or prime"},
        {"--gamma", "gamma", "hyperbolic element"},
        {"--theta", "theta", "theta (default: searched)"},
        {"--budget", "budget", "sqrt, log or table:T1=c1,..."},
        {"--per-eta", "per_eta", "members per eta"},
        {"--radius", "radius", "eta radius"},
        {"--max-t", "max_T", "largest T checked"}}},
      {"filling-distance", "filling_distance", "rho between D_p and D_q",
       {{"--model", "model", "model name"},
        {"--p", "p", "first point"},
        {"--q", "q", "second point"},
        {"--K", "K", "filling constant"},
        {"--busemann-bounds", "busemann_bounds", "true to add the sup f rows"}}},
      {"descent", "descent", "barycenter descent toward D_r",
       {{"--model", "model", "model name"},
        {"--distance", "distance", "d(p0, r) for a random target"},
        {"--target", "target", "explicit target point"},
        {"--start", "start", "start point"},
        {"--K", "K", "filling constant"},
        {"--max-steps", "max_steps", "step limit"}}},
      {"compare-boundary", "gromov_comparison", "max Gromov product gap on witnesses",
       {{"--model-a", "model_a", "first model"},
        {"--model-b", "model_b", "second model"},
        {"--witness-radius", "witness_radius", "witness ball radius"},
        {"--bound", "bound", "number, or shift for d(o,o')+4delta"}}},
      {"coset-defect", "coset_defect", "coset relation defect",
       {{"--model-a", "model_a", "first model"},
        {"--model-b", "model_b", "second model"},
        {"--rep", "h", "coset representative h (with --gamma, --n)"},
        {"--gamma", "gamma", "hyperbolic element"},
        {"--n", "n", "power"},
        {"--samples", "samples", "seeded samples"},
        {"--convention", "convention", "direct or inverse"}}},
  };
  return cmds;
}

// Numbers and booleans become JSON values; anything else stays a string.
json flag_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (!v.is_discarded() && (v.is_number() || v.is_boolean() || v.is_array())) {
    return v;
  }
  return text;
}

Scenario base_scenario(const Globals& g) {
  Scenario s = g.scenario.empty() ? Scenario{} : hyperlab::load_scenario(g.scenario);
  s.experiments.clear();
  if (g.seed) {
    s.seed = *g.seed;
  }
  return s;
}

int finish(const RunOutcome& out, const Globals& g, const std::string& stem,
           const std::string& fallback_dir = "") {
  std::string dir = g.out.empty() ? fallback_dir : g.out;
  if (!dir.empty()) {
    hyperlab::emit_outcome(out, dir, stem);
  }
  if (!g.quiet) {
    std::cout << hyperlab::to_csv(out.report);
  }
  for (const auto& e : out.errors) {
    std::cerr << "error: " << e << "\n";
  }
  std::cerr << out.report.passed() << " passed, " << out.report.failed() << " failed\n";
  return out.exit_code();
}

int run_single(const OpCommand& cmd, const std::map<std::string, std::string>& values,
               const std::vector<std::string>& words, const std::vector<std::string>& extra,
               const Globals& g) {
  Experiment e{cmd.name, cmd.op, json::object()};
  for (const auto& [key, text] : values) {
    e.params[key] = flag_value(text);
  }
  if (!words.empty()) {
    e.params["words"] = words;
  }
  for (const auto& kv : extra) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--param expects key=value, got '" + kv + "'");
    }
    e.params[kv.substr(0, eq)] = flag_value(kv.substr(eq + 1));
  }
  Scenario s = base_scenario(g);
  for (const auto& key : hyperlab::model_param_keys()) {
    if (e.params.contains(key) && s.models.count(e.params.at(key).get<std::string>()) == 0) {
      std::string m = e.params.at(key).get<std::string>();
      s.models.emplace(m, hyperlab::default_model_spec(m));
    }
  }
  s.experiments.push_back(e);
  return finish(hyperlab::run_scenario(s), g, cmd.name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperlab: marked length spectrum experiments on hyperbolic spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--scenario", g.scenario, "scenario file (models, seed, tolerances)");
  app.add_option("--seed", g.seed, "override the scenario seed");
  app.add_option("--out", g.out, "directory for CSV/JSON output");
  app.add_flag("--quiet", g.quiet, "do not print the CSV report");

  const auto& cmds = op_commands();
  std::vector<std::map<std::string, std::string>> values(cmds.size());
  std::vector<std::string> words;
  std::vector<std::string> extra;
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    for (const auto& f : cmds[i].flags) {
      std::string key = f.key;
      auto* slot = &values[i];
      sub->add_option_function<std::string>(
          f.name, [slot, key](const std::string& v) { (*slot)[key] = v; }, f.help);
    }
    if (std::string(cmds[i].name) == "length") {
      sub->add_option("--word", words, "word (repeatable)")->required();
    }
    sub->add_option("-P,--param", extra, "extra parameter key=value (repeatable)");
    subs.push_back(sub);
  }

  CLI::App* run = app.add_subcommand("run", "run a scenario file");
  std::string run_file;
  run->add_option("file", run_file, "scenario file (defaults to --scenario)");

  CLI::App* verify = app.add_subcommand("verify", "run the bundled verification suite");
  std::string profile = "quick";
  verify->add_option("--profile", profile, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : hyperlab::kExitError;
  }

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (subs[i]->parsed()) {
        return run_single(cmds[i], values[i], words, extra, g);
      }
    }
    if (run->parsed()) {
      std::string file = run_file.empty() ? g.scenario : run_file;
      if (file.empty()) {
        throw ConfigError("run needs a scenario file");
      }
      Scenario s = hyperlab::load_scenario(file);
      if (g.seed) {
        s.seed = *g.seed;
      }
      RunOutcome out = hyperlab::run_scenario(s, &std::cerr);
      std::string stem = std::filesystem::path(file).stem().string();
      return finish(out, g, stem, s.output_dir);
    }
    if (verify->parsed()) {
      hyperlab::VerifyOutcome v =
          hyperlab::run_verify(profile, g.seed.value_or(1), g.quiet ? nullptr : &std::cerr);
      if (!g.out.empty()) {
        hyperlab::emit_outcome(v.run, g.out, "verify-" + profile);
      }
      for (const auto& e : v.run.errors) {
        std::cerr << "error: " << e << "\n";
      }
      for (const auto& c : v.criteria) {
        std::printf("criterion %2d  %-34s %s  rows=%zu failed=%zu  %.2fs\n", c.index,
                    c.title.c_str(), c.pass() ? "PASS" : "FAIL", c.rows, c.failed, c.seconds);
      }
      std::printf("verify %s: %s in %.2fs\n", profile.c_str(), v.pass() ? "PASS" : "FAIL",
                  v.seconds);
      if (!v.run.errors.empty()) {
        return hyperlab::kExitError;
      }
      return v.pass() ? hyperlab::kExitPass : hyperlab::kExitCheckFailed;
    }
  } catch (const hyperlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hyperlab::kExitError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hyperlab::kExitError;
  }
  return hyperlab::kExitError;
}
