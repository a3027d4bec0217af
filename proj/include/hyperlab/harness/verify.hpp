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


// The bundled verification suite. Experiment names start with "cN-" where N
// is the criterion they belong to.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/harness/run.hpp"
#include "hyperlab/harness/scenario.hpp"
#include "hyperlab/models.hpp"
#include "json.hpp"

namespace hyperlab {

inline const std::vector<std::string>& verify_criteria() {
  static const std::vector<std::string> titles{
      "tree cocycle exactness",
      "stable length",
      "corrected main relation",
      "oracle agreement",
      "delta estimates",
      "cross-ratio basepoint invariance",
      "embedding bounds",
      "barycenter descent",
      "rigid-set sparsity",
      "rigidity probe",
      "coset defect",
  };
  return titles;
}

inline Scenario verify_scenario(const std::string& profile, std::uint64_t seed = 1) {
  if (profile != "quick" && profile != "full") {
    throw ConfigError("verify profile must be quick or full");
  }
  bool full = profile == "full";
  auto n = [&](int quick, int all) { return full ? all : quick; };
  using nlohmann::json;
  Scenario s;
  s.seed = seed;
  ModelSpec shifted = default_model_spec("tree");
  shifted.name = "tree-shift";
  shifted.base_word = parse_word("abA", 2);
  s.models.emplace("tree-shift", shifted);
  for (const auto& name : default_model_names()) {
    s.models.emplace(name, default_model_spec(name));
  }
  auto add = [&](std::string name, std::string op, json params) {
    s.experiments.push_back({std::move(name), std::move(op), std::move(params)});
  };

  add("c1-tree-inverse-stated", "cocycle_identity",
      {{"model", "tree"}, {"samples", n(200, 1000)}, {"max_len", 12}, {"depth", 64},
       {"convention", "inverse"}, {"form", "stated"}});
  add("c1-tree-direct-transformed", "cocycle_identity",
      {{"model", "tree"}, {"samples", n(200, 1000)}, {"max_len", 12}, {"depth", 64},
       {"convention", "direct"}, {"form", "transformed"}});

  add("c2-tree", "stable_length", {{"model", "tree"}, {"samples", 200}, {"convention", "direct"}});
  add("c2-hplane", "stable_length",
      {{"model", "hplane"}, {"samples", n(50, 200)}, {"max_len", 4}, {"convention", "direct"}});

  add("c3-tree", "main_relation", {{"model", "tree"}, {"samples", n(50, 200)}, {"n_max", 30}});

  add("c4-power-difference", "length_oracle", {{"model", "hplane"}, {"samples", 50}});
  add("c4-busemann-infinity", "busemann_infinity", {{"model", "hplane"}, {"samples", 50}});

  add("c5-tree-exhaustive", "delta_estimate",
      {{"model", "tree"}, {"region", "ball"}, {"radius", n(3, 4)}, {"exhaustive", true},
       {"max", 0.0}});
  add("c5-hplane-disk", "delta_estimate",
      {{"model", "hplane"}, {"region", "disk"}, {"disk_radius", 5.0}, {"count", n(20'000, 100'000)},
       {"min", 1e-9}, {"max", 2.0}, {"doubling", true}});

  add("c6-tree", "cross_ratio_invariance", {{"model", "tree"}, {"samples", n(200, 1000)}});
  add("c6-hplane", "cross_ratio_invariance",
      {{"model", "hplane"}, {"samples", n(100, 1000)}, {"x_len", 3}});

  add("c7-tree", "embedding", {{"model", "tree"}, {"samples", n(30, 100)}, {"max_len", 500}});
  add("c7-hplane", "embedding", {{"model", "hplane"}, {"samples", n(30, 100)}, {"disk_radius", 3.0}});

  // At d = 1e5 the start is already inside the stopping radius; the far run
  // exercises the descent itself.
  add("c8-tree", "descent", {{"model", "tree"}, {"distance", 100'000}});
  add("c8-tree-far", "descent", {{"model", "tree"}, {"distance", n(200'000, 400'000)}});

  add("c9-phi", "rigid_set",
      {{"model", "tree"}, {"construction", "phi"}, {"gamma", "ab"}, {"max_T", 1e4}});
  add("c9-prime", "rigid_set", {{"model", "tree"}, {"construction", "prime"}, {"max_T", 1e4}});

  add("c10-length-s1", "length", {{"model", "s1"}, {"word", "b"}, {"expect", 1.0}});
  add("c10-length-s2", "length", {{"model", "s2"}, {"word", "b"}, {"expect", 2.0}});
  add("c10-probe-words", "rigidity_probe",
      {{"set_model", "tree"}, {"model_a", "s1"}, {"model_b", "s2"}, {"gamma", "ab"},
       {"within", 50}, {"ball_radius", 2}, {"expect", "disagree"}});
  add("c10-probe-conjugate", "rigidity_probe",
      {{"set_model", "tree"}, {"model_a", "hplane"}, {"model_b", "hplane-conj"}, {"gamma", "ab"},
       {"within", 50}, {"ball_radius", n(4, 8)}, {"expect", "agree"}});
  add("c10-base-shift", "gromov_comparison",
      {{"model_a", "tree"}, {"model_b", "tree-shift"}, {"witness_radius", 3}, {"bound", "shift"}});

  add("c11-conjugate", "coset_defect",
      {{"model_a", "hplane"}, {"model_b", "hplane-conj"}, {"samples", 20}, {"n_max", 16},
       {"drift_limit", 64}});
  add("c11-base-shift", "coset_defect",
      {{"model_a", "tree"}, {"model_b", "tree-shift"}, {"samples", 20}, {"n_max", 16},
       {"drift_limit", 64}});
  return s;
}

inline int criterion_of(const std::string& experiment) {
  if (experiment.size() < 3 || experiment[0] != 'c') {
    return 0;
  }
  return std::atoi(experiment.c_str() + 1);
}

struct CriterionResult {
  int index = 0;
  std::string title;
  std::size_t rows = 0;
  std::size_t failed = 0;
  std::vector<std::string> errors;
  double seconds = 0;

  bool pass() const { return rows > 0 && failed == 0 && errors.empty(); }
};

struct VerifyOutcome {
  RunOutcome run;
  std::vector<CriterionResult> criteria;
  double seconds = 0;

  bool pass() const {
    for (const auto& c : criteria) {
      if (!c.pass()) {
        return false;
      }
    }
    return true;
  }
};

inline VerifyOutcome run_verify(const std::string& profile, std::uint64_t seed = 1,
                                std::ostream* log = nullptr) {
  VerifyOutcome v;
  v.run = run_scenario(verify_scenario(profile, seed), log);
  const auto& titles = verify_criteria();
  for (std::size_t i = 0; i < titles.size(); ++i) {
    v.criteria.push_back({static_cast<int>(i + 1), titles[i]});
  }
  auto slot = [&](const std::string& experiment) -> CriterionResult* {
    int c = criterion_of(experiment);
    return c >= 1 && c <= static_cast<int>(titles.size()) ? &v.criteria[c - 1] : nullptr;
  };
  for (const auto& row : v.run.report.rows) {
    if (auto* c = slot(row.experiment)) {
      ++c->rows;
      c->failed += row.pass ? 0 : 1;
    }
  }
  for (const auto& err : v.run.errors) {
    if (auto* c = slot(err.substr(0, err.find(':')))) {
      c->errors.push_back(err);
    }
  }
  for (const auto& [name, secs] : v.run.seconds) {
    v.seconds += secs;
    if (auto* c = slot(name)) {
      c->seconds += secs;
    }
  }
  return v;
}

}  // namespace hyperlab
