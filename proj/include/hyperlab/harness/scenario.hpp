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


// Scenario files: a JSON document declaring models and an ordered list of
// experiments.
//
//   {
//     "seed": 1,
//     "tolerances": {"float_tol": 1e-9, "delta_margin": 0},
//     "models": {
//       "tree": {"kind": "tree", "rank": 2},
//       "s2":   {"kind": "wordball", "generators": ["a", "ab"], "radius": 10},
//       "h":    {"kind": "hplane", "generators": [[3, 0, 0, 0.3333333333333333]],
//                "base": [0, 1]}
//     },
//     "experiments": [
//       {"name": "cocycle", "op": "cocycle_identity", "model": "tree", "samples": 1000}
//     ]
//
// Experiment parameters may also be nested under "params".
//   }
//
// The bundled model names (tree, s1, s2, hplane, hplane-conj) may be used
// without a declaration.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hyperlab/boundary.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/models.hpp"
#include "hyperlab/spaces.hpp"
#include "json.hpp"

namespace hyperlab {

struct Experiment {
  std::string name;
  std::string op;
  nlohmann::json params = nlohmann::json::object();
};

struct ScenarioTolerances {
  double float_tol = 1e-9;
  // Added to every delta estimate.
  double delta_margin = 0;
};

struct Scenario {
  std::uint64_t seed = 1;
  ScenarioTolerances tolerances;
  std::map<std::string, ModelSpec> models;
  std::vector<Experiment> experiments;
  std::string output_dir;
};

// Parameter keys naming models.
inline const std::vector<std::string>& model_param_keys() {
  static const std::vector<std::string> keys{"model", "model_a", "model_b", "set_model"};
  return keys;
}

inline ModelSpec parse_model_spec(const std::string& name, const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("model '" + name + "' must be an object");
  }
  if (j.contains("default")) {
    ModelSpec s = default_model_spec(j.at("default").get<std::string>());
    s.name = name;
    return s;
  }
  ModelSpec s;
  s.name = name;
  if (!j.contains("kind")) {
    throw ConfigError("model '" + name + "' has no kind");
  }
  s.kind = parse_model_kind(j.at("kind").get<std::string>());
  s.rank = j.value("rank", 2);
  s.radius = j.value("radius", 10);
  s.vertex_budget = j.value("vertex_budget", static_cast<std::size_t>(2'000'000));
  s.quasi_parabolic = j.value("quasi_parabolic", false);
  if (j.contains("delta")) {
    s.delta = j.at("delta").get<double>();
  }
  if (j.contains("max_ray_distance")) {
    s.tolerances.max_ray_distance = j.at("max_ray_distance").get<double>();
  }
  if (j.contains("trace_tol")) {
    s.tolerances.trace_tol = j.at("trace_tol").get<double>();
  }
  const nlohmann::json gens = j.value("generators", nlohmann::json::array());
  switch (s.kind) {
    case ModelKind::FreeTree:
      break;
    case ModelKind::WordMetricBall:
      for (const auto& g : gens) {
        s.words.push_back(parse_word(g.get<std::string>(), s.rank));
      }
      break;
    case ModelKind::UpperHalfPlane:
      for (const auto& g : gens) {
        auto v = g.get<std::vector<double>>();
        if (v.size() != 4) {
          throw ConfigError("matrix generator of model '" + name + "' needs 4 entries");
        }
        Mat2 m{v[0], v[1], v[2], v[3]};
        if (!(m.det() > 0)) {
          throw ConfigError("matrix generator of model '" + name +
                            "' must have positive determinant");
        }
        s.matrices.push_back(m);
      }
      s.rank = static_cast<int>(s.matrices.size());
      break;
  }
  if (j.contains("base")) {
    const auto& b = j.at("base");
    if (s.kind == ModelKind::UpperHalfPlane) {
      auto v = b.get<std::vector<double>>();
      if (v.size() != 2) {
        throw ConfigError("upper half plane base point is [re, im]");
      }
      s.base_point = Complex(v[0], v[1]);
    } else {
      s.base_word = parse_word(b.get<std::string>(), s.rank);
    }
  }
  return s;
}

inline Scenario parse_scenario(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("scenario must be a JSON object");
  }
  Scenario s;
  s.seed = j.value("seed", static_cast<std::uint64_t>(1));
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    s.tolerances.float_tol = t.value("float_tol", s.tolerances.float_tol);
    s.tolerances.delta_margin = t.value("delta_margin", s.tolerances.delta_margin);
  }
  s.output_dir = j.value("output_dir", std::string());
  if (j.contains("models")) {
    for (const auto& [name, spec] : j.at("models").items()) {
      s.models[name] = parse_model_spec(name, spec);
    }
  }
  std::map<std::string, int> seen;
  for (const auto& e : j.value("experiments", nlohmann::json::array())) {
    Experiment x;
    x.op = e.at("op").get<std::string>();
    x.name = e.value("name", x.op);
    if (seen[x.name]++ > 0) {
      throw ConfigError("duplicate experiment name '" + x.name + "'");
    }
    for (const auto& [k, v] : e.items()) {
      if (k == "params" && v.is_object()) {
        x.params.update(v);
      } else if (k != "op" && k != "name") {
        x.params[k] = v;
      }
    }
    for (const auto& key : model_param_keys()) {
      if (!x.params.contains(key)) {
        continue;
      }
      std::string m = x.params.at(key).get<std::string>();
      if (s.models.count(m) == 0) {
        auto defaults = default_model_names();
        if (std::find(defaults.begin(), defaults.end(), m) == defaults.end()) {
          throw ConfigError("experiment '" + x.name + "' references undeclared model '" + m +
                            "'");
        }
        s.models[m] = default_model_spec(m);
      }
    }
    s.experiments.push_back(std::move(x));
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read scenario " + path);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed scenario " + path + ": " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed scenario " + path + ": " + e.what());
  }
}

// Boundary point specs:
//   +w     attracting fixed point of w
//   -w     repelling fixed point of w
//   u|v    u v^inf
//   r:x    upper half plane endpoint x (a number or inf)
inline BoundaryPoint parse_boundary(const ActionModel& model, const std::string& text) {
  if (text.empty()) {
    throw ConfigError("empty boundary point");
  }
  if (text.rfind("r:", 0) == 0) {
    std::string v = text.substr(2);
    if (v == "inf") {
      return BoundaryPoint::explicit_ray(kInfinity);
    }
    try {
      return BoundaryPoint::explicit_ray(std::stod(v));
    } catch (const std::exception&) {
      throw ConfigError("bad ray endpoint '" + v + "'");
    }
  }
  if (text[0] == '+' || text[0] == '-') {
    GroupElement g = model.element(parse_word(text.substr(1), model.rank()));
    if (model.classify(g) != Classification::Hyperbolic) {
      throw PreconditionError("no axis: " + text.substr(1) + " is not hyperbolic");
    }
    return text[0] == '+' ? BoundaryPoint::fixed_plus(g) : BoundaryPoint::fixed_minus(model, g);
  }
  auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw ConfigError("boundary point '" + text + "' must be +w, -w, u|v or r:x");
  }
  Word u = parse_word(text.substr(0, bar), model.rank());
  Word v = parse_word(text.substr(bar + 1), model.rank());
  return BoundaryPoint::infinite_word(model.element(u), model.element(v));
}

// Point specs: a word (vertex or orbit point w o), or "re,im" in the upper
// half plane.
inline Point parse_point(const ActionModel& model, const std::string& text) {
  if (model.kind() == ModelKind::UpperHalfPlane && text.find(',') != std::string::npos) {
    std::istringstream in(text);
    double re = 0;
    double im = 0;
    char comma = 0;
    if (!(in >> re >> comma >> im) || comma != ',' || !(im > 0)) {
      throw ConfigError("bad upper half plane point '" + text + "'");
    }
    return Complex(re, im);
  }
  Word w = parse_word(text, model.rank());
  if (model.kind() == ModelKind::UpperHalfPlane) {
    return model.orbit_point(model.element(w));
  }
  return w;
}

}  // namespace hyperlab
