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


// Model declarations, hyperbolicity-constant estimation and the bundled
// default models.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/gromov.hpp"
#include "hyperlab/mat2.hpp"
#include "hyperlab/spaces.hpp"
#include "hyperlab/word.hpp"

namespace hyperlab {

struct ModelSpec {
  std::string name;
  ModelKind kind = ModelKind::FreeTree;
  int rank = 2;
  // Word metric generators.
  std::vector<Word> words;
  // Upper half plane generators.
  std::vector<Mat2> matrices;
  int radius = 10;
  std::size_t vertex_budget = 2'000'000;
  std::optional<Word> base_word;
  std::optional<Complex> base_point;
  // Overrides the estimate when set.
  std::optional<double> delta;
  bool quasi_parabolic = false;
  ModelTolerances tolerances;
};

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "tree") {
    return ModelKind::FreeTree;
  }
  if (s == "wordball") {
    return ModelKind::WordMetricBall;
  }
  if (s == "hplane") {
    return ModelKind::UpperHalfPlane;
  }
  throw ConfigError("unknown model kind '" + s + "' (expected tree, wordball or hplane)");
}

struct DeltaPolicy {
  std::uint64_t seed = 1;
  // Quadruples sampled in the upper half plane.
  std::size_t samples = 100'000;
  double disk_radius = 5;
  // Word metric balls are checked exhaustively on a ball of this radius.
  int word_radius = 3;
};

// delta-hat: 0 on the tree, an exhaustive four-point maximum on a small word
// metric ball, a seeded disk sample on the upper half plane. Sampled values
// are lower bounds for the true constant.
inline double estimate_delta(const ActionModel& model, const DeltaPolicy& policy = {}) {
  switch (model.kind()) {
    case ModelKind::FreeTree:
      return 0;
    case ModelKind::WordMetricBall: {
      SampleSpec spec;
      spec.region.kind = SampleRegion::Kind::Ball;
      spec.region.radius = std::min(policy.word_radius, model.ball_radius() / 2);
      spec.exhaustive = true;
      return delta_estimate(model, spec).value;
    }
    case ModelKind::UpperHalfPlane: {
      SampleSpec spec;
      spec.region.kind = SampleRegion::Kind::Disk;
      spec.region.disk_radius = policy.disk_radius;
      spec.region.center = complex_of(model.base());
      spec.count = policy.samples;
      spec.seed = policy.seed;
      return delta_estimate(model, spec).value;
    }
  }
  return 0;
}

inline ActionModel build_model(const ModelSpec& spec, const DeltaPolicy& policy = {}) {
  ActionModel m = [&] {
    switch (spec.kind) {
      case ModelKind::FreeTree:
        return ActionModel::free_tree(spec.rank, spec.base_word.value_or(Word{}), spec.name);
      case ModelKind::WordMetricBall:
        return ActionModel::word_metric_ball(spec.rank, spec.words, spec.radius,
                                             spec.vertex_budget, spec.base_word.value_or(Word{}),
                                             spec.name);
      case ModelKind::UpperHalfPlane:
        return ActionModel::upper_half_plane(spec.matrices, spec.base_point.value_or(Complex(0, 1)),
                                             spec.name, spec.tolerances);
    }
    throw ConfigError("unknown model kind");
  }();
  if (spec.quasi_parabolic) {
    m = m.with_quasi_parabolic(true);
  }
  return m.with_delta(spec.delta ? *spec.delta : estimate_delta(m, policy));
}

// The Schottky pair a = diag(3, 1/3), b = [[5/3, 4/3], [4/3, 5/3]].
inline std::vector<Mat2> schottky_generators() {
  return {Mat2{3, 0, 0, 1.0 / 3}, Mat2{5.0 / 3, 4.0 / 3, 4.0 / 3, 5.0 / 3}};
}

inline std::vector<std::string> default_model_names() {
  return {"tree", "s1", "s2", "hplane", "hplane-conj"};
}

// tree: F_2 on its Cayley tree. s1, s2: word metrics for {a, b} and {a, ab}.
// hplane: the Schottky pair. hplane-conj: its conjugate by [[2, 1], [1, 1]],
// with the same marked length spectrum.
inline ModelSpec default_model_spec(const std::string& name) {
  ModelSpec s;
  s.name = name;
  if (name == "tree") {
    s.kind = ModelKind::FreeTree;
  } else if (name == "s1" || name == "s2") {
    s.kind = ModelKind::WordMetricBall;
    s.words = name == "s1" ? std::vector<Word>{parse_word("a", 2), parse_word("b", 2)}
                           : std::vector<Word>{parse_word("a", 2), parse_word("ab", 2)};
    s.radius = 10;
  } else if (name == "hplane" || name == "hplane-conj") {
    s.kind = ModelKind::UpperHalfPlane;
    s.matrices = schottky_generators();
    if (name == "hplane-conj") {
      Mat2 c{2, 1, 1, 1};
      for (Mat2& g : s.matrices) {
        g = c * g * c.inverse();
      }
    }
  } else {
    throw ConfigError("unknown default model '" + name + "'");
  }
  return s;
}

inline ActionModel default_model(const std::string& name, const DeltaPolicy& policy = {}) {
  return build_model(default_model_spec(name), policy);
}

}  // namespace hyperlab
