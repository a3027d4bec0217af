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

// Translation lengths l(g) = lim d(g^n o, o) / n and marked length spectra.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/boundary.hpp"
#include "hyperlab/busemann.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/spaces.hpp"

namespace hyperlab {

enum class LengthMethod { Best, CyclicReduction, Trace, PowerDifference };

inline std::string to_string(LengthMethod m) {
  switch (m) {
    case LengthMethod::Best:
      return "best";
    case LengthMethod::CyclicReduction:
      return "cyclic_reduction";
    case LengthMethod::Trace:
      return "trace";
    case LengthMethod::PowerDifference:
      return "power_difference";
  }
  return "?";
}

inline LengthMethod parse_length_method(const std::string& s) {
  for (auto m : {LengthMethod::Best, LengthMethod::CyclicReduction, LengthMethod::Trace,
                 LengthMethod::PowerDifference}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  throw ConfigError("unknown length method '" + s + "'");
}

struct LengthEstimate {
  IntervalValue value;
  LengthMethod method = LengthMethod::Best;
  // Power used by PowerDifference.
  long long power = 0;
  GroupElement element = Word{};
  Classification classification = Classification::Hyperbolic;
};

struct PowerDifferencePolicy {
  long long initial = 1024;
  long long ceiling = 1LL << 20;
  double target_width = 1e-2;
};

namespace detail {

// 2 arccosh(|tr| / 2) from log |tr|, stable for huge traces.
inline double length_from_log_trace(double log_tr) {
  if (log_tr < 20) {
    double y = std::exp(log_tr) / 2;
    return y <= 1 ? 0.0 : 2 * std::acosh(y);
  }
  return 2 * (log_tr - std::log(2.0) + std::log1p(std::sqrt(1 - 4 * std::exp(-2 * log_tr))));
}

inline LengthEstimate power_difference(const ActionModel& model, const GroupElement& g,
                                       Classification cls, const PowerDifferencePolicy& policy) {
  LengthEstimate est;
  est.method = LengthMethod::PowerDifference;
  est.element = g;
  est.classification = cls;
  double delta = model.delta();
  double tol = model.float_tol();
  long long n = policy.initial;
  if (model.kind() == ModelKind::WordMetricBall) {
    // Largest power whose square still fits in the enumerated ball.
    auto fits = [&](long long k) {
      try {
        model.displacement(g, 2 * k);
        return true;
      } catch (const BallExceeded&) {
        return false;
      }
    };
    while (n > 1 && !fits(n)) {
      n /= 2;
    }
    if (!fits(n)) {
      throw BallExceeded("g^2 = " + word_of(g).pow(2).str() +
                             " leaves the word metric ball; increase the radius",
                         model.ball_radius() + 1);
    }
    double v = (model.displacement(g, 2 * n) - model.displacement(g, n)) / static_cast<double>(n);
    double slack = 4 * delta / static_cast<double>(n) + tol;
    est.value = IntervalValue::with_slack(v, slack, slack);
    est.power = n;
    return est;
  }
  for (;; n *= 2) {
    double v = (model.displacement(g, 2 * n) - model.displacement(g, n)) / static_cast<double>(n);
    double slack = 4 * delta / static_cast<double>(n) + tol;
    est.value = IntervalValue::with_slack(v, slack, slack);
    est.power = n;
    if (est.value.width() < policy.target_width || n >= policy.ceiling) {
      break;
    }
  }
  if (cls == Classification::Hyperbolic && est.value.estimate * static_cast<double>(n) <= tol) {
    throw PreconditionError("translation below resolution at N = " + std::to_string(n) +
                            "; increase N");
  }
  return est;
}

}  // namespace detail

inline LengthEstimate translation_length(const ActionModel& model, const GroupElement& g,
                                         LengthMethod method = LengthMethod::Best,
                                         const PowerDifferencePolicy& policy = {}) {
  if (method == LengthMethod::Best) {
    switch (model.kind()) {
      case ModelKind::FreeTree:
        method = LengthMethod::CyclicReduction;
        break;
      case ModelKind::UpperHalfPlane:
        method = LengthMethod::Trace;
        break;
      case ModelKind::WordMetricBall:
        method = LengthMethod::PowerDifference;
        break;
    }
  }
  Classification cls = model.classify(g);
  LengthEstimate est;
  est.method = method;
  est.element = g;
  est.classification = cls;
  switch (method) {
    case LengthMethod::CyclicReduction:
      if (model.kind() != ModelKind::FreeTree) {
        throw ConfigError("cyclic reduction length needs the free tree model");
      }
      est.value = IntervalValue::exact(static_cast<double>(word_of(g).cyclic_reduction().size()));
      return est;
    case LengthMethod::Trace:
      if (model.kind() != ModelKind::UpperHalfPlane) {
        throw ConfigError("trace length needs the upper half plane model");
      }
      if (cls != Classification::Hyperbolic) {
        est.value = IntervalValue::exact(0);
        return est;
      }
      {
        double v = detail::length_from_log_trace(model.log_abs_trace(g));
        double tol = model.tolerances().trace_tol;
        est.value = IntervalValue::with_slack(v, tol, tol);
      }
      return est;
    case LengthMethod::PowerDifference:
      if (cls != Classification::Hyperbolic) {
        est.value = IntervalValue::exact(0);
        return est;
      }
      return detail::power_difference(model, g, cls, policy);
    case LengthMethod::Best:
      break;
  }
  return est;
}

struct StableLengthDefect {
  // Direct: c(g, g+) - l; Inverse: c~(g, g+) + l.
  IntervalValue plus;
  // Direct: c(g, g-) + l; Inverse: c~(g, g-) - l.
  IntervalValue minus;
};

inline StableLengthDefect stable_length_defect(const ActionModel& model, const GroupElement& g,
                                               CocycleConvention conv,
                                               const DepthPolicy& policy = {}) {
  auto [plus, minus] = fixed_points(model, g);
  IntervalValue len = translation_length(model, g).value;
  IntervalValue cp = cocycle(model, g, plus, conv, policy);
  IntervalValue cm = cocycle(model, g, minus, conv, policy);
  if (conv == CocycleConvention::Direct) {
    return {cp - len, cm + len};
  }
  return {cp + len, cm - len};
}

struct MainRelationDefect {
  // c(eta, g+) + n l(g) - l(eta g^n), Direct convention.
  IntervalValue literal;
  // |<g+, g->_o - <eta g+, g->_o| + 12 delta.
  double literal_bound = 0;
  // l(eta g^n) - [n l(g) - c~(eta, g+) + 2(<g+, g-> - <eta g+, g->)].
  IntervalValue corrected;
  IntervalValue length;
};

// Whether (eta, g, n) is far enough along for the corrected relation to be
// exact on a tree: n l(g) > d(o, eta o) + d(o, g o).
inline bool main_relation_asymptotic(const ActionModel& model, const GroupElement& eta,
                                     const GroupElement& g, long long n) {
  double lg = translation_length(model, g).value.lower;
  return static_cast<double>(n) * lg > model.displacement(eta) + model.displacement(g);
}

inline MainRelationDefect main_relation_defect(const ActionModel& model, const GroupElement& eta,
                                               const GroupElement& g, long long n,
                                               const DepthPolicy& policy = {}) {
  if (model.classify(g) != Classification::Hyperbolic) {
    throw PreconditionError("gamma " + model.format(g) + " is not hyperbolic");
  }
  auto [plus, minus] = fixed_points(model, g);
  BoundaryPoint eta_plus = plus.translated(model, eta);
  IntervalValue far;
  try {
    far = extended_gromov(model, eta_plus, minus, policy);
  } catch (const CoincidentBoundaryPoints&) {
    throw PreconditionError("eta gamma+ = gamma- for eta = " + model.format(eta) +
                            ", gamma = " + model.format(g));
  }
  GroupElement w = model.compose(eta, model.power(g, n));
  if (model.classify(w) != Classification::Hyperbolic) {
    throw PreconditionError("eta gamma^n is not hyperbolic for n = " + std::to_string(n));
  }
  IntervalValue near = extended_gromov(model, plus, minus, policy);
  IntervalValue lg = translation_length(model, g).value;
  IntervalValue lw = translation_length(model, w).value;
  double nn = static_cast<double>(n);
  MainRelationDefect out;
  out.length = lw;
  out.literal = cocycle(model, eta, plus, CocycleConvention::Direct, policy) + nn * lg - lw;
  out.literal_bound = (near - far).magnitude() + 12 * model.delta();
  out.corrected = lw - (nn * lg - cocycle(model, eta, plus, CocycleConvention::Inverse, policy) +
                        2.0 * (near - far));
  return out;
}

struct SpectrumRow {
  GroupElement element;
  std::string word;
  // Cyclic canonical form for words (conjugacy class key).
  std::string class_key;
  LengthEstimate length;
};

struct SpectrumTable {
  std::string model_id;
  std::vector<SpectrumRow> rows;
};

inline SpectrumTable mls_table(const ActionModel& model, const std::vector<GroupElement>& elements,
                               LengthMethod method = LengthMethod::Best) {
  SpectrumTable t;
  t.model_id = model.id();
  for (const auto& g : elements) {
    SpectrumRow row;
    row.element = g;
    row.word = model.format(g);
    if (const auto* w = std::get_if<Word>(&g)) {
      row.class_key = w->conjugacy_key().str();
    }
    row.length = translation_length(model, g, method);
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct SpectrumComparison {
  double max_diff = 0;
  // max over elements with both lengths positive of max(lA/lB, lB/lA).
  double max_ratio = 1;
  std::optional<GroupElement> diff_witness;
  std::optional<GroupElement> ratio_witness;
  std::size_t compared = 0;
};

inline SpectrumComparison mls_compare(const ActionModel& a, const ActionModel& b,
                                      const std::vector<GroupElement>& elements) {
  SpectrumComparison out;
  for (const auto& g : elements) {
    double la = translation_length(a, a.element(word_of(g))).value.estimate;
    double lb = translation_length(b, b.element(word_of(g))).value.estimate;
    double diff = std::abs(la - lb);
    if (!out.diff_witness || diff > out.max_diff) {
      out.max_diff = diff;
      out.diff_witness = g;
    }
    if (la > 0 && lb > 0) {
      double r = std::max(la / lb, lb / la);
      if (!out.ratio_witness || r > out.max_ratio) {
        out.max_ratio = r;
        out.ratio_witness = g;
      }
    }
    ++out.compared;
  }
  return out;
}

}  // namespace hyperlab
