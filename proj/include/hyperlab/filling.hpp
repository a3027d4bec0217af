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


// Boundary Gromov-product comparison and the hyperbolic filling.
//
// A MetricInstance is a pointed copy of a model; the distance between two
// instances is rho(D1, D2) = sup_{x != y} |<x,y>_D1 - <x,y>_D2| over the
// boundary, estimated from below over a finite witness set.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hyperlab/boundary.hpp"
#include "hyperlab/busemann.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/mat2.hpp"
#include "hyperlab/spaces.hpp"
#include "hyperlab/spectrum.hpp"

namespace hyperlab {

inline constexpr double kDefaultK = 101;

struct MetricInstance {
  ActionModel model;
  Point base;
  std::vector<BoundaryPoint> witnesses;
  double K = kDefaultK;

  MetricInstance(ActionModel m, Point b, std::vector<BoundaryPoint> w = {}, double k = kDefaultK)
      : model(std::move(m)), base(std::move(b)), witnesses(std::move(w)), K(k) {
    if (!(K > 100)) {
      throw ConfigError("K must exceed 100, got " + std::to_string(K));
    }
    (void)model.with_base(base);
  }

  double delta() const { return model.delta(); }

  IntervalValue product(const BoundaryPoint& x, const BoundaryPoint& y,
                        const DepthPolicy& policy = {}) const {
    return extended_gromov(model, x, y, base, policy);
  }

  std::string label() const { return model.id() + "@" + model.format(base); }
};

namespace detail {

// Canonical key of a boundary point: head u and primitive period v of
// u v^inf with u not ending in the last letter of v, or the real endpoint.
inline std::string witness_key(const ActionModel& model, const BoundaryPoint& x) {
  if (model.kind() == ModelKind::UpperHalfPlane) {
    BoundaryReal r = boundary_real(model, x);
    if (std::isinf(r)) {
      return "inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", r);
    return buf;
  }
  PeriodicWord p = periodic_form(x);
  Word period = p.period.primitive_root().first;
  std::vector<Letter> v(period.begin(), period.end());
  Word head = p.head;
  while (!head.empty() && head.back() == v.back()) {
    head = head.prefix(head.size() - 1);
    std::rotate(v.rbegin(), v.rbegin() + 1, v.rend());
  }
  std::string key(head.begin(), head.end());
  key += '|';
  key.append(v.begin(), v.end());
  return key;
}

inline double pair_delta(const MetricInstance& a, const MetricInstance& b) {
  return std::max(a.delta(), b.delta());
}

}  // namespace detail

// Attracting fixed points of the hyperbolic elements of a ball, deduplicated.
inline std::vector<BoundaryPoint> default_witnesses(const ActionModel& model, int radius = 6) {
  std::vector<BoundaryPoint> out;
  std::set<std::string> seen;
  for (const auto& g : ball_enumerate(model, radius)) {
    if (model.classify(g) != Classification::Hyperbolic) {
      continue;
    }
    BoundaryPoint x = BoundaryPoint::fixed_plus(g);
    if (seen.insert(detail::witness_key(model, x)).second) {
      out.push_back(std::move(x));
    }
  }
  return out;
}

namespace detail {

// Endpoints (behind z1, beyond z2) of the geodesic through z1 and z2.
inline std::pair<BoundaryReal, BoundaryReal> geodesic_ends(Complex z1, Complex z2) {
  Mat2 t = translation_to(z2);
  Mat2 ti = t.inverse();
  Complex w = ti.apply(z1);
  BoundaryReal back;
  BoundaryReal ahead;
  if (std::abs(w.real()) < 1e-15 * (1 + std::abs(w))) {
    back = w.imag() > 1 ? kInfinity : 0.0;
    ahead = w.imag() > 1 ? 0.0 : kInfinity;
  } else {
    double c = (std::norm(w) - 1) / (2 * w.real());
    double r = std::sqrt(c * c + 1);
    // The endpoint on w's side of i is behind.
    double e1 = c - r;
    double e2 = c + r;
    bool w_near_e1 = std::abs(w - Complex(e1, 0)) < std::abs(w - Complex(e2, 0));
    back = w_near_e1 ? e1 : e2;
    ahead = w_near_e1 ? e2 : e1;
  }
  return {t.apply(back), t.apply(ahead)};
}

// Endpoints of the geodesic through z orthogonal to the geodesic ending at xi.
inline std::pair<BoundaryReal, BoundaryReal> orthogonal_ends(Complex z, BoundaryReal xi) {
  Mat2 t = translation_to(z);
  BoundaryReal local = t.inverse().apply(xi);
  // Rotate about i so that local goes to infinity, then turn by a right angle.
  double theta = std::isinf(local) ? 0.0 : std::atan2(1.0, local);
  Mat2 rot{std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
  double q = std::numbers::pi / 4;
  Mat2 quarter{std::cos(q), std::sin(q), -std::sin(q), std::cos(q)};
  Mat2 m = t * rot * quarter;
  return {m.apply(BoundaryReal{0}), m.apply(kInfinity)};
}

inline Letter branch_letter(int rank, Letter avoid1, Letter avoid2) {
  for (int key = 0; key < 2 * rank; ++key) {
    Letter x = letter_from_key(key);
    if (x != avoid1 && x != avoid2) {
      return x;
    }
  }
  throw ConfigError("rank 1 tree has no branching; line-extension witnesses need rank >= 2");
}

}  // namespace detail

// Two pairs of boundary points branching just beyond q and just beyond p on
// the line through p and q: <x,y>_q = 0 while <x,y>_p = d(p,q), and
// symmetrically. On a tree they realize rho(D_p, D_q) = d(p,q).
inline std::vector<BoundaryPoint> line_extension_witnesses(const ActionModel& model, const Point& p,
                                                           const Point& q) {
  if (model.distance(p, q) <= model.float_tol()) {
    throw PreconditionError("line-extension witnesses need p != q");
  }
  switch (model.kind()) {
    case ModelKind::FreeTree: {
      const Word& pw = vertex_of(p);
      const Word& qw = vertex_of(q);
      Word w = pw.inverse() * qw;
      std::vector<BoundaryPoint> out;
      auto beyond = [&](const Word& at, Letter last) {
        Letter c = detail::branch_letter(model.rank(), inverse_letter(last), last);
        out.push_back(BoundaryPoint::infinite_word(at, Word{last}));
        out.push_back(BoundaryPoint::infinite_word(at, Word{c}));
      };
      beyond(qw, w.back());
      beyond(pw, inverse_letter(w.front()));
      return out;
    }
    case ModelKind::UpperHalfPlane: {
      Complex zp = complex_of(p);
      Complex zq = complex_of(q);
      auto [behind_p, beyond_q] = detail::geodesic_ends(zp, zq);
      auto [q1, q2] = detail::orthogonal_ends(zq, beyond_q);
      auto [p1, p2] = detail::orthogonal_ends(zp, behind_p);
      std::vector<BoundaryPoint> out;
      for (BoundaryReal r : {beyond_q, q1, q2, behind_p, p1, p2}) {
        out.push_back(BoundaryPoint::explicit_ray(r));
      }
      return out;
    }
    case ModelKind::WordMetricBall:
      break;
  }
  throw ConfigError("line-extension witnesses need the free tree or upper half plane model");
}

struct RhoEstimate {
  // Lower bound for the sup: the best witness difference, widened below by
  // the enclosure widths.
  IntervalValue value;
  std::optional<BoundaryPoint> x;
  std::optional<BoundaryPoint> y;
  std::size_t pairs = 0;
};

namespace detail {

inline std::vector<BoundaryPoint> merged_witnesses(const MetricInstance& a, const MetricInstance& b,
                                                   const std::vector<BoundaryPoint>& extra) {
  std::vector<BoundaryPoint> out;
  std::set<std::string> seen;
  for (const auto* list : {&a.witnesses, &b.witnesses, &extra}) {
    for (const auto& x : *list) {
      if (seen.insert(witness_key(a.model, x)).second) {
        out.push_back(x);
      }
    }
  }
  return out;
}

}  // namespace detail

inline RhoEstimate rho_distance(const MetricInstance& a, const MetricInstance& b,
                                const std::vector<BoundaryPoint>& extra = {},
                                const DepthPolicy& policy = {}) {
  std::vector<BoundaryPoint> w = detail::merged_witnesses(a, b, extra);
  if (w.size() < 2) {
    throw ConfigError("rho needs at least 2 witnesses, got " + std::to_string(w.size()));
  }
  RhoEstimate out;
  out.value = IntervalValue::exact(0);
  double best = -1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      IntervalValue pa = a.product(w[i], w[j], policy);
      IntervalValue pb = b.product(w[i], w[j], policy);
      ++out.pairs;
      double diff = std::abs(pa.midpoint() - pb.midpoint());
      if (diff > best) {
        best = diff;
        double slack = 0.5 * (pa.width() + pb.width());
        out.value = {std::max(0.0, diff - slack), diff + slack, diff,
                     std::max(pa.depth, pb.depth)};
        out.x = w[i];
        out.y = w[j];
      }
    }
  }
  return out;
}

// Boundary points y_k -> x, for liminf evaluation.
inline std::vector<BoundaryPoint> refining_sequence(const ActionModel& model,
                                                    const BoundaryPoint& x, std::size_t start,
                                                    std::size_t count) {
  std::vector<BoundaryPoint> out;
  if (x.is_ray()) {
    BoundaryReal xi = x.endpoint();
    for (std::size_t k = 0; k < count; ++k) {
      double eps = std::ldexp(1.0, -static_cast<int>(start + k));
      out.push_back(BoundaryPoint::explicit_ray(std::isinf(xi) ? 1 / eps : xi + eps));
    }
    return out;
  }
  if (model.kind() == ModelKind::FreeTree) {
    PeriodicWord p = periodic_form(x);
    Word longest;
    for (std::size_t i = 0; i + 1 < start + count; ++i) {
      longest.push_back(p.at(i));
    }
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t n = start + k;
      Word prefix = longest.prefix(n);
      Letter c = detail::branch_letter(model.rank(), p.at(n),
                                       n == 0 ? p.at(n) : inverse_letter(p.at(n - 1)));
      out.push_back(BoundaryPoint::infinite_word(prefix, Word{c}));
    }
    return out;
  }
  // u v^n . z with z a generator endpoint distinct from v^-.
  BoundaryPoint away = BoundaryPoint::fixed_minus(model, x.period());
  std::optional<BoundaryPoint> z;
  for (const auto& g : ball_enumerate(model, 1)) {
    if (model.classify(g) != Classification::Hyperbolic) {
      continue;
    }
    BoundaryPoint cand = BoundaryPoint::fixed_plus(g);
    if (!same_boundary_point(model, cand, away)) {
      z = cand;
      break;
    }
  }
  if (!z) {
    throw PreconditionError("no generator endpoint to refine toward " + x.label());
  }
  for (std::size_t k = 0; k < count; ++k) {
    long long n = static_cast<long long>(start + k);
    GroupElement g = model.compose(x.prefix(), model.power(x.period(), n));
    out.push_back(z->translated(model, g));
  }
  return out;
}

struct RelativeBusemann {
  // Running minimum of (<x,y>_D1 - <x,y>_D2) / 2 over the tail.
  IntervalValue value;
  // The (1/2)K + 4 delta slack of the Busemann approximation, reported apart.
  double slack = 0;
  std::vector<double> sequence;
};

namespace detail {

// Where refining sequences start so that branching happens past both bases.
inline std::size_t refine_start(const MetricInstance& a, const MetricInstance& b,
                                const BoundaryPoint& x) {
  double reach = std::max(a.model.distance(a.model.base(), a.base),
                          b.model.distance(b.model.base(), b.base));
  if (x.is_ray()) {
    return static_cast<std::size_t>(std::ceil(reach / std::log(2.0))) + 4;
  }
  if (a.model.kind() == ModelKind::FreeTree) {
    return static_cast<std::size_t>(reach) + word_of(x.prefix()).size() + 2;
  }
  double lv = translation_length(a.model, x.period()).value.lower;
  return static_cast<std::size_t>(std::ceil((reach + 4) / std::max(lv, 1e-3)));
}

}  // namespace detail

inline RelativeBusemann relative_busemann(const MetricInstance& a, const MetricInstance& b,
                                          const BoundaryPoint& x, std::size_t count = 8,
                                          const DepthPolicy& policy = {}) {
  if (count < 2) {
    throw ConfigError("refining sequence needs at least 2 points");
  }
  std::vector<BoundaryPoint> ys =
      refining_sequence(a.model, x, detail::refine_start(a, b, x), count);
  RelativeBusemann out;
  out.slack = 0.5 * std::max(a.K, b.K) + 4 * detail::pair_delta(a, b);
  std::optional<IntervalValue> tail;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    IntervalValue v = 0.5 * (a.product(x, ys[k], policy) - b.product(x, ys[k], policy));
    out.sequence.push_back(v.estimate);
    if (k >= ys.size() / 2) {
      tail = tail ? interval_min(*tail, v) : v;
    }
  }
  out.value = *tail;
  return out;
}

struct BusemannExtrema {
  IntervalValue sup;
  IntervalValue inf;
  std::optional<BoundaryPoint> argmax;
  std::optional<BoundaryPoint> argmin;
};

inline BusemannExtrema busemann_extrema(const MetricInstance& a, const MetricInstance& b,
                                        const std::vector<BoundaryPoint>& extra = {},
                                        const DepthPolicy& policy = {}) {
  std::vector<BoundaryPoint> w = detail::merged_witnesses(a, b, extra);
  if (w.empty()) {
    throw ConfigError("no witnesses");
  }
  BusemannExtrema out;
  for (const auto& x : w) {
    IntervalValue f = relative_busemann(a, b, x, 8, policy).value;
    if (!out.argmax || f.estimate > out.sup.estimate) {
      out.sup = f;
      out.argmax = x;
    }
    if (!out.argmin || f.estimate < out.inf.estimate) {
      out.inf = f;
      out.argmin = x;
    }
  }
  return out;
}

struct BoundCheck {
  IntervalValue value;
  double bound = 0;
  // bound - value (upper-bound checks) or value - bound (lower-bound checks).
  double margin = 0;
  bool pass = true;
};

// |sup f + inf f| <= 5 delta + (3/2) K.
inline BoundCheck supinf_opposite_check(const MetricInstance& a, const MetricInstance& b,
                                        const std::vector<BoundaryPoint>& extra = {},
                                        const DepthPolicy& policy = {}) {
  BusemannExtrema e = busemann_extrema(a, b, extra, policy);
  IntervalValue s = e.sup + e.inf;
  BoundCheck out;
  out.value = {0, s.magnitude(), std::abs(s.estimate), s.depth};
  if (s.lower <= 0 && s.upper >= 0) {
    out.value.lower = 0;
  } else {
    out.value.lower = std::min(std::abs(s.lower), std::abs(s.upper));
  }
  out.bound = 5 * detail::pair_delta(a, b) + 1.5 * std::max(a.K, b.K);
  out.margin = out.bound - out.value.lower;
  out.pass = out.margin >= 0;
  return out;
}

struct RhoVsSup {
  RhoEstimate rho;
  IntervalValue sup;
  // rho <= 2|sup f| + (7/2) K + 14 delta.
  BoundCheck upper;
  // rho >= 2|sup f| - K - 12 delta.
  BoundCheck lower;
};

inline RhoVsSup rho_vs_sup_check(const MetricInstance& a, const MetricInstance& b,
                                 const std::vector<BoundaryPoint>& extra = {},
                                 const DepthPolicy& policy = {}) {
  RhoVsSup out;
  out.rho = rho_distance(a, b, extra, policy);
  BusemannExtrema e = busemann_extrema(a, b, extra, policy);
  out.sup = e.sup;
  double delta = detail::pair_delta(a, b);
  double k = std::max(a.K, b.K);
  double s = e.sup.magnitude();
  out.upper.value = out.rho.value;
  out.upper.bound = 2 * s + 3.5 * k + 14 * delta;
  out.upper.margin = out.upper.bound - out.rho.value.lower;
  out.upper.pass = out.upper.margin >= 0;
  out.lower.value = out.rho.value;
  out.lower.bound = 2 * std::abs(e.sup.estimate) - k - 12 * delta;
  out.lower.margin = out.rho.value.upper - out.lower.bound;
  out.lower.pass = out.lower.margin >= 0;
  return out;
}

struct EmbeddingCheck {
  double distance = 0;
  RhoEstimate rho;
  // d - 4K - 13 delta and d + 4 delta.
  double lower_bound = 0;
  double upper_bound = 0;
  bool pass = true;
};

inline EmbeddingCheck embedding_check(const ActionModel& model, const Point& p, const Point& q,
                                      double K = kDefaultK, const DepthPolicy& policy = {}) {
  EmbeddingCheck out;
  out.distance = model.distance(p, q);
  std::vector<BoundaryPoint> w = line_extension_witnesses(model, p, q);
  MetricInstance dp(model, p, w, K);
  MetricInstance dq(model, q, {}, K);
  out.rho = rho_distance(dp, dq, {}, policy);
  double delta = model.delta();
  out.lower_bound = out.distance - 4 * K - 13 * delta;
  out.upper_bound = out.distance + 4 * delta;
  out.pass = out.rho.value.upper >= out.lower_bound && out.rho.value.lower <= out.upper_bound;
  return out;
}

// The point at distance s from p on the ray from p to x.
inline Point step_toward(const ActionModel& model, const Point& p, const BoundaryPoint& x,
                         double s) {
  switch (model.kind()) {
    case ModelKind::FreeTree: {
      const Word& pw = vertex_of(p);
      PeriodicWord rel = periodic_form(x.translated(model, pw.inverse()));
      auto n = static_cast<std::size_t>(std::llround(s));
      Word out = pw;
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back(rel.at(i));
      }
      return out;
    }
    case ModelKind::UpperHalfPlane: {
      Complex z = complex_of(p);
      Mat2 t = translation_to(z);
      BoundaryReal target = t.inverse().apply(boundary_real(model, x));
      double theta = std::isinf(target) ? 0.0 : std::atan2(1.0, target);
      Mat2 rot{std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
      Complex out = (t * rot).apply(Complex(0, std::exp(s)));
      if (!model.in_range(out)) {
        throw BudgetExceeded("descent step left double-precision range");
      }
      return out;
    }
    case ModelKind::WordMetricBall:
      break;
  }
  throw ConfigError("descent needs the free tree or upper half plane model");
}

struct DescentStep {
  Point point;
  std::string label;
  RhoEstimate rho;
  std::string target;
  double step = 0;
};

struct DescentTrace {
  std::vector<DescentStep> steps;
  double stop_radius = 0;
  bool converged = false;
  // Set when rho failed to decrease.
  std::optional<std::string> finding;
};

// Moves p toward the boundary point where f_{D_p, D} is largest, by
// 50K + 50 delta per step, until rho(D_p, D) <= 1000K + 1000 delta.
inline DescentTrace barycenter_descent(const MetricInstance& d, const Point& start,
                                       std::size_t max_steps = 1000,
                                       const DepthPolicy& policy = {}) {
  const ActionModel& model = d.model;
  double delta = model.delta();
  double step = 50 * d.K + 50 * delta;
  DescentTrace trace;
  trace.stop_radius = 1000 * d.K + 1000 * delta;
  Point p = start;
  for (std::size_t k = 0;; ++k) {
    std::vector<BoundaryPoint> extra;
    bool at_base = model.distance(p, d.base) <= model.float_tol();
    if (!at_base) {
      extra = line_extension_witnesses(model, p, d.base);
    }
    MetricInstance dp(model, p, d.witnesses, d.K);
    DescentStep row;
    row.point = p;
    row.label = model.format(p);
    if (at_base && d.witnesses.size() < 2) {
      row.rho.value = IntervalValue::exact(0);
    } else {
      row.rho = rho_distance(dp, d, extra, policy);
    }
    if (!trace.steps.empty() && !(row.rho.value.estimate < trace.steps.back().rho.value.estimate)) {
      trace.steps.push_back(row);
      trace.finding = "rho did not decrease at step " + std::to_string(k);
      return trace;
    }
    if (row.rho.value.lower <= trace.stop_radius) {
      trace.steps.push_back(row);
      trace.converged = true;
      return trace;
    }
    if (k >= max_steps) {
      trace.steps.push_back(row);
      return trace;
    }
    BusemannExtrema e = busemann_extrema(dp, d, extra, policy);
    row.target = e.argmax->label();
    row.step = step;
    trace.steps.push_back(row);
    p = step_toward(model, p, *e.argmax, step);
  }
}

struct GromovComparison {
  double max_diff = 0;
  std::optional<BoundaryPoint> x;
  std::optional<BoundaryPoint> y;
  std::size_t pairs = 0;
};

// Empirical L in |<x,y>_A - <x,y>_B| <= L, boundary points shared by word.
inline GromovComparison gromov_comparison(const ActionModel& a, const ActionModel& b,
                                          const std::vector<BoundaryPoint>& witnesses,
                                          const DepthPolicy& policy = {}) {
  GromovComparison out;
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    for (std::size_t j = i + 1; j < witnesses.size(); ++j) {
      double d = std::abs(extended_gromov(a, witnesses[i], witnesses[j], policy).estimate -
                          extended_gromov(b, witnesses[i], witnesses[j], policy).estimate);
      ++out.pairs;
      if (!out.x || d > out.max_diff) {
        out.max_diff = d;
        out.x = witnesses[i];
        out.y = witnesses[j];
      }
    }
  }
  return out;
}

namespace detail {

inline IntervalValue product_gap(const ActionModel& a, const ActionModel& b,
                                 const BoundaryPoint& x, const BoundaryPoint& y,
                                 const DepthPolicy& policy) {
  return extended_gromov(a, x, y, policy) - extended_gromov(b, x, y, policy);
}

inline IntervalValue cocycle_gap(const ActionModel& a, const ActionModel& b, const Word& g,
                                 const BoundaryPoint& x, CocycleConvention conv,
                                 const DepthPolicy& policy) {
  return cocycle(a, a.element(g), x, conv, policy) - cocycle(b, b.element(g), x, conv, policy);
}

}  // namespace detail

// sup over g in the ball of g(x,y) - g(gx,gy), with g = <,>_A - <,>_B.
inline IntervalValue cobound_estimate(const ActionModel& a, const ActionModel& b,
                                      const BoundaryPoint& x, const BoundaryPoint& y, int radius,
                                      const DepthPolicy& policy = {}) {
  IntervalValue base = detail::product_gap(a, b, x, y, policy);
  std::optional<IntervalValue> best;
  for (const auto& w : free_ball_words(a.rank(), radius)) {
    IntervalValue moved = detail::product_gap(a, b, x.translated(a, w), y.translated(a, w), policy);
    IntervalValue v = base - moved;
    best = best ? interval_max(*best, v) : v;
  }
  return *best;
}

struct CosetDefect {
  // g(g-, (h g^n)+) - g(h g-, (h g^n)+) - (c~(h g^n, g-) + c~(h g^n, (h g^n)+)) / 2,
  // with c~ the Inverse cocycle. This is the form that is exact on trees.
  IntervalValue value;
  // The same with the halving dropped and the requested convention.
  IntervalValue literal;
  double bound = 0;
  bool pass = true;
  // (n, c(g^n, g-) / n) along a doubling schedule.
  std::vector<std::pair<long long, IntervalValue>> drift;
};

inline CosetDefect coset_relation_defect(const ActionModel& a, const ActionModel& b, const Word& h,
                                         const Word& gamma, long long n, CocycleConvention conv,
                                         long long drift_limit = 64,
                                         const DepthPolicy& policy = {}) {
  for (const ActionModel* m : {&a, &b}) {
    if (m->classify(m->element(gamma)) != Classification::Hyperbolic) {
      throw PreconditionError("gamma " + gamma.str() + " is not hyperbolic in " + m->id());
    }
  }
  Word hg = h * gamma.pow(n);
  for (const ActionModel* m : {&a, &b}) {
    if (m->classify(m->element(hg)) != Classification::Hyperbolic) {
      throw PreconditionError("h gamma^n = " + hg.str() + " is not hyperbolic in " + m->id());
    }
  }
  BoundaryPoint gplus = BoundaryPoint::fixed_plus(gamma);
  BoundaryPoint gminus = BoundaryPoint::fixed_minus(a, a.element(gamma));
  BoundaryPoint hgplus = BoundaryPoint::fixed_plus(hg);
  BoundaryPoint hgminus = gminus.translated(a, a.element(h));
  auto named = [&](const char* what, auto&& f) {
    try {
      return f();
    } catch (const CoincidentBoundaryPoints&) {
      throw PreconditionError(std::string(what) + " for h = " + h.str() + ", gamma = " +
                              gamma.str() + ", n = " + std::to_string(n));
    }
  };
  named("h gamma+ = gamma-", [&] {
    return extended_gromov(a, gplus.translated(a, a.element(h)), gminus, policy);
  });
  IntervalValue g1 =
      named("(h gamma^n)+ = gamma-", [&] { return detail::product_gap(a, b, gminus, hgplus, policy); });
  IntervalValue g2 = named("(h gamma^n)+ = h gamma-",
                           [&] { return detail::product_gap(a, b, hgminus, hgplus, policy); });
  CosetDefect out;
  constexpr auto inv = CocycleConvention::Inverse;
  out.value = g1 - g2 -
              0.5 * (detail::cocycle_gap(a, b, hg, gminus, inv, policy) +
                     detail::cocycle_gap(a, b, hg, hgplus, inv, policy));
  out.literal = g1 - g2 - detail::cocycle_gap(a, b, hg, gminus, conv, policy) -
                detail::cocycle_gap(a, b, hg, hgplus, conv, policy);
  out.bound = 8 * std::max(a.delta(), b.delta());
  out.pass = out.value.contains(0, out.bound);
  for (long long k = 1; k <= drift_limit; k *= 2) {
    IntervalValue c = detail::cocycle_gap(a, b, gamma.pow(k), gminus, conv, policy);
    out.drift.emplace_back(k, (1.0 / static_cast<double>(k)) * c);
  }
  return out;
}

}  // namespace hyperlab
