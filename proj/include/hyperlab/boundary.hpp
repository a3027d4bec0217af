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

// Boundary points as lazily evaluated rays, and the Gromov product extended
// to the boundary.
//
// A boundary point is represented by a sequence n -> x_n converging to it:
// u v^n o for an element v with an axis, or a unit-speed geodesic ray from
// the base point in the upper half plane. On the free tree the limit is an
// eventually periodic infinite word and products are computed exactly;
// elsewhere the liminf is approximated over a window of ray indices.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/mat2.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/spaces.hpp"
#include "hyperlab/word.hpp"

namespace hyperlab {

enum class BoundaryOrigin { FixedPlus, FixedMinus, InfiniteWord, ExplicitRay };

class BoundaryPoint {
 public:
  // gamma^+ = lim gamma^n o.
  static BoundaryPoint fixed_plus(GroupElement gamma) {
    BoundaryPoint x(BoundaryOrigin::FixedPlus);
    x.period_ = std::move(gamma);
    x.label_ = "+(" + describe(x.period_) + ")";
    return x;
  }

  // gamma^- = lim gamma^-n o, stored with the inverse as period.
  static BoundaryPoint fixed_minus(const ActionModel& model, const GroupElement& gamma) {
    BoundaryPoint x(BoundaryOrigin::FixedMinus);
    x.period_ = model.inverse(gamma);
    x.label_ = "-(" + describe(gamma) + ")";
    return x;
  }

  // lim u v^n o.
  static BoundaryPoint infinite_word(GroupElement prefix, GroupElement period) {
    BoundaryPoint x(BoundaryOrigin::InfiniteWord);
    x.prefix_ = std::move(prefix);
    x.period_ = std::move(period);
    x.label_ = describe(x.prefix_) + "(" + describe(x.period_) + ")^inf";
    return x;
  }

  // The endpoint xi of the upper half plane boundary (kInfinity allowed).
  static BoundaryPoint explicit_ray(BoundaryReal xi) {
    BoundaryPoint x(BoundaryOrigin::ExplicitRay);
    x.endpoint_ = xi;
    x.label_ = std::isinf(xi) ? std::string("ray(inf)") : "ray(" + std::to_string(xi) + ")";
    return x;
  }

  BoundaryOrigin origin() const noexcept { return origin_; }
  const GroupElement& prefix() const noexcept { return prefix_; }
  const GroupElement& period() const noexcept { return period_; }
  BoundaryReal endpoint() const noexcept { return endpoint_; }
  const std::string& label() const noexcept { return label_; }
  bool is_ray() const noexcept { return origin_ == BoundaryOrigin::ExplicitRay; }

  // The n-th point of the defining sequence.
  Point ray(const ActionModel& model, long long n) const {
    if (is_ray()) {
      if (model.kind() != ModelKind::UpperHalfPlane) {
        throw ConfigError("explicit rays exist only in the upper half plane");
      }
      Complex o = complex_of(model.base());
      Mat2 to_base = translation_to(o);
      BoundaryReal target = to_base.inverse().apply(endpoint_);
      double theta = std::isinf(target) ? 0.0 : std::atan2(1.0, target);
      Mat2 rot{std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
      double t = static_cast<double>(n);
      return model.apply(to_base * rot, Point{Complex(0, std::exp(t))});
    }
    if (model.kind() == ModelKind::UpperHalfPlane) {
      ScaledMat2 s = model.scaled_matrix_of(prefix_) * model.scaled_matrix_of(period_).pow(n);
      Complex z = s.apply(complex_of(model.base()));
      if (!model.in_range(z)) {
        throw BudgetExceeded("ray point of " + label_ + " left double-precision range");
      }
      return z;
    }
    GroupElement g = model.compose(prefix_, model.power(period_, n));
    return model.orbit_point(g);
  }

  // On the upper half plane, the same point as an explicit endpoint. Used
  // when the orbit points of a long word leave the usable range.
  BoundaryPoint resolved(const ActionModel& model) const {
    if (is_ray() || model.kind() != ModelKind::UpperHalfPlane) {
      return *this;
    }
    BoundaryReal xi = attracting_fixed_point(model.scaled_matrix_of(period_).unit);
    BoundaryPoint x = explicit_ray(model.scaled_matrix_of(prefix_).unit.apply(xi));
    x.label_ = label_;
    return x;
  }

  // eta . x.
  BoundaryPoint translated(const ActionModel& model, const GroupElement& eta) const {
    if (is_ray()) {
      return explicit_ray(model.matrix_of(eta).apply(endpoint_));
    }
    BoundaryPoint x = infinite_word(model.compose(eta, prefix_), period_);
    x.label_ = describe(eta) + "." + label_;
    return x;
  }

 private:
  explicit BoundaryPoint(BoundaryOrigin origin) : origin_(origin) {}

  static std::string describe(const GroupElement& g) {
    if (const auto* w = std::get_if<Word>(&g)) {
      if (w->size() > 48) {
        return w->prefix(16).str() + "..[" + std::to_string(w->size()) + "]";
      }
      return w->str();
    }
    const Mat2& m = std::get<Mat2>(g);
    return "[" + std::to_string(m.a) + "," + std::to_string(m.b) + "," + std::to_string(m.c) +
           "," + std::to_string(m.d) + "]";
  }

  BoundaryOrigin origin_;
  GroupElement prefix_ = Word{};
  GroupElement period_ = Word{};
  BoundaryReal endpoint_ = 0;
  std::string label_;
};

// (gamma^+, gamma^-); PreconditionError when gamma has no axis.
inline std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const ActionModel& model,
                                                            const GroupElement& gamma) {
  if (model.classify(gamma) != Classification::Hyperbolic) {
    throw PreconditionError("no axis: element " + model.format(gamma) + " is not hyperbolic");
  }
  return {BoundaryPoint::fixed_plus(gamma), BoundaryPoint::fixed_minus(model, gamma)};
}

// Endpoint on R u {inf} of a boundary point of the upper half plane.
inline BoundaryReal boundary_real(const ActionModel& model, const BoundaryPoint& x) {
  if (!x.is_ray() && model.kind() != ModelKind::UpperHalfPlane) {
    throw ConfigError("real boundary coordinates exist only in the upper half plane");
  }
  return x.resolved(model).endpoint();
}

// --- exact evaluation on the free tree ----------------------------------------

// head . period^inf as a reduced infinite word: period is cyclically reduced
// and head does not cancel against it.
struct PeriodicWord {
  Word head;
  Word period;

  Letter at(std::size_t i) const {
    if (i < head.size()) {
      return head[i];
    }
    return period[(i - head.size()) % period.size()];
  }
};

inline PeriodicWord periodic_form(const BoundaryPoint& x) {
  if (x.is_ray()) {
    throw ConfigError("explicit rays have no infinite-word form");
  }
  auto [conj, core] = word_of(x.period()).cyclic_decomposition();
  if (core.empty()) {
    throw PreconditionError("period " + word_of(x.period()).str() + " has no axis");
  }
  Word head = word_of(x.prefix()) * conj;
  std::vector<Letter> p(core.begin(), core.end());
  while (!head.empty() && head.back() == inverse_letter(p.front())) {
    head = head.prefix(head.size() - 1);
    std::rotate(p.begin(), p.begin() + 1, p.end());
  }
  return {std::move(head), Word(std::span<const Letter>(p))};
}

// Length of the common prefix of two infinite words, or nullopt if they are
// equal. Two eventually periodic words agreeing on max(|h|) + |p1| + |p2|
// letters agree forever.
inline std::optional<std::size_t> common_prefix(const PeriodicWord& x, const PeriodicWord& y) {
  std::size_t bound =
      std::max(x.head.size(), y.head.size()) + x.period.size() + y.period.size();
  for (std::size_t i = 0; i < bound; ++i) {
    if (x.at(i) != y.at(i)) {
      return i;
    }
  }
  return std::nullopt;
}

inline std::size_t common_prefix(const Word& p, const PeriodicWord& x) {
  std::size_t i = 0;
  while (i < p.size() && p[i] == x.at(i)) {
    ++i;
  }
  return i;
}

// --- generic evaluation ------------------------------------------------------

struct DepthPolicy {
  long long initial = 16;
  long long ceiling = 1LL << 14;
  // Stop doubling once the window minimum moves by less than this.
  double stable_tol = 0.01;
  // Products beyond this are treated as coincident points.
  double divergence_ceiling = 1000;
  // Ray indices sampled per window.
  int window_samples = 8;
};

namespace detail {

// Largest n <= limit whose ray point is usable (inside the ball, within the
// model's ray distance). Assumes usability is monotone along the ray.
inline long long ray_depth(const ActionModel& model, const BoundaryPoint& x, long long limit) {
  if (model.kind() == ModelKind::FreeTree) {
    return limit;
  }
  double cap = model.max_ray_distance();
  if (x.is_ray()) {
    return std::max<long long>(1, std::min<long long>(limit, static_cast<long long>(cap)));
  }
  auto usable = [&](long long n) {
    try {
      Point p = x.ray(model, n);
      return model.in_range(p) && model.distance(model.base(), p) <= cap;
    } catch (const BudgetExceeded&) {
      return false;
    }
  };
  if (usable(limit)) {
    return limit;
  }
  long long lo = 0;
  long long hi = limit;
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (usable(mid) ? lo : hi) = mid;
  }
  if (lo == 0) {
    throw BudgetExceeded("boundary point " + x.label() + " has no usable ray point in model " +
                         model.id());
  }
  return lo;
}

// x itself when its first ray point is usable, else its explicit endpoint.
inline BoundaryPoint usable_form(const ActionModel& model, const BoundaryPoint& x) {
  if (model.kind() != ModelKind::UpperHalfPlane || x.is_ray()) {
    return x;
  }
  try {
    Point p = x.ray(model, 1);
    if (model.in_range(p) && model.distance(model.base(), p) <= model.max_ray_distance()) {
      return x;
    }
  } catch (const BudgetExceeded&) {
  }
  return x.resolved(model);
}

inline std::vector<long long> window(long long top, int samples) {
  long long lo = std::max<long long>(1, (top + 1) / 2);
  std::vector<long long> out;
  long long span = top - lo;
  int k = static_cast<int>(std::min<long long>(samples, span + 1));
  for (int i = 0; i < k; ++i) {
    long long n = k == 1 ? top : lo + span * i / (k - 1);
    if (out.empty() || out.back() != n) {
      out.push_back(n);
    }
  }
  return out;
}

struct RayCache {
  const ActionModel& model;
  const BoundaryPoint& x;
  std::vector<std::pair<long long, Point>> points;

  const Point& at(long long n) {
    for (const auto& [k, p] : points) {
      if (k == n) {
        return p;
      }
    }
    points.emplace_back(n, x.ray(model, n));
    return points.back().second;
  }
};

}  // namespace detail

// <x, y>_o for boundary points x, y.
inline IntervalValue extended_gromov(const ActionModel& model, const BoundaryPoint& x,
                                     const BoundaryPoint& y, const Point& o,
                                     const DepthPolicy& policy = {}) {
  if (model.kind() == ModelKind::FreeTree) {
    PeriodicWord fx = periodic_form(x);
    PeriodicWord fy = periodic_form(y);
    auto c = common_prefix(fx, fy);
    if (!c) {
      throw CoincidentBoundaryPoints("boundary points " + x.label() + " and " + y.label() +
                                     " coincide");
    }
    const Word& ow = vertex_of(o);
    double a = static_cast<double>(common_prefix(ow, fx));
    double b = static_cast<double>(common_prefix(ow, fy));
    return IntervalValue::exact(static_cast<double>(ow.size()) + static_cast<double>(*c) - a - b);
  }
  double delta = model.delta();
  double prev = 0;
  bool have_prev = false;
  double m = 0;
  long long top = 0;
  double dx = 0;
  double dy = 0;
  BoundaryPoint ux = detail::usable_form(model, x);
  BoundaryPoint uy = detail::usable_form(model, y);
  detail::RayCache cx{model, ux, {}};
  detail::RayCache cy{model, uy, {}};
  for (long long n = policy.initial;; n *= 2) {
    long long nx = detail::ray_depth(model, ux, n);
    long long ny = detail::ray_depth(model, uy, n);
    auto wx = detail::window(nx, policy.window_samples);
    auto wy = detail::window(ny, policy.window_samples);
    m = kInfinity;
    for (long long i : wx) {
      for (long long j : wy) {
        m = std::min(m, gromov_product(model, cx.at(i), cy.at(j), o));
      }
    }
    dx = model.distance(o, cx.at(wx.front()));
    dy = model.distance(o, cy.at(wy.front()));
    top = std::max(nx, ny);
    bool clipped = nx < n && ny < n;
    if ((have_prev && std::abs(m - prev) < policy.stable_tol) || n >= policy.ceiling || clipped) {
      break;
    }
    prev = m;
    have_prev = true;
  }
  if (m > policy.divergence_ceiling + 2 * delta || m >= std::min(dx, dy) - (2 * delta + 1)) {
    throw CoincidentBoundaryPoints("boundary points " + x.label() + " and " + y.label() +
                                   " appear to coincide (product " + std::to_string(m) + ")");
  }
  return {m, m + 2 * delta + model.float_tol(), m, static_cast<int>(top)};
}

inline IntervalValue extended_gromov(const ActionModel& model, const BoundaryPoint& x,
                                     const BoundaryPoint& y, const DepthPolicy& policy = {}) {
  return extended_gromov(model, x, y, model.base(), policy);
}

// <p, x>_o for a point p and a boundary point x.
inline IntervalValue extended_gromov(const ActionModel& model, const Point& p,
                                     const BoundaryPoint& x, const Point& o,
                                     const DepthPolicy& policy = {}) {
  if (model.kind() == ModelKind::FreeTree) {
    PeriodicWord fx = periodic_form(x);
    const Word& pw = vertex_of(p);
    const Word& ow = vertex_of(o);
    double a = static_cast<double>(common_prefix(ow, fx));
    double c = static_cast<double>(common_prefix(pw, fx));
    double v = 0.5 * (model.distance(p, o) + static_cast<double>(ow.size()) -
                      static_cast<double>(pw.size()) - 2 * a + 2 * c);
    return IntervalValue::exact(v);
  }
  double delta = model.delta();
  double prev = 0;
  bool have_prev = false;
  double m = 0;
  long long top = 0;
  BoundaryPoint ux = detail::usable_form(model, x);
  detail::RayCache cx{model, ux, {}};
  for (long long n = policy.initial;; n *= 2) {
    long long nx = detail::ray_depth(model, ux, n);
    m = kInfinity;
    for (long long j : detail::window(nx, policy.window_samples)) {
      m = std::min(m, gromov_product(model, p, cx.at(j), o));
    }
    top = nx;
    if ((have_prev && std::abs(m - prev) < policy.stable_tol) || n >= policy.ceiling || nx < n) {
      break;
    }
    prev = m;
    have_prev = true;
  }
  return {m, m + 2 * delta + model.float_tol(), m, static_cast<int>(top)};
}

// Whether x and y are the same boundary point (exact on the tree, by the
// coincidence test of the window evaluation elsewhere).
inline bool same_boundary_point(const ActionModel& model, const BoundaryPoint& x,
                                const BoundaryPoint& y, const DepthPolicy& policy = {}) {
  try {
    extended_gromov(model, x, y, policy);
    return false;
  } catch (const CoincidentBoundaryPoints&) {
    return true;
  }
}

// Attracting fixed points of hyperbolic elements in the ball of the given
// radius, one per boundary point, in canonical order. When more than `count`
// distinct points exist a seeded subset is returned.
inline std::vector<BoundaryPoint> limit_set_sample(const ActionModel& model, std::size_t count,
                                                   int radius, std::uint64_t seed,
                                                   const DepthPolicy& policy = {}) {
  std::vector<BoundaryPoint> distinct;
  for (const auto& g : ball_enumerate(model, radius)) {
    if (model.classify(g) != Classification::Hyperbolic) {
      continue;
    }
    BoundaryPoint x = BoundaryPoint::fixed_plus(g);
    bool fresh = true;
    for (const auto& y : distinct) {
      if (same_boundary_point(model, x, y, policy)) {
        fresh = false;
        break;
      }
    }
    if (fresh) {
      distinct.push_back(std::move(x));
    }
  }
  if (distinct.empty()) {
    throw PreconditionError("no hyperbolic element in the ball of radius " +
                            std::to_string(radius));
  }
  if (distinct.size() <= count) {
    return distinct;
  }
  Rng rng(seed, "limit_set_sample");
  std::vector<std::size_t> idx(distinct.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = i;
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<BoundaryPoint> out;
  for (std::size_t i : idx) {
    out.push_back(distinct[i]);
  }
  return out;
}

}  // namespace hyperlab
