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

// Concrete isometric actions of finitely generated groups on hyperbolic
// spaces:
//
//   FreeTree(k)         F_k acting on its Cayley tree (exact integer metric).
//   WordMetricBall      F_k with the word metric of an arbitrary finite
//                       generating set S, realised on a BFS-enumerated ball.
//   UpperHalfPlane      a subgroup of SL(2,R) given by matrix generators
//                       acting on H^2 by Moebius maps.
//
// All three share one currency for group elements: words over the k free
// generators. A word names the same element in every model of the same rank,
// which is how two actions are compared.

#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/mat2.hpp"
#include "hyperlab/word.hpp"

namespace hyperlab {

enum class ModelKind { FreeTree, WordMetricBall, UpperHalfPlane };

enum class Classification { Hyperbolic, Parabolic, EllipticOrIdentity };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::FreeTree:
      return "free_tree";
    case ModelKind::WordMetricBall:
      return "word_metric_ball";
    case ModelKind::UpperHalfPlane:
      return "upper_half_plane";
  }
  return "?";
}

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::Hyperbolic:
      return "hyperbolic";
    case Classification::Parabolic:
      return "parabolic";
    case Classification::EllipticOrIdentity:
      return "elliptic-or-identity";
  }
  return "?";
}

// A vertex (FreeTree), a ball element (WordMetricBall) or a point of H^2.
using Point = std::variant<Word, Complex>;

// Word form, or an explicit matrix for UpperHalfPlane.
using GroupElement = std::variant<Word, Mat2>;

inline const Word& word_of(const GroupElement& g) {
  if (const auto* w = std::get_if<Word>(&g)) {
    return *w;
  }
  throw ConfigError("operation requires a group element in word form");
}

inline const Word& vertex_of(const Point& p) {
  if (const auto* w = std::get_if<Word>(&p)) {
    return *w;
  }
  throw ConfigError("point is not a vertex of a combinatorial model");
}

inline Complex complex_of(const Point& p) {
  if (const auto* z = std::get_if<Complex>(&p)) {
    return *z;
  }
  throw ConfigError("point is not a point of the upper half plane");
}

struct ModelTolerances {
  // Slack for floating-point comparisons (distance symmetry, isometry).
  double float_tol = 1e-9;
  // Half-width around |trace| = 2 inside which an element counts as parabolic.
  double trace_tol = 1e-9;
  // Rays are truncated once they leave this distance from the base point.
  double max_ray_distance = 60;
};

class ActionModel {
 public:
  static ActionModel free_tree(int rank, Word base = {}, std::string id = "tree") {
    if (rank < 1 || rank > 26) {
      throw ConfigError("free tree rank must be in [1, 26], got " + std::to_string(rank));
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = ModelKind::FreeTree;
    impl->rank = rank;
    impl->id = std::move(id);
    return ActionModel(std::move(impl), Point{std::move(base)});
  }

  // Word metric on F_rank with respect to `generators` (words in the free
  // basis). The ball of the given radius is enumerated eagerly; at most
  // `vertex_budget` vertices are stored.
  static ActionModel word_metric_ball(int rank, std::vector<Word> generators, int radius,
                                      std::size_t vertex_budget = 2'000'000, Word base = {},
                                      std::string id = "wordball") {
    if (rank < 1 || rank > 26) {
      throw ConfigError("word metric rank must be in [1, 26]");
    }
    if (generators.empty()) {
      throw ConfigError("word metric ball needs at least one generator");
    }
    if (radius < 0) {
      throw ConfigError("radius must be >= 0");
    }
    for (const auto& g : generators) {
      if (g.empty() || g.max_generator() >= rank) {
        throw ConfigError("generator " + g.str() + " is not a nontrivial word of rank " +
                          std::to_string(rank));
      }
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = ModelKind::WordMetricBall;
    impl->rank = rank;
    impl->id = std::move(id);
    impl->word_generators = std::move(generators);
    impl->radius = radius;
    impl->vertex_budget = vertex_budget;
    impl->build_ball();
    ActionModel m(std::move(impl), Point{std::move(base)});
    if (!m.impl_->ball.contains(vertex_of(m.base_))) {
      throw BallExceeded("base point outside the enumerated ball", radius + 1);
    }
    return m;
  }

  static ActionModel upper_half_plane(std::vector<Mat2> generators, Complex base = {0, 1},
                                      std::string id = "hplane",
                                      ModelTolerances tol = {}) {
    if (generators.empty()) {
      throw ConfigError("upper half plane model needs at least one generator");
    }
    if (!(base.imag() > 0)) {
      throw ConfigError("upper half plane base point must have positive imaginary part");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = ModelKind::UpperHalfPlane;
    impl->rank = static_cast<int>(generators.size());
    impl->id = std::move(id);
    for (auto& g : generators) {
      g = g.normalized();
    }
    impl->matrix_generators = std::move(generators);
    impl->tolerances = tol;
    return ActionModel(std::move(impl), Point{base});
  }

  ModelKind kind() const noexcept { return impl_->kind; }
  const std::string& id() const noexcept { return impl_->id; }
  int rank() const noexcept { return impl_->rank; }
  const Point& base() const noexcept { return base_; }
  bool exact() const noexcept { return impl_->kind != ModelKind::UpperHalfPlane; }
  double delta() const noexcept { return delta_; }
  const ModelTolerances& tolerances() const noexcept { return impl_->tolerances; }
  double float_tol() const noexcept { return exact() ? 0.0 : impl_->tolerances.float_tol; }
  int ball_radius() const noexcept { return impl_->radius; }
  const std::vector<Word>& word_generators() const noexcept { return impl_->word_generators; }
  const std::vector<Mat2>& matrix_generators() const noexcept {
    return impl_->matrix_generators;
  }
  bool quasi_parabolic() const noexcept { return quasi_parabolic_; }

  ActionModel with_base(Point base) const {
    ActionModel m = *this;
    m.base_ = std::move(base);
    m.check_point(m.base_);
    return m;
  }
  ActionModel with_delta(double delta) const {
    ActionModel m = *this;
    m.delta_ = delta;
    return m;
  }
  ActionModel with_id(std::string id) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->id = std::move(id);
    ActionModel m = *this;
    m.impl_ = std::move(impl);
    return m;
  }
  ActionModel with_quasi_parabolic(bool flag) const {
    ActionModel m = *this;
    m.quasi_parabolic_ = flag;
    return m;
  }

  // --- group structure -----------------------------------------------------

  GroupElement element(const Word& w) const {
    if (w.max_generator() >= rank()) {
      throw ConfigError("word " + w.str() + " uses a generator outside rank " +
                        std::to_string(rank()));
    }
    return w;
  }
  GroupElement identity() const { return Word{}; }

  GroupElement compose(const GroupElement& x, const GroupElement& y) const {
    if (const auto* wx = std::get_if<Word>(&x)) {
      if (const auto* wy = std::get_if<Word>(&y)) {
        return *wx * *wy;
      }
    }
    return matrix_of(x) * matrix_of(y);
  }

  GroupElement inverse(const GroupElement& x) const {
    if (const auto* w = std::get_if<Word>(&x)) {
      return w->inverse();
    }
    return std::get<Mat2>(x).inverse();
  }

  GroupElement power(const GroupElement& x, long long n) const {
    if (const auto* w = std::get_if<Word>(&x)) {
      return w->pow(n);
    }
    Mat2 m = n >= 0 ? std::get<Mat2>(x) : std::get<Mat2>(x).inverse();
    Mat2 r = Mat2::identity();
    for (long long k = n >= 0 ? n : -n; k > 0; k >>= 1) {
      if ((k & 1) != 0) {
        r = r * m;
      }
      m = m * m;
    }
    return r;
  }

  bool same_element(const GroupElement& x, const GroupElement& y) const {
    if (const auto* wx = std::get_if<Word>(&x)) {
      if (const auto* wy = std::get_if<Word>(&y)) {
        if (kind() != ModelKind::UpperHalfPlane) {
          return *wx == *wy;
        }
      }
    }
    if (kind() != ModelKind::UpperHalfPlane) {
      return false;
    }
    Mat2 d = matrix_of(x) * matrix_of(y).inverse();
    double tol = impl_->tolerances.float_tol;
    // PSL(2,R): m and -m are the same isometry.
    return (std::abs(d.a - 1) < tol && std::abs(d.d - 1) < tol && std::abs(d.b) < tol &&
            std::abs(d.c) < tol) ||
           (std::abs(d.a + 1) < tol && std::abs(d.d + 1) < tol && std::abs(d.b) < tol &&
            std::abs(d.c) < tol);
  }

  Mat2 matrix_of(const GroupElement& g) const {
    if (const auto* m = std::get_if<Mat2>(&g)) {
      return *m;
    }
    if (kind() != ModelKind::UpperHalfPlane) {
      throw ConfigError("model " + id() + " has no matrix representation");
    }
    Mat2 r = Mat2::identity();
    for (Letter x : std::get<Word>(g)) {
      const Mat2& gen = impl_->matrix_generators.at(static_cast<std::size_t>(generator_index(x)));
      r = r * (x > 0 ? gen : gen.inverse());
    }
    return r;
  }

  ScaledMat2 scaled_matrix_of(const GroupElement& g) const {
    if (const auto* m = std::get_if<Mat2>(&g)) {
      return ScaledMat2::from(*m);
    }
    ScaledMat2 r = ScaledMat2::from(Mat2::identity());
    for (Letter x : std::get<Word>(g)) {
      const Mat2& gen = impl_->matrix_generators.at(static_cast<std::size_t>(generator_index(x)));
      r = r * ScaledMat2::from(x > 0 ? gen : gen.inverse());
    }
    return r;
  }

  // log |trace| and the sign-free trace magnitude where representable.
  double log_abs_trace(const GroupElement& g) const {
    ScaledMat2 s = scaled_matrix_of(g);
    return s.log_scale + std::log(std::abs(s.unit.trace()));
  }

  Classification classify(const GroupElement& g) const {
    if (kind() != ModelKind::UpperHalfPlane) {
      return word_of(g).cyclic_reduction().empty() ? Classification::EllipticOrIdentity
                                                    : Classification::Hyperbolic;
    }
    double lt = log_abs_trace(g);
    double tr = lt > 600 ? kInfinity : std::exp(lt);
    double tol = impl_->tolerances.trace_tol;
    if (tr > 2 + tol) {
      return Classification::Hyperbolic;
    }
    if (tr >= 2 - tol) {
      return same_element(g, identity()) ? Classification::EllipticOrIdentity
                                         : Classification::Parabolic;
    }
    return Classification::EllipticOrIdentity;
  }

  // --- the metric and the action --------------------------------------------

  double distance(const Point& p, const Point& q) const {
    switch (kind()) {
      case ModelKind::FreeTree: {
        const Word& u = vertex_of(p);
        const Word& v = vertex_of(q);
        return static_cast<double>(u.size() + v.size() - 2 * common_prefix(u.letters(), v.letters()));
      }
      case ModelKind::WordMetricBall:
        return static_cast<double>(word_length(vertex_of(p).inverse() * vertex_of(q)));
      case ModelKind::UpperHalfPlane:
        return hyperbolic_distance(complex_of(p), complex_of(q));
    }
    return 0;
  }

  Point apply(const GroupElement& g, const Point& p) const {
    if (kind() == ModelKind::UpperHalfPlane) {
      // Long words go through the scaled product to avoid overflow.
      Complex z = std::holds_alternative<Mat2>(g) ? std::get<Mat2>(g).apply(complex_of(p))
                                                  : scaled_matrix_of(g).apply(complex_of(p));
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !(z.imag() > 0)) {
        throw BudgetExceeded("point left double-precision range of the upper half plane");
      }
      return z;
    }
    return word_of(g) * vertex_of(p);
  }

  // g o.
  Point orbit_point(const GroupElement& g) const { return apply(g, base_); }

  // d(o, g^n o), computed without materialising large matrices or points.
  double displacement(const GroupElement& g, long long n = 1) const {
    switch (kind()) {
      case ModelKind::FreeTree: {
        const Word& o = vertex_of(base_);
        Word h = o.inverse() * word_of(g) * o;
        auto [conj, core] = h.cyclic_decomposition();
        long long m = n < 0 ? -n : n;
        if (m == 0 || core.empty()) {
          return 0;
        }
        return static_cast<double>(2 * conj.size()) +
               static_cast<double>(m) * static_cast<double>(core.size());
      }
      case ModelKind::WordMetricBall: {
        const Word& o = vertex_of(base_);
        return static_cast<double>(word_length(o.inverse() * word_of(g).pow(n) * o));
      }
      case ModelKind::UpperHalfPlane: {
        Mat2 to_base = translation_to(complex_of(base_));
        ScaledMat2 h = ScaledMat2::from(to_base.inverse()) * scaled_matrix_of(g) *
                       ScaledMat2::from(to_base);
        if (n < 0) {
          h = ScaledMat2{h.unit.inverse(), h.log_scale};
          n = -n;
        }
        return h.pow(n).displacement();
      }
    }
    return 0;
  }

  // Whether a point can be used as a ray sample (inside the ball, finite).
  bool in_range(const Point& p) const {
    switch (kind()) {
      case ModelKind::FreeTree:
        return true;
      case ModelKind::WordMetricBall:
        return impl_->ball.contains(vertex_of(base_).inverse() * vertex_of(p));
      case ModelKind::UpperHalfPlane: {
        Complex z = complex_of(p);
        return std::isfinite(z.real()) && std::isfinite(z.imag()) && z.imag() > 1e-280;
      }
    }
    return false;
  }

  double max_ray_distance() const noexcept {
    switch (kind()) {
      case ModelKind::FreeTree:
        return kInfinity;
      case ModelKind::WordMetricBall:
        return impl_->radius;
      case ModelKind::UpperHalfPlane:
        return impl_->tolerances.max_ray_distance;
    }
    return 0;
  }

  // S-word length of an element of F_k in the word-metric model.
  int word_length(const Word& w) const {
    auto it = impl_->ball.find(w);
    if (it == impl_->ball.end()) {
      throw BallExceeded("word metric ball of radius " + std::to_string(impl_->radius) +
                             " exceeded by element " + w.str() + "; requires radius > " +
                             std::to_string(impl_->radius),
                         impl_->radius + 1);
    }
    return it->second;
  }

  // Elements of the enumerated word-metric ball in canonical order.
  const std::vector<Word>& ball_elements() const noexcept { return impl_->ball_order; }

  std::string format(const Point& p) const {
    if (const auto* w = std::get_if<Word>(&p)) {
      return w->str();
    }
    std::ostringstream os;
    os.precision(12);
    Complex z = std::get<Complex>(p);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
  }

  std::string format(const GroupElement& g) const {
    if (const auto* w = std::get_if<Word>(&g)) {
      return w->str();
    }
    const Mat2& m = std::get<Mat2>(g);
    std::ostringstream os;
    os.precision(12);
    os << "[" << m.a << "," << m.b << "," << m.c << "," << m.d << "]";
    return os.str();
  }

 private:
  struct Impl {
    ModelKind kind = ModelKind::FreeTree;
    int rank = 2;
    std::string id;
    ModelTolerances tolerances;
    std::vector<Mat2> matrix_generators;
    std::vector<Word> word_generators;
    int radius = 0;
    std::size_t vertex_budget = 0;
    std::unordered_map<Word, int, WordHash> ball;
    std::vector<Word> ball_order;

    // BFS over S and S^-1, in the order s_1, s_1^-1, s_2, ... so that the
    // first discovery of each element follows shortlex order on S-words.
    void build_ball() {
      std::vector<Word> steps;
      for (const auto& s : word_generators) {
        steps.push_back(s);
        steps.push_back(s.inverse());
      }
      ball.emplace(Word{}, 0);
      ball_order.push_back(Word{});
      std::size_t frontier_begin = 0;
      for (int r = 1; r <= radius; ++r) {
        std::size_t frontier_end = ball_order.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
          for (const auto& s : steps) {
            Word next = ball_order[i] * s;
            if (ball.contains(next)) {
              continue;
            }
            if (ball_order.size() >= vertex_budget) {
              throw BudgetExceeded("word metric ball exceeds vertex budget of " +
                                   std::to_string(vertex_budget) + " at radius " +
                                   std::to_string(r));
            }
            ball.emplace(next, r);
            ball_order.push_back(std::move(next));
          }
        }
        frontier_begin = frontier_end;
      }
    }
  };

  ActionModel(std::shared_ptr<const Impl> impl, Point base)
      : impl_(std::move(impl)), base_(std::move(base)) {
    check_point(base_);
  }

  void check_point(const Point& p) const {
    if (impl_->kind == ModelKind::UpperHalfPlane) {
      if (!(complex_of(p).imag() > 0)) {
        throw ConfigError("upper half plane point must have positive imaginary part");
      }
    } else if (vertex_of(p).max_generator() >= impl_->rank) {
      throw ConfigError("vertex " + vertex_of(p).str() + " outside rank");
    }
  }

  std::shared_ptr<const Impl> impl_;
  Point base_;
  double delta_ = 0;
  bool quasi_parabolic_ = false;
};

inline std::size_t free_ball_size(int rank, int radius) {
  std::size_t total = 1;
  std::size_t layer = 2 * static_cast<std::size_t>(rank);
  for (int j = 1; j <= radius; ++j) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

// All reduced words of length <= radius in shortlex order.
inline std::vector<Word> free_ball_words(int rank, int radius,
                                         std::size_t budget = 50'000'000) {
  if (radius < 0) {
    throw ConfigError("radius must be >= 0");
  }
  std::size_t expected = free_ball_size(rank, radius);
  if (expected > budget) {
    throw BudgetExceeded("ball of radius " + std::to_string(radius) + " has " +
                         std::to_string(expected) + " elements, over the budget of " +
                         std::to_string(budget));
  }
  std::vector<Word> out;
  out.reserve(expected);
  out.emplace_back();
  std::size_t layer_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (int key = 0; key < 2 * rank; ++key) {
        Letter x = letter_from_key(key);
        if (!out[i].empty() && out[i].back() == inverse_letter(x)) {
          continue;
        }
        Word next = out[i];
        next.push_back(x);
        out.push_back(std::move(next));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

// Canonical enumeration of group elements of word length <= radius.
inline std::vector<GroupElement> ball_enumerate(const ActionModel& model, int radius,
                                                std::size_t budget = 50'000'000) {
  std::vector<GroupElement> out;
  if (model.kind() == ModelKind::WordMetricBall) {
    if (radius > model.ball_radius()) {
      throw BallExceeded("requested radius " + std::to_string(radius) +
                             " beyond the enumerated ball; requires radius " +
                             std::to_string(radius),
                         radius);
    }
    for (const auto& w : model.ball_elements()) {
      if (model.word_length(w) > radius) {
        break;
      }
      if (out.size() >= budget) {
        throw BudgetExceeded("enumeration exceeds budget of " + std::to_string(budget));
      }
      out.emplace_back(w);
    }
    return out;
  }
  for (auto& w : free_ball_words(model.rank(), radius, budget)) {
    out.emplace_back(std::move(w));
  }
  return out;
}

// <p,q>_o = (d(p,o) + d(q,o) - d(p,q)) / 2.
inline double gromov_product(const ActionModel& model, const Point& p, const Point& q,
                             const Point& o) {
  return 0.5 * (model.distance(p, o) + model.distance(q, o) - model.distance(p, q));
}

inline double gromov_product(const ActionModel& model, const Point& p, const Point& q) {
  return gromov_product(model, p, q, model.base());
}

}  // namespace hyperlab
