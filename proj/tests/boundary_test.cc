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

#include "hyperlab/boundary.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "hyperlab/error.hpp"
#include "hyperlab/gromov.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {
namespace {

Word W(const std::string& s) { return parse_word(s, 2); }

BoundaryPoint Inf(const std::string& prefix, const std::string& period) {
  return BoundaryPoint::infinite_word(W(prefix), W(period));
}

ActionModel Schottky(double delta = 0.7) {
  return ActionModel::upper_half_plane(
             {Mat2{3, 0, 0, 1.0 / 3}, Mat2{5.0 / 3, 4.0 / 3, 4.0 / 3, 5.0 / 3}})
      .with_delta(delta);
}

// Product of two ideal points seen from i: -log sin(theta / 2), theta the
// angle at i between the two geodesic rays.
double IdealProductAtI(BoundaryReal x, BoundaryReal y) {
  auto direction = [](BoundaryReal t) {
    return std::isinf(t) ? Complex(1, 0) : (Complex(t, 0) - Complex(0, 1)) / (Complex(t, 0) + Complex(0, 1));
  };
  double theta = std::abs(std::arg(direction(x) / direction(y)));
  return -std::log(std::sin(theta / 2));
}

// Truncate an infinite word far out and take the finite product.
Word Truncate(const BoundaryPoint& x, long long n) {
  return word_of(x.prefix()) * word_of(x.period()).pow(n);
}

TEST(PeriodicFormTest, JunctionIsCancelled) {
  PeriodicWord f = periodic_form(Inf("aB", "bbA"));
  // aB (bbA)^inf = a b A b b A ... = a (bAb)^inf.
  EXPECT_EQ(f.head, W("a"));
  EXPECT_EQ(f.period, W("bAb"));
  PeriodicWord g = periodic_form(Inf("", "abA"));
  EXPECT_EQ(g.head, W("a"));
  EXPECT_EQ(g.period, W("b"));
}

TEST(ExtendedGromovTest, TreeExamples) {
  ActionModel tree = ActionModel::free_tree(2);
  IntervalValue v = extended_gromov(tree, Inf("", "a"), Inf("", "b"));
  EXPECT_EQ(v.lower, 0);
  EXPECT_EQ(v.upper, 0);
  v = extended_gromov(tree, Inf("", "a"), Inf("a", "b"));
  EXPECT_EQ(v.lower, 1);
  EXPECT_EQ(v.upper, 1);
  EXPECT_THROW(extended_gromov(tree, Inf("", "a"), Inf("aaa", "aa")), CoincidentBoundaryPoints);
  EXPECT_THROW(extended_gromov(tree, Inf("", "ab"), Inf("aba", "ba")), CoincidentBoundaryPoints);
}

TEST(ExtendedGromovTest, TreeAgreesWithDeepTruncation) {
  ActionModel tree = ActionModel::free_tree(2);
  auto ball = free_ball_words(2, 3);
  Rng rng(21);
  int compared = 0;
  while (compared < 400) {
    const Word& u1 = ball[rng.below(ball.size())];
    const Word& v1 = ball[rng.below(ball.size())];
    const Word& u2 = ball[rng.below(ball.size())];
    const Word& v2 = ball[rng.below(ball.size())];
    const Word& o = ball[rng.below(ball.size())];
    if (v1.cyclic_reduction().empty() || v2.cyclic_reduction().empty()) {
      continue;
    }
    BoundaryPoint x = BoundaryPoint::infinite_word(u1, v1);
    BoundaryPoint y = BoundaryPoint::infinite_word(u2, v2);
    double deep = gromov_product(tree, Truncate(x, 40), Truncate(y, 40), o);
    if (deep > 30) {
      EXPECT_THROW(extended_gromov(tree, x, y, o), CoincidentBoundaryPoints);
      continue;
    }
    IntervalValue v = extended_gromov(tree, x, y, o);
    EXPECT_EQ(v.lower, deep) << x.label() << " " << y.label() << " at " << o.str();
    EXPECT_EQ(v.width(), 0);
    // Mixed product against the same truncation.
    EXPECT_EQ(extended_gromov(tree, Point{u2}, x, o).lower,
              gromov_product(tree, u2, Truncate(x, 40), o));
    ++compared;
  }
}

TEST(ExtendedGromovTest, HyperbolicPlaneMatchesClosedForm) {
  ActionModel h = Schottky();
  std::vector<BoundaryReal> ends = {-3, -0.4, 0, 0.25, 1, 5, kInfinity};
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      IntervalValue v = extended_gromov(h, BoundaryPoint::explicit_ray(ends[i]),
                                        BoundaryPoint::explicit_ray(ends[j]));
      double oracle = IdealProductAtI(ends[i], ends[j]);
      EXPECT_TRUE(v.contains(oracle, 1e-6)) << ends[i] << " " << ends[j] << ": [" << v.lower
                                            << ", " << v.upper << "] vs " << oracle;
      EXPECT_LE(v.width(), 2 * h.delta() + 1e-6);
    }
  }
  EXPECT_THROW(extended_gromov(h, BoundaryPoint::explicit_ray(0.5),
                               BoundaryPoint::explicit_ray(0.5)),
               CoincidentBoundaryPoints);
}

TEST(ExtendedGromovTest, HyperbolicPlaneWordRaysMatchEndpoints) {
  ActionModel h = Schottky();
  for (const auto& [u, v] : std::vector<std::pair<std::string, std::string>>{
           {"", "a"}, {"", "b"}, {"a", "b"}, {"b", "aB"}, {"", "A"}}) {
    BoundaryPoint x = Inf(u, v);
    BoundaryPoint ray = BoundaryPoint::explicit_ray(boundary_real(h, x));
    BoundaryPoint other = BoundaryPoint::explicit_ray(-0.77);
    IntervalValue a = extended_gromov(h, x, other);
    IntervalValue b = extended_gromov(h, ray, other);
    EXPECT_TRUE(a.overlaps(b, 1e-6)) << x.label();
    EXPECT_THROW(extended_gromov(h, x, ray), CoincidentBoundaryPoints) << x.label();
  }
}

TEST(ExtendedGromovTest, LongWordsFallBackToEndpoints) {
  ActionModel h = Schottky();
  // d(o, g o) is far beyond the ray cap for this word.
  Word g = W("A") * W("B").pow(28);
  BoundaryPoint plus = BoundaryPoint::fixed_plus(g);
  BoundaryPoint minus = BoundaryPoint::fixed_minus(h, g);
  IntervalValue v = extended_gromov(h, plus, minus);
  IntervalValue r = extended_gromov(h, plus.resolved(h), minus.resolved(h));
  EXPECT_TRUE(v.overlaps(r, 1e-9));
  EXPECT_EQ(plus.resolved(h).label(), plus.label());
  // g+ is within reach of A . (B)^inf.
  EXPECT_NEAR(boundary_real(h, plus), boundary_real(h, Inf("A", "B")), 1e-6);
}

TEST(FixedPointsTest, Tree) {
  ActionModel tree = ActionModel::free_tree(2);
  auto [plus, minus] = fixed_points(tree, W("ab"));
  EXPECT_EQ(periodic_form(plus).period, W("ab"));
  EXPECT_EQ(periodic_form(minus).period, W("BA"));
  EXPECT_EQ(vertex_of(plus.ray(tree, 3)), W("ababab"));
  auto [plus2, minus2] = fixed_points(tree, W("abab"));
  EXPECT_TRUE(same_boundary_point(tree, plus, plus2));
  EXPECT_TRUE(same_boundary_point(tree, minus, minus2));
  EXPECT_THROW(fixed_points(tree, Word{}), PreconditionError);
}

TEST(FixedPointsTest, HyperbolicPlane) {
  ActionModel h = ActionModel::upper_half_plane({Mat2{std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)}});
  auto [plus, minus] = fixed_points(h, W("a"));
  EXPECT_TRUE(std::isinf(boundary_real(h, plus)));
  EXPECT_EQ(boundary_real(h, minus), 0);
  EXPECT_THROW(fixed_points(h, Mat2{1, 1, 0, 1}), PreconditionError);
}

TEST(FixedPointsTest, Equivariance) {
  ActionModel tree = ActionModel::free_tree(2);
  auto ball = free_ball_words(2, 2);
  for (const auto& eta : ball) {
    for (const auto& g : ball) {
      if (g.cyclic_reduction().empty()) {
        continue;
      }
      BoundaryPoint moved = BoundaryPoint::fixed_plus(g).translated(tree, eta);
      BoundaryPoint conj = BoundaryPoint::fixed_plus(eta * g * eta.inverse());
      EXPECT_TRUE(same_boundary_point(tree, moved, conj)) << eta.str() << " " << g.str();
    }
  }
  ActionModel h = Schottky();
  for (const auto& eta : free_ball_words(2, 1)) {
    for (const auto& g : {W("a"), W("ab"), W("bA")}) {
      BoundaryPoint moved = BoundaryPoint::fixed_plus(g).translated(h, eta);
      BoundaryPoint conj = BoundaryPoint::fixed_plus(eta * g * eta.inverse());
      BoundaryReal r1 = boundary_real(h, moved);
      BoundaryReal r2 = boundary_real(h, conj);
      if (std::isinf(r1) || std::isinf(r2)) {
        EXPECT_EQ(r1, r2);
      } else {
        EXPECT_NEAR(r1, r2, 1e-9);
      }
      EXPECT_TRUE(same_boundary_point(h, moved, conj)) << eta.str() << " " << g.str();
    }
  }
}

// (eta g^n)^+ approaches eta g^+ as n grows.
TEST(FixedPointsTest, ProductsOfPowersConverge) {
  ActionModel tree = ActionModel::free_tree(2);
  auto ball = free_ball_words(2, 2);
  for (const auto& eta : ball) {
    for (const auto& g : ball) {
      if (g.cyclic_reduction().empty()) {
        continue;
      }
      BoundaryPoint target = BoundaryPoint::fixed_plus(g).translated(tree, eta);
      if (same_boundary_point(tree, target, BoundaryPoint::fixed_minus(tree, g))) {
        continue;
      }
      double prev = -1;
      for (long long n : {4, 8, 16, 32}) {
        BoundaryPoint x = BoundaryPoint::fixed_plus(eta * g.pow(n));
        double v = same_boundary_point(tree, x, target)
                       ? kInfinity
                       : extended_gromov(tree, x, target).estimate;
        EXPECT_TRUE(v > prev || std::isinf(v)) << eta.str() << " " << g.str() << " n=" << n;
        prev = v;
      }
    }
  }
}

TEST(LimitSetSampleTest, Tree) {
  ActionModel tree = ActionModel::free_tree(2);
  auto pts = limit_set_sample(tree, 1000, 2, 1);
  bool has_a = false, has_b = false;
  for (const auto& x : pts) {
    has_a = has_a || same_boundary_point(tree, x, Inf("", "a"));
    has_b = has_b || same_boundary_point(tree, x, Inf("", "b"));
  }
  EXPECT_TRUE(has_a);
  EXPECT_TRUE(has_b);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      EXPECT_NO_THROW(extended_gromov(tree, pts[i], pts[j]));
    }
  }
  EXPECT_EQ(limit_set_sample(tree, 1, 2, 1).size(), 1u);
  EXPECT_THROW(limit_set_sample(tree, 1, 0, 1), PreconditionError);
}

}  // namespace
}  // namespace hyperlab
