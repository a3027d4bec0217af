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


#include "hyperlab/filling.hpp"

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

Mat2 Diag(double s) { return {s, 0, 0, 1 / s}; }

std::vector<Mat2> SchottkyGens() { return {Diag(3), Mat2{5.0 / 3, 4.0 / 3, 4.0 / 3, 5.0 / 3}}; }

ActionModel Schottky() { return ActionModel::upper_half_plane(SchottkyGens()).with_delta(0.7); }

ActionModel Conjugated() {
  Mat2 m{2, 1, 1, 1};
  std::vector<Mat2> gens;
  for (const Mat2& g : SchottkyGens()) {
    gens.push_back(m * g * m.inverse());
  }
  return ActionModel::upper_half_plane(gens, {0, 1}, "hplane-conj").with_delta(0.7);
}

Word RandomWord(Rng& rng, int len) {
  Word w;
  while (static_cast<int>(w.size()) < len) {
    w.push_back(letter_from_key(static_cast<int>(rng.below(4))));
  }
  return w;
}

Word RandomHyperbolic(Rng& rng, int max_len) {
  for (;;) {
    Word w = RandomWord(rng, static_cast<int>(rng.between(1, max_len)));
    if (!w.cyclic_reduction().empty()) {
      return w;
    }
  }
}

TEST(MetricInstanceTest, RejectsSmallK) {
  ActionModel tree = ActionModel::free_tree(2);
  EXPECT_THROW(MetricInstance(tree, Word{}, {}, 100), ConfigError);
  EXPECT_NO_THROW(MetricInstance(tree, Word{}, {}, 101));
}

TEST(RhoTest, TreeExamples) {
  ActionModel tree = ActionModel::free_tree(2);
  std::vector<BoundaryPoint> w = default_witnesses(tree, 2);
  MetricInstance de(tree, Word{}, w);
  EXPECT_EQ(rho_distance(de, de).value.estimate, 0);
  MetricInstance dq(tree, W("ab"), w);
  RhoEstimate r = rho_distance(de, dq, line_extension_witnesses(tree, Word{}, W("ab")));
  EXPECT_EQ(r.value.lower, 2);
  EXPECT_EQ(r.value.upper, 2);
  EXPECT_THROW(rho_distance(MetricInstance(tree, Word{}), MetricInstance(tree, W("a"))),
               ConfigError);
}

TEST(RhoTest, SymmetricAndTriangle) {
  ActionModel tree = ActionModel::free_tree(2);
  std::vector<BoundaryPoint> w = default_witnesses(tree, 3);
  Rng rng(5, "rho-triangle");
  for (int t = 0; t < 20; ++t) {
    MetricInstance a(tree, RandomWord(rng, 3), w);
    MetricInstance b(tree, RandomWord(rng, 3), w);
    MetricInstance c(tree, RandomWord(rng, 3), w);
    double ab = rho_distance(a, b).value.estimate;
    EXPECT_EQ(ab, rho_distance(b, a).value.estimate);
    EXPECT_LE(rho_distance(a, c).value.estimate, ab + rho_distance(b, c).value.estimate);
  }
}

TEST(EmbeddingTest, TreeIsExact) {
  ActionModel tree = ActionModel::free_tree(2);
  EmbeddingCheck e = embedding_check(tree, Word{}, W("abab"));
  EXPECT_EQ(e.rho.value.lower, 4);
  EXPECT_TRUE(e.pass);
  EXPECT_THROW(embedding_check(tree, W("ab"), W("ab")), PreconditionError);
  Rng rng(7, "embedding");
  for (int t = 0; t < 100; ++t) {
    Word p = RandomWord(rng, static_cast<int>(rng.between(0, 500)));
    Word q = RandomWord(rng, static_cast<int>(rng.between(0, 500)));
    if (p == q) {
      continue;
    }
    EmbeddingCheck c = embedding_check(tree, p, q);
    EXPECT_EQ(c.rho.value.lower, c.distance);
    EXPECT_EQ(c.rho.value.upper, c.distance);
    EXPECT_TRUE(c.pass);
  }
}

TEST(EmbeddingTest, UpperHalfPlaneBounds) {
  ActionModel h = Schottky();
  Rng rng(11, "embedding-hplane");
  for (int t = 0; t < 10; ++t) {
    Complex p = detail::disk_point(rng, {0, 1}, 3);
    Complex q = detail::disk_point(rng, {0, 1}, 3);
    EmbeddingCheck c = embedding_check(h, p, q);
    EXPECT_TRUE(c.pass) << c.distance << " " << c.rho.value.estimate;
    EXPECT_LE(c.rho.value.lower, c.distance + 4 * h.delta());
    // The orthogonal witness pair at q gives log cosh d at p.
    EXPECT_GE(c.rho.value.upper, std::log(std::cosh(c.distance)) - 0.05);
  }
}

TEST(RelativeBusemannTest, TreeExamples) {
  ActionModel tree = ActionModel::free_tree(2);
  MetricInstance de(tree, Word{});
  MetricInstance da(tree, W("a"));
  BoundaryPoint x = BoundaryPoint::fixed_plus(W("a"));
  EXPECT_EQ(relative_busemann(de, de, x).value.estimate, 0);
  RelativeBusemann f = relative_busemann(de, da, x);
  EXPECT_EQ(f.value.lower, 0.5);
  EXPECT_EQ(f.value.upper, 0.5);
  EXPECT_EQ(f.slack, 0.5 * 101);
}

TEST(RelativeBusemannTest, ProductDefectWithinSlack) {
  ActionModel tree = ActionModel::free_tree(2);
  std::vector<BoundaryPoint> w = default_witnesses(tree, 2);
  Rng rng(3, "busemann-defect");
  for (int t = 0; t < 10; ++t) {
    MetricInstance a(tree, RandomWord(rng, 4));
    MetricInstance b(tree, RandomWord(rng, 4));
    for (std::size_t i = 0; i < w.size(); i += 3) {
      for (std::size_t j = i + 1; j < w.size(); j += 5) {
        double lhs = a.product(w[i], w[j]).estimate - b.product(w[i], w[j]).estimate;
        double fx = relative_busemann(a, b, w[i]).value.estimate;
        double fy = relative_busemann(a, b, w[j]).value.estimate;
        EXPECT_LE(std::abs(lhs - fx - fy), 0.5 * a.K + 4 * tree.delta());
      }
    }
  }
}

TEST(SupInfTest, TreeSymmetric) {
  ActionModel tree = ActionModel::free_tree(2);
  MetricInstance de(tree, Word{});
  MetricInstance dq(tree, W("ab"));
  std::vector<BoundaryPoint> w = line_extension_witnesses(tree, Word{}, W("ab"));
  BoundCheck same = supinf_opposite_check(de, de, w);
  EXPECT_EQ(same.value.estimate, 0);
  BoundCheck c = supinf_opposite_check(de, dq, w);
  EXPECT_EQ(c.value.estimate, 0);
  EXPECT_EQ(c.bound, 1.5 * 101);
  EXPECT_TRUE(c.pass);
}

TEST(RhoVsSupTest, TreeExample) {
  ActionModel tree = ActionModel::free_tree(2);
  MetricInstance de(tree, Word{});
  MetricInstance dq(tree, W("ab"));
  RhoVsSup r = rho_vs_sup_check(de, dq, line_extension_witnesses(tree, Word{}, W("ab")));
  EXPECT_EQ(r.rho.value.estimate, 2);
  EXPECT_EQ(r.sup.estimate, 1);
  EXPECT_TRUE(r.upper.pass);
  EXPECT_TRUE(r.lower.pass);
}

TEST(DescentTest, TreeReachesStoppingRadius) {
  ActionModel tree = ActionModel::free_tree(2);
  Word r = W("ab").pow(100'000);
  MetricInstance d(tree, r);
  DescentTrace trace = barycenter_descent(d, Word{});
  ASSERT_TRUE(trace.converged);
  EXPECT_FALSE(trace.finding);
  EXPECT_EQ(trace.steps.front().rho.value.estimate, 200'000);
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    EXPECT_EQ(trace.steps[k - 1].rho.value.estimate - trace.steps[k].rho.value.estimate, 5050);
  }
  EXPECT_LE(trace.steps.back().rho.value.estimate, 1000 * 101);
  EXPECT_LE(trace.steps.size() - 1, 2 * 200'000 / (50 * 101) + 2);
  double final_d = tree.distance(trace.steps.back().point, r);
  EXPECT_LE(final_d, 1000 * 101);
}

TEST(DescentTest, StartInsideStops) {
  ActionModel tree = ActionModel::free_tree(2);
  Word r = W("ab").pow(50'000);
  DescentTrace trace = barycenter_descent(MetricInstance(tree, r), Word{});
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.steps.size(), 1u);
}

TEST(GromovComparisonTest, BaseShift) {
  ActionModel tree = ActionModel::free_tree(2);
  std::vector<BoundaryPoint> w = default_witnesses(tree, 3);
  EXPECT_EQ(gromov_comparison(tree, tree, w).max_diff, 0);
  GromovComparison c = gromov_comparison(tree, tree.with_base(W("ab")), w);
  EXPECT_LE(c.max_diff, 2);
  EXPECT_GT(c.max_diff, 0);
}

TEST(CoboundTest, Examples) {
  ActionModel tree = ActionModel::free_tree(2);
  ActionModel shifted = tree.with_base(W("ab"));
  BoundaryPoint x = BoundaryPoint::fixed_plus(W("a"));
  BoundaryPoint y = BoundaryPoint::fixed_plus(W("b"));
  EXPECT_EQ(cobound_estimate(tree, tree, x, y, 2).estimate, 0);
  double prev = -1;
  for (int r = 0; r <= 3; ++r) {
    double h = cobound_estimate(tree, shifted, x, y, r).estimate;
    EXPECT_GE(h, prev);
    EXPECT_LE(std::abs(h), 2 * 2 + 8 * tree.delta());
    prev = h;
  }
}

TEST(CosetDefectTest, SameModelIsZero) {
  ActionModel tree = ActionModel::free_tree(2);
  CosetDefect d = coset_relation_defect(tree, tree, W("b"), W("a"), 4, CocycleConvention::Inverse);
  EXPECT_EQ(d.value.estimate, 0);
  EXPECT_TRUE(d.pass);
  EXPECT_THROW(coset_relation_defect(tree, tree, W("a"), W("ab").pow(0), 2,
                                     CocycleConvention::Inverse),
               PreconditionError);
}

TEST(CosetDefectTest, BaseShiftNeedsHalfCocycle) {
  ActionModel tree = ActionModel::free_tree(2);
  ActionModel shifted = tree.with_base(W("abA"));
  // With beta = B_{o,o'}: beta(b^inf) = -3 and beta(a b^inf) = 1, so the
  // unhalved form is off by (1 - (-3)) / 2.
  CosetDefect d =
      coset_relation_defect(tree, shifted, W("a"), W("BB"), 3, CocycleConvention::Inverse);
  EXPECT_EQ(d.value.lower, 0);
  EXPECT_EQ(d.value.upper, 0);
  EXPECT_EQ(d.literal.estimate, 2);
  EXPECT_TRUE(d.pass);
}

TEST(CosetDefectTest, EqualSpectrumPair) {
  ActionModel a = Schottky();
  ActionModel b = Conjugated();
  Rng rng(13, "coset");
  int checked = 0;
  for (int t = 0; checked < 20 && t < 200; ++t) {
    Word h = RandomWord(rng, static_cast<int>(rng.between(1, 2)));
    Word g = RandomHyperbolic(rng, 2);
    long long n = static_cast<long long>(rng.between(1, 16));
    CosetDefect d;
    try {
      d = coset_relation_defect(a, b, h, g, n, CocycleConvention::Inverse);
    } catch (const PreconditionError&) {
      continue;
    }
    ++checked;
    EXPECT_TRUE(d.pass) << h.str() << " " << g.str() << " " << n << " " << d.value.estimate;
    ASSERT_EQ(d.drift.size(), 7u);
    EXPECT_LE(d.drift.back().second.magnitude(), d.drift.front().second.magnitude() + 1e-9);
    EXPECT_LT(d.drift.back().second.magnitude(), 8 * 0.7 / 64 + 0.1);
  }
  EXPECT_EQ(checked, 20);
}

}  // namespace
}  // namespace hyperlab
