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

#include "hyperlab/spectrum.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "hyperlab/boundary.hpp"
#include "hyperlab/busemann.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/rng.hpp"

namespace hyperlab {
namespace {

Word W(const std::string& s) { return parse_word(s, 2); }

Mat2 Diag(double s) { return {s, 0, 0, 1 / s}; }

ActionModel Schottky(double delta = 0.7) {
  return ActionModel::upper_half_plane({Diag(3), Mat2{5.0 / 3, 4.0 / 3, 4.0 / 3, 5.0 / 3}})
      .with_delta(delta);
}

Word RandomWord(Rng& rng, int max_len) {
  int len = static_cast<int>(rng.between(1, max_len));
  Word w;
  while (static_cast<int>(w.size()) < len) {
    w.push_back(letter_from_key(static_cast<int>(rng.below(4))));
  }
  return w;
}

Word RandomHyperbolic(Rng& rng, int max_len) {
  for (;;) {
    Word w = RandomWord(rng, max_len);
    if (!w.cyclic_reduction().empty()) {
      return w;
    }
  }
}

TEST(TranslationLengthTest, Examples) {
  ActionModel tree = ActionModel::free_tree(2);
  LengthEstimate l = translation_length(tree, W("a(ab)^5"));
  EXPECT_EQ(l.method, LengthMethod::CyclicReduction);
  EXPECT_EQ(l.value.lower, 11);
  EXPECT_EQ(l.value.upper, 11);
  EXPECT_EQ(translation_length(tree, Word{}).value.estimate, 0);

  ActionModel h = ActionModel::upper_half_plane({Diag(std::sqrt(2.0))});
  EXPECT_NEAR(translation_length(h, W("a")).value.estimate, std::log(2.0), 1e-12);
  EXPECT_EQ(translation_length(h, Word{}).value.estimate, 0);
  EXPECT_EQ(translation_length(h, Mat2{1, 1, 0, 1}).value.estimate, 0);
  EXPECT_EQ(translation_length(h, Mat2{1, 1, 0, 1}).classification, Classification::Parabolic);
}

TEST(TranslationLengthTest, PowerDifferenceEnclosesOracle) {
  ActionModel tree = ActionModel::free_tree(2).with_base(W("bA"));
  ActionModel h = Schottky().with_base(Complex(0.2, 0.6));
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    Word g = RandomHyperbolic(rng, 5);
    IntervalValue exact = translation_length(tree, g).value;
    IntervalValue pd = translation_length(tree, g, LengthMethod::PowerDifference).value;
    EXPECT_TRUE(pd.contains(exact.estimate)) << g.str();
    double oracle = translation_length(h, g, LengthMethod::Trace).value.estimate;
    LengthEstimate hp = translation_length(h, g, LengthMethod::PowerDifference);
    EXPECT_TRUE(hp.value.contains(oracle, 1e-9)) << g.str() << ": " << hp.value.lower << " "
                                                 << hp.value.upper << " vs " << oracle;
    EXPECT_LT(hp.value.width(), 1e-2);
  }
}

TEST(TranslationLengthTest, WordMetricBall) {
  ActionModel s1 = ActionModel::word_metric_ball(2, {W("a"), W("b")}, 8);
  ActionModel s2 = ActionModel::word_metric_ball(2, {W("a"), W("ab")}, 8);
  EXPECT_EQ(translation_length(s1, W("b")).value.estimate, 1);
  EXPECT_EQ(translation_length(s2, W("b")).value.estimate, 2);
  EXPECT_EQ(translation_length(s2, W("ab")).value.estimate, 1);
  EXPECT_THROW(translation_length(s2, W("bbbbbbb")), BallExceeded);
}

TEST(TranslationLengthTest, PowersAndConjugation) {
  ActionModel tree = ActionModel::free_tree(2);
  ActionModel h = Schottky();
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    Word g = RandomWord(rng, 6);
    Word eta = RandomWord(rng, 6);
    double lt = translation_length(tree, g).value.estimate;
    double lh = translation_length(h, g).value.estimate;
    for (int k = 1; k <= 10; ++k) {
      EXPECT_EQ(translation_length(tree, g.pow(k)).value.estimate, k * lt);
      EXPECT_NEAR(translation_length(h, g.pow(k)).value.estimate, k * lh, 1e-9 * k * (1 + lh));
    }
    Word c = eta * g * eta.inverse();
    EXPECT_EQ(translation_length(tree, c).value.estimate, lt);
    EXPECT_NEAR(translation_length(h, c).value.estimate, lh, 1e-9 * (1 + lh));
    EXPECT_EQ(translation_length(tree, g.inverse()).value.estimate, lt);
  }
}

TEST(StableLengthTest, TreeExamples) {
  ActionModel tree = ActionModel::free_tree(2);
  StableLengthDefect d = stable_length_defect(tree, W("a"), CocycleConvention::Direct);
  EXPECT_EQ(d.plus.estimate, 0);
  EXPECT_EQ(d.minus.estimate, 0);
  StableLengthDefect e = stable_length_defect(tree, W("a"), CocycleConvention::Inverse);
  EXPECT_EQ(e.plus.estimate, 0);
  EXPECT_EQ(e.minus.estimate, 0);
  EXPECT_THROW(stable_length_defect(tree, Word{}, CocycleConvention::Inverse), PreconditionError);
}

TEST(MainRelationTest, TreeExamples) {
  ActionModel tree = ActionModel::free_tree(2);
  MainRelationDefect d = main_relation_defect(tree, W("a"), W("ab"), 5);
  EXPECT_EQ(d.length.estimate, 11);
  EXPECT_EQ(d.corrected.estimate, 0);
  d = main_relation_defect(tree, W("b"), W("a"), 5);
  EXPECT_EQ(d.length.estimate, 6);
  EXPECT_EQ(d.corrected.estimate, 0);
  EXPECT_EQ(d.literal.estimate, -2);
  EXPECT_EQ(d.literal_bound, 0);
  d = main_relation_defect(tree, W("AB"), W("a"), 5);
  EXPECT_EQ(d.length.estimate, 5);
  EXPECT_EQ(d.corrected.estimate, 0);
}

TEST(MainRelationTest, Preconditions) {
  ActionModel tree = ActionModel::free_tree(2);
  EXPECT_THROW(main_relation_defect(tree, W("b"), Word{}, 3), PreconditionError);
  // eta g^n = e.
  EXPECT_THROW(main_relation_defect(tree, W("BAB"), W("bab"), 1), PreconditionError);
}

TEST(MainRelationTest, CorrectedFormExactOnSeededTreeSample) {
  ActionModel tree = ActionModel::free_tree(2);
  Rng rng(200);
  int checked = 0;
  while (checked < 200) {
    Word eta = RandomWord(rng, 6);
    Word g = RandomHyperbolic(rng, 5);
    long long n = rng.between(1, 30);
    if (!main_relation_asymptotic(tree, eta, g, n)) {
      continue;
    }
    MainRelationDefect d;
    try {
      d = main_relation_defect(tree, eta, g, n);
    } catch (const PreconditionError&) {
      continue;
    }
    EXPECT_EQ(d.corrected.lower, 0) << eta.str() << " " << g.str() << " n=" << n;
    EXPECT_EQ(d.corrected.upper, 0);
    ++checked;
  }
}

TEST(MainRelationTest, CorrectedFormOnHyperbolicPlane) {
  ActionModel h = Schottky();
  Rng rng(201);
  int checked = 0;
  while (checked < 20) {
    Word eta = RandomWord(rng, 3);
    Word g = RandomHyperbolic(rng, 3);
    long long n = rng.between(1, 12);
    if (!main_relation_asymptotic(h, eta, g, n)) {
      continue;
    }
    MainRelationDefect d;
    try {
      d = main_relation_defect(h, eta, g, n);
    } catch (const PreconditionError&) {
      continue;
    }
    EXPECT_LE(d.corrected.abs().lower, 12 * h.delta() + d.corrected.width())
        << eta.str() << " " << g.str() << " n=" << n;
    ++checked;
  }
}

TEST(SpectrumTableTest, TreeBall) {
  ActionModel tree = ActionModel::free_tree(2);
  SpectrumTable t = mls_table(tree, ball_enumerate(tree, 2));
  ASSERT_EQ(t.rows.size(), 17u);
  for (const auto& row : t.rows) {
    double v = row.length.value.estimate;
    EXPECT_TRUE(v == 0 || v == 1 || v == 2) << row.word;
  }
  EXPECT_TRUE(mls_table(tree, {}).rows.empty());
  SpectrumTable pair = mls_table(tree, {W("abB"), W("abB").inverse()});
  EXPECT_EQ(pair.rows[0].length.value.estimate, pair.rows[1].length.value.estimate);
}

TEST(SpectrumCompareTest, Examples) {
  ActionModel tree = ActionModel::free_tree(2);
  auto elems = ball_enumerate(tree, 3);
  EXPECT_EQ(mls_compare(tree, tree, elems).max_diff, 0);

  ActionModel s2 = ActionModel::word_metric_ball(2, {W("a"), W("ab")}, 10);
  SpectrumComparison c = mls_compare(tree, s2, {W("a"), W("b")});
  EXPECT_EQ(c.max_diff, 1);
  EXPECT_EQ(word_of(*c.diff_witness), W("b"));
  EXPECT_EQ(c.max_ratio, 2);

  ActionModel h = Schottky();
  Mat2 m{2, 1, 1, 1};
  std::vector<Mat2> conj;
  for (const auto& g : h.matrix_generators()) {
    conj.push_back(m * g * m.inverse());
  }
  ActionModel hc = ActionModel::upper_half_plane(conj);
  SpectrumComparison hc_cmp = mls_compare(h, hc, ball_enumerate(h, 4));
  EXPECT_LE(hc_cmp.max_diff, 1e-9);
}

}  // namespace
}  // namespace hyperlab
