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


#include "hyperlab/rigidsets.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "hyperlab/error.hpp"

namespace hyperlab {
namespace {

Word W(const std::string& s) { return parse_word(s, 2); }

RigidSetParams Params(std::size_t per_eta = 2, int radius = 1) {
  RigidSetParams p;
  p.per_eta = per_eta;
  p.radius = radius;
  return p;
}

TEST(BudgetFunctionTest, ValuesAndInverse) {
  BudgetFunction f = BudgetFunction::sqrt();
  EXPECT_EQ(f(0), 1);
  EXPECT_EQ(f(100), 10);
  EXPECT_EQ(f(101), 11);
  EXPECT_EQ(f.inverse(1), -1);
  EXPECT_EQ(f.inverse(4), 9);
  // sup {T : f(T) < y} really is the boundary of the sublevel set.
  for (double y : {2.0, 3.0, 8.0, 64.0}) {
    double t = f.inverse(y);
    EXPECT_LT(f(t), y);
    EXPECT_GE(f(t + 1e-6), y);
  }
  BudgetFunction g = BudgetFunction::log();
  for (double y : {2.0, 5.0}) {
    double t = g.inverse(y);
    EXPECT_LT(g(t * (1 - 1e-12)), y);
    EXPECT_GE(g(t * (1 + 1e-9) + 1e-9), y);
  }
  BudgetFunction h = BudgetFunction::table({{0, 1}, {10, 2}, {50, 5}});
  EXPECT_EQ(h(9.5), 1);
  EXPECT_EQ(h(10), 2);
  EXPECT_EQ(h.inverse(2), 10);
  EXPECT_EQ(h.inverse(4), 50);
  EXPECT_TRUE(std::isinf(h.inverse(6)));
  EXPECT_THROW(BudgetFunction::table({{1, 1}}), ConfigError);
  EXPECT_THROW(BudgetFunction::table({{0, 2}, {5, 1}}), ConfigError);
  EXPECT_THROW(BudgetFunction::parse("cubic"), ConfigError);
}

TEST(ChooseThetaTest, Examples) {
  ActionModel tree = ActionModel::free_tree(2);
  EXPECT_EQ(word_of(choose_theta(tree, W("a"))), W("b"));
  EXPECT_EQ(word_of(choose_theta(tree, W("ab"))), W("a"));
}

TEST(EPhiTest, PowersOfAbWithIdentityEta) {
  ActionModel tree = ActionModel::free_tree(2);
  RigidSet e = build_E_phi(tree, W("ab"), tree.element(W("a")), Params());
  ASSERT_TRUE(e.theta);
  ASSERT_GE(e.members.size(), 2u);
  // The first eta is the identity; its members are (ab)^-n on the E1 branch.
  for (std::size_t k = 0; k < 2; ++k) {
    const Provenance& p = e.members[k].provenance;
    EXPECT_EQ(p.index, 1u);
    EXPECT_EQ(p.branch, Branch::E1);
    EXPECT_EQ(word_of(e.members[k].element), W("ab").pow(-p.exponent));
  }
  EXPECT_LT(e.members[0].provenance.exponent, e.members[1].provenance.exponent);
}

TEST(EPhiTest, MembersSatisfyConstraints) {
  ActionModel tree = ActionModel::free_tree(2);
  for (const char* g : {"a", "ab", "aB", "abAB"}) {
    RigidSet e = build_E_phi(tree, W(g), std::nullopt, Params(3));
    ASSERT_FALSE(e.members.empty()) << g;
    auto [plus, minus] = fixed_points(tree, tree.element(W(g)));
    BoundaryPoint theta_minus = minus.translated(tree, *e.theta);
    for (const auto& m : e.members) {
      const Provenance& p = m.provenance;
      // Rebuild from provenance and recheck every condition independently.
      EXPECT_EQ(word_of(rebuild_member(tree, p)), word_of(m.element));
      double y = static_cast<double>(p.m) * std::ldexp(1.0, static_cast<int>(p.index));
      double len = static_cast<double>(word_of(m.element).cyclic_reduction().size());
      EXPECT_GT(len, e.params.budget.inverse(y));
      const BoundaryPoint& target = p.branch == Branch::E2 ? theta_minus : minus;
      double prod = extended_gromov(tree, tree.orbit_point(m.element), target, tree.base()).estimate;
      EXPECT_GE(prod, static_cast<double>(p.index * p.index));
    }
    for (std::size_t k = 1; k < e.members.size(); ++k) {
      if (e.members[k].provenance.index == e.members[k - 1].provenance.index) {
        EXPECT_LT(e.members[k - 1].provenance.exponent, e.members[k].provenance.exponent);
      }
    }
  }
}

TEST(EPhiTest, BranchRule) {
  ActionModel tree = ActionModel::free_tree(2);
  Word g = W("ab");
  RigidSet e = build_E_phi(tree, g, tree.element(W("a")), Params(1));
  auto [plus, minus] = fixed_points(tree, tree.element(g));
  double ref = extended_gromov(tree, minus.translated(tree, tree.element(W("a"))), minus).estimate;
  for (const auto& m : e.members) {
    double side =
        extended_gromov(tree, plus.translated(tree, m.provenance.eta), minus).estimate;
    EXPECT_EQ(m.provenance.branch, side <= ref ? Branch::E1 : Branch::E2);
  }
}

TEST(EPhiTest, ProductsGrowWithIndex) {
  ActionModel tree = ActionModel::free_tree(2);
  RigidSet e = build_E_phi(tree, W("a"), std::nullopt, Params(2, 1));
  ASSERT_GE(e.members.size(), 8u);
  double floor = 0;
  for (const auto& m : e.members) {
    double expected = static_cast<double>(m.provenance.index * m.provenance.index);
    EXPECT_GE(m.product.lower, expected);
    floor = std::max(floor, expected);
  }
  EXPECT_GE(e.members.back().product.lower, floor);
}

TEST(EPhiTest, SparsityHolds) {
  ActionModel tree = ActionModel::free_tree(2);
  RigidSet e = build_E_phi(tree, W("ab"), std::nullopt, Params(2, 1));
  SparsityReport r = sparsity_check(e, tree);
  EXPECT_TRUE(r.pass);
  std::size_t below = 0;
  for (const auto& m : e.members) {
    below += m.length.estimate <= 100 ? 1 : 0;
  }
  EXPECT_LE(below, 10u);
}

TEST(EPhiTest, InfeasibleBudgetIsReported) {
  ActionModel tree = ActionModel::free_tree(2);
  RigidSetParams p = Params(2, 1);
  p.budget = BudgetFunction::log();
  EXPECT_THROW(build_E_phi(tree, W("ab"), std::nullopt, p), BudgetExceeded);
  // 17 etas: the last needs l > (2^18 - 1)^2.
  EXPECT_THROW(build_E_phi(tree, W("ab"), std::nullopt, Params(2, 2)), BudgetExceeded);
  EXPECT_THROW(build_E_phi(tree, W("abAB").pow(0), std::nullopt, Params()), PreconditionError);
}

TEST(EPhiTest, QuasiParabolicCaseUsesPlainMembers) {
  ActionModel tree = ActionModel::free_tree(2).with_quasi_parabolic(true);
  RigidSet e = build_E_phi(tree, W("ab"), std::nullopt, Params());
  EXPECT_FALSE(e.theta);
  for (const auto& m : e.members) {
    EXPECT_EQ(m.provenance.branch, Branch::Case1);
  }
}

TEST(EPrimeTest, GeneratorA) {
  ActionModel tree = ActionModel::free_tree(2);
  EXPECT_EQ(word_of(*choose_eta_for(tree, W("a"), 2)), W("b"));
  EXPECT_EQ(word_of(*choose_eta_for(tree, W("aa"), 2)), W("b"));
  RigidSet e = build_E_prime(tree, Params(2, 1));
  ASSERT_FALSE(e.members.empty());
  EXPECT_EQ(word_of(e.members[0].provenance.gamma), W("a"));
  EXPECT_EQ(word_of(e.members[0].provenance.eta), W("b"));
  for (const auto& m : e.members) {
    EXPECT_FALSE(word_of(m.element).is_proper_power()) << m.word;
    EXPECT_EQ(word_of(m.element),
              word_of(m.provenance.gamma).pow(-m.provenance.exponent) *
                  word_of(m.provenance.eta).inverse());
  }
  EXPECT_TRUE(sparsity_check(e, tree).pass);
}

TEST(SparsityTest, AdversarialBallFails) {
  ActionModel tree = ActionModel::free_tree(2);
  std::vector<GroupElement> ball;
  for (const auto& g : ball_enumerate(tree, 3)) {
    if (!word_of(g).cyclic_reduction().empty()) {
      ball.push_back(g);
    }
  }
  SparsityReport r = sparsity_check(tree, ball, BudgetFunction::table({{0, 1}}));
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.first_violation);
  EXPECT_EQ(std::get<0>(*r.first_violation), 1);
  // a, A, b, B and their conjugates by one letter.
  EXPECT_EQ(std::get<1>(*r.first_violation), 12u);
}

TEST(RigidityProbeTest, DifferentWordMetricsDisagreeOnSet) {
  ActionModel tree = ActionModel::free_tree(2);
  RigidSet e = build_E_phi(tree, W("ab"), std::nullopt, Params(2, 1));
  ActionModel s1 = ActionModel::word_metric_ball(2, {W("a"), W("b")}, 8);
  ActionModel s2 = ActionModel::word_metric_ball(2, {W("a"), W("ab")}, 8);
  std::vector<GroupElement> first(e.members.size() > 50 ? 50 : e.members.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    first[k] = e.members[k].element;
  }
  RigidityProbe r = rigidity_probe(first, s1, s2, 2);
  EXPECT_TRUE(r.ball_disagrees);
  EXPECT_TRUE(r.set_disagrees);
  EXPECT_TRUE(r.consistent());
  EXPECT_LT(r.set_witness_index, 50u);
}

TEST(RigidityProbeTest, SameSpectrumAgrees) {
  ActionModel tree = ActionModel::free_tree(2);
  RigidSet e = build_E_phi(tree, W("ab"), std::nullopt, Params());
  ActionModel s1 = ActionModel::word_metric_ball(2, {W("a"), W("b")}, 8);
  RigidityProbe r = rigidity_probe(e.elements(), tree, s1, 2);
  EXPECT_FALSE(r.ball_disagrees);
  EXPECT_FALSE(r.set_disagrees);
  EXPECT_GT(r.compared_members, 0u);
}

}  // namespace
}  // namespace hyperlab
