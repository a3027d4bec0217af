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

// Sparse spectrally rigid sets.
//
// For a hyperbolic g and an enumeration eta_1, eta_2, ... of the group, the
// set E collects elements g^-n eta^-1 (or theta g^-n eta^-1) where, for the
// i-th eta, the exponents n^i(1) < n^i(2) < ... are inflated until
//
//   l(member_m) > f^-1(m 2^i)                 (so #{m : l <= T} <= f(T)/2^i)
//   <member_m o, g^-> >= s i^2 (delta + 1)     (members escape to g^-)
//
// Summing over i keeps #{x in E : l(x) <= T} <= f(T).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlab/boundary.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/spaces.hpp"
#include "hyperlab/spectrum.hpp"

namespace hyperlab {

// A nondecreasing f >= 1 with f(T) -> infinity.
class BudgetFunction {
 public:
  enum class Kind { Sqrt, Log, PiecewiseTable };

  // max(1, ceil(sqrt T)).
  static BudgetFunction sqrt() { return BudgetFunction(Kind::Sqrt, {}); }
  // max(1, ceil(log(1 + T))).
  static BudgetFunction log() { return BudgetFunction(Kind::Log, {}); }
  // Step function: value v_k on [T_k, T_{k+1}); the first breakpoint must be
  // at T = 0 and values must be >= 1 and nondecreasing.
  static BudgetFunction table(std::vector<std::pair<double, double>> steps) {
    if (steps.empty() || steps.front().first != 0) {
      throw ConfigError("budget table must start at T = 0");
    }
    for (std::size_t k = 0; k < steps.size(); ++k) {
      if (steps[k].second < 1) {
        throw ConfigError("budget values must be >= 1");
      }
      if (k > 0 && (steps[k].first <= steps[k - 1].first || steps[k].second < steps[k - 1].second)) {
        throw ConfigError("budget table must be increasing in T and nondecreasing in value");
      }
    }
    return BudgetFunction(Kind::PiecewiseTable, std::move(steps));
  }

  static BudgetFunction parse(const std::string& name) {
    if (name == "sqrt") {
      return sqrt();
    }
    if (name == "log") {
      return log();
    }
    throw ConfigError("unknown budget '" + name + "' (expected sqrt or log)");
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::pair<double, double>>& steps() const noexcept { return steps_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Sqrt:
        return "sqrt";
      case Kind::Log:
        return "log";
      case Kind::PiecewiseTable:
        return "table";
    }
    return "?";
  }

  double operator()(double t) const {
    t = std::max(0.0, t);
    switch (kind_) {
      case Kind::Sqrt:
        return std::max(1.0, std::ceil(std::sqrt(t)));
      case Kind::Log:
        return std::max(1.0, std::ceil(std::log1p(t)));
      case Kind::PiecewiseTable: {
        double v = steps_.front().second;
        for (const auto& [tk, vk] : steps_) {
          if (tk <= t) {
            v = vk;
          }
        }
        return v;
      }
    }
    return 1;
  }

  // sup {T >= 0 : f(T) < y}; -1 when the set is empty, +inf when f stays
  // below y forever.
  double inverse(double y) const {
    switch (kind_) {
      case Kind::Sqrt: {
        double k = std::ceil(y) - 1;
        return k < 1 ? -1.0 : k * k;
      }
      case Kind::Log: {
        double k = std::ceil(y) - 1;
        return k < 1 ? -1.0 : std::expm1(k);
      }
      case Kind::PiecewiseTable: {
        if (steps_.front().second >= y) {
          return -1;
        }
        for (std::size_t k = 1; k < steps_.size(); ++k) {
          if (steps_[k].second >= y) {
            return steps_[k].first;
          }
        }
        return std::numeric_limits<double>::infinity();
      }
    }
    return -1;
  }

 private:
  BudgetFunction(Kind kind, std::vector<std::pair<double, double>> steps)
      : kind_(kind), steps_(std::move(steps)) {}

  Kind kind_;
  std::vector<std::pair<double, double>> steps_;
};

enum class Branch { Case1, E1, E2 };

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::Case1:
      return "case1";
    case Branch::E1:
      return "E1";
    case Branch::E2:
      return "E2";
  }
  return "?";
}

struct Provenance {
  // 1-based enumeration index of eta (or of g for E').
  std::size_t index = 0;
  GroupElement eta = Word{};
  // The hyperbolic element whose powers are used.
  GroupElement gamma = Word{};
  long long exponent = 0;
  // Position m within this eta's exponent sequence (1-based).
  std::size_t m = 0;
  Branch branch = Branch::E1;
  std::optional<GroupElement> theta;
};

struct RigidMember {
  GroupElement element;
  std::string word;
  IntervalValue length;
  // <member o, target> with target g^- or theta g^-.
  IntervalValue product;
  double length_threshold = 0;
  double product_threshold = 0;
  Provenance provenance;
};

struct SkipRecord {
  GroupElement element;
  std::string reason;
};

struct RigidSetParams {
  BudgetFunction budget = BudgetFunction::sqrt();
  std::size_t per_eta = 2;
  int radius = 1;
  double severity = 1;
  long long max_exponent = 1 << 16;
  DepthPolicy depth;
};

struct RigidSet {
  GroupElement gamma = Word{};
  std::optional<GroupElement> theta;
  RigidSetParams params;
  std::vector<RigidMember> members;
  std::vector<SkipRecord> skipped;

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    for (const auto& m : members) {
      out.push_back(m.element);
    }
    return out;
  }
};

// g^-n eta^-1, or theta g^-n eta^-1 on the E2 branch.
inline GroupElement rebuild_member(const ActionModel& model, const Provenance& p) {
  GroupElement core =
      model.compose(model.power(p.gamma, -p.exponent), model.inverse(p.eta));
  if (p.branch == Branch::E2) {
    return model.compose(*p.theta, core);
  }
  return core;
}

// First non-identity element in canonical order moving g^-.
inline GroupElement choose_theta(const ActionModel& model, const GroupElement& g, int radius = 3,
                                 const DepthPolicy& policy = {}) {
  auto [plus, minus] = fixed_points(model, g);
  for (const auto& theta : ball_enumerate(model, radius)) {
    if (model.same_element(theta, model.identity()) ||
        (std::holds_alternative<Word>(theta) && word_of(theta).empty())) {
      continue;
    }
    if (!same_boundary_point(model, minus.translated(model, theta), minus, policy)) {
      return theta;
    }
  }
  throw PreconditionError("no element within radius " + std::to_string(radius) +
                          " moves the repelling point; action may be elementary");
}

namespace detail {

inline bool member_is_primary(const GroupElement& g) {
  const auto* w = std::get_if<Word>(&g);
  return w == nullptr || !w->is_proper_power();
}

struct ExponentSearch {
  const ActionModel& model;
  const RigidSetParams& params;
  double gamma_length;

  // Greedy exponent inflation for one eta. `make` builds the member for an
  // exponent; `target` is the boundary point the members must approach.
  template <typename Make>
  std::vector<RigidMember> run(std::size_t index, const Make& make, const BoundaryPoint& target,
                               Provenance base, bool require_primary,
                               std::vector<SkipRecord>& skipped,
                               const std::vector<RigidMember>& existing) const {
    std::vector<RigidMember> out;
    double product_threshold = params.severity * static_cast<double>(index * index) *
                               (model.delta() + 1);
    long long n = 0;
    for (std::size_t m = 1; m <= params.per_eta; ++m) {
      double y = static_cast<double>(m) * std::ldexp(1.0, static_cast<int>(index));
      double length_threshold = params.budget.inverse(y);
      if (std::isinf(length_threshold)) {
        throw BudgetExceeded("budget infeasible: f never reaches " + std::to_string(y));
      }
      ++n;
      for (;;) {
        if (n > params.max_exponent) {
          throw BudgetExceeded("budget infeasible at severity " + std::to_string(params.severity) +
                               ": exponent for eta #" + std::to_string(index) +
                               " exceeds " + std::to_string(params.max_exponent) +
                               "; try a smaller severity or budget");
        }
        GroupElement cand = make(n);
        if (model.classify(cand) != Classification::Hyperbolic) {
          ++n;
          continue;
        }
        if (require_primary && !member_is_primary(cand)) {
          skipped.push_back({cand, "not primary"});
          ++n;
          continue;
        }
        IntervalValue len = translation_length(model, cand).value;
        if (!(len.lower > length_threshold)) {
          double deficit = length_threshold - len.lower;
          n += std::max<long long>(1, static_cast<long long>(std::floor(deficit / gamma_length)));
          continue;
        }
        IntervalValue prod =
            extended_gromov(model, model.orbit_point(cand), target, model.base(), params.depth);
        if (prod.lower < product_threshold) {
          double deficit = product_threshold - prod.lower;
          n += std::max<long long>(1, static_cast<long long>(std::floor(deficit / gamma_length)));
          continue;
        }
        auto same = [&](const RigidMember& r) { return model.same_element(r.element, cand); };
        if (std::any_of(existing.begin(), existing.end(), same) ||
            std::any_of(out.begin(), out.end(), same)) {
          skipped.push_back({cand, "duplicate member"});
          ++n;
          continue;
        }
        RigidMember member;
        member.element = cand;
        member.word = model.format(cand);
        member.length = len;
        member.product = prod;
        member.length_threshold = length_threshold;
        member.product_threshold = product_threshold;
        member.provenance = base;
        member.provenance.exponent = n;
        member.provenance.m = m;
        out.push_back(std::move(member));
        break;
      }
    }
    return out;
  }
};

}  // namespace detail

// The sparse rigid set E_phi for g (theta chosen automatically when absent).
inline RigidSet build_E_phi(const ActionModel& model, const GroupElement& g,
                            std::optional<GroupElement> theta, const RigidSetParams& params) {
  if (params.per_eta < 1) {
    throw ConfigError("per-eta count must be >= 1");
  }
  auto [plus, minus] = fixed_points(model, g);
  RigidSet set;
  set.gamma = g;
  set.params = params;
  bool case1 = model.quasi_parabolic();
  if (!case1 && !theta) {
    theta = choose_theta(model, g, 3, params.depth);
  }
  if (!case1) {
    set.theta = theta;
  }
  double lg = translation_length(model, g).value.lower;
  detail::ExponentSearch search{model, params, lg};
  std::optional<BoundaryPoint> theta_minus;
  IntervalValue reference;
  if (!case1) {
    theta_minus = minus.translated(model, *theta);
    reference = extended_gromov(model, *theta_minus, minus, params.depth);
  }
  std::size_t index = 0;
  for (const auto& eta : ball_enumerate(model, params.radius)) {
    ++index;
    Provenance base;
    base.index = index;
    base.eta = eta;
    base.gamma = g;
    GroupElement eta_inv = model.inverse(eta);
    auto plain = [&](long long n) { return model.compose(model.power(g, -n), eta_inv); };
    if (case1) {
      base.branch = Branch::Case1;
      auto got = search.run(index, plain, minus, base, false, set.skipped, set.members);
      set.members.insert(set.members.end(), got.begin(), got.end());
      continue;
    }
    BoundaryPoint eta_plus = plus.translated(model, eta);
    IntervalValue side;
    try {
      side = extended_gromov(model, eta_plus, minus, params.depth);
    } catch (const CoincidentBoundaryPoints&) {
      set.skipped.push_back({eta, "eta g+ = g-"});
      continue;
    }
    base.theta = theta;
    // Overlap with the threshold line resolves to E1.
    if (side.lower <= reference.upper + 2 * model.delta()) {
      base.branch = Branch::E1;
      auto got = search.run(index, plain, minus, base, false, set.skipped, set.members);
      set.members.insert(set.members.end(), got.begin(), got.end());
    } else {
      base.branch = Branch::E2;
      auto with_theta = [&](long long n) { return model.compose(*theta, plain(n)); };
      auto got =
          search.run(index, with_theta, *theta_minus, base, false, set.skipped, set.members);
      set.members.insert(set.members.end(), got.begin(), got.end());
    }
  }
  return set;
}

// First element outside the maximal cyclic subgroup containing g (on words:
// not a power of g's primitive root) with eta g^- != g^+.
inline std::optional<GroupElement> choose_eta_for(const ActionModel& model, const GroupElement& g,
                                                  int radius, const DepthPolicy& policy = {}) {
  auto [plus, minus] = fixed_points(model, g);
  Word root = word_of(g).primitive_root().first;
  auto [root_conj, root_core] = root.cyclic_decomposition();
  for (const auto& eta : ball_enumerate(model, radius)) {
    const Word& w = word_of(eta);
    // eta is a power of root iff conj^-1 eta conj is a power of the core.
    Word inner = root_conj.inverse() * w * root_conj;
    bool power = inner.empty();
    if (!power && inner.size() % root_core.size() == 0) {
      long long k = static_cast<long long>(inner.size() / root_core.size());
      power = inner == root_core.pow(k) || inner == root_core.pow(-k);
    }
    if (power) {
      continue;
    }
    if (!same_boundary_point(model, minus.translated(model, eta), plus, policy)) {
      return eta;
    }
  }
  return std::nullopt;
}

// The ratio-detecting set E'_phi over primary hyperbolic g in the ball.
inline RigidSet build_E_prime(const ActionModel& model, const RigidSetParams& params,
                              int eta_radius = 2) {
  if (model.kind() == ModelKind::UpperHalfPlane) {
    throw ConfigError("E' construction needs a word model (torsion-free free group)");
  }
  RigidSet set;
  set.params = params;
  std::size_t index = 0;
  for (const auto& g : ball_enumerate(model, params.radius)) {
    const Word& w = word_of(g);
    if (w.cyclic_reduction().empty()) {
      continue;
    }
    if (w.is_proper_power()) {
      set.skipped.push_back({g, "not primary"});
      continue;
    }
    auto eta = choose_eta_for(model, g, eta_radius, params.depth);
    if (!eta) {
      set.skipped.push_back({g, "no eta within radius " + std::to_string(eta_radius)});
      continue;
    }
    ++index;
    auto [plus, minus] = fixed_points(model, g);
    Provenance base;
    base.index = index;
    base.eta = *eta;
    base.gamma = g;
    base.branch = Branch::E1;
    GroupElement eta_inv = model.inverse(*eta);
    auto make = [&](long long n) { return model.compose(model.power(g, -n), eta_inv); };
    detail::ExponentSearch search{model, params, translation_length(model, g).value.lower};
    auto got = search.run(index, make, minus, base, true, set.skipped, set.members);
    set.members.insert(set.members.end(), got.begin(), got.end());
  }
  return set;
}

struct SparsityReport {
  bool pass = true;
  // (T, #{x : l(x) <= T}, f(T)) at every distinct member length.
  std::vector<std::tuple<double, std::size_t, double>> histogram;
  std::optional<std::tuple<double, std::size_t, double>> first_violation;
};

// Counts only change at member lengths, so those are the only T to check.
inline SparsityReport sparsity_check(const std::vector<double>& lengths, const BudgetFunction& f) {
  std::vector<double> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  SparsityReport r;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) {
      continue;
    }
    double t = sorted[k];
    std::tuple<double, std::size_t, double> row{t, k + 1, f(t)};
    r.histogram.push_back(row);
    if (static_cast<double>(k + 1) > f(t) && r.pass) {
      r.pass = false;
      r.first_violation = row;
    }
  }
  return r;
}

inline SparsityReport sparsity_check(const ActionModel& model,
                                     const std::vector<GroupElement>& elements,
                                     const BudgetFunction& f) {
  std::vector<double> lengths;
  for (const auto& g : elements) {
    lengths.push_back(translation_length(model, g).value.estimate);
  }
  return sparsity_check(lengths, f);
}

inline SparsityReport sparsity_check(const RigidSet& set, const ActionModel& model) {
  return sparsity_check(model, set.elements(), set.params.budget);
}

struct RigidityProbe {
  double max_diff_on_set = 0;
  double max_diff_on_ball = 0;
  std::optional<GroupElement> ball_witness;
  // First member whose lengths differ by more than the tolerance, and its
  // position in the set (0-based).
  std::optional<GroupElement> set_witness;
  std::size_t set_witness_index = 0;
  std::size_t compared_members = 0;
  // Members whose length could not be computed in one of the models.
  std::size_t skipped_members = 0;
  bool ball_disagrees = false;
  bool set_disagrees = false;
  // Disagreement on the ball must show up on the set.
  bool consistent() const { return !ball_disagrees || set_disagrees; }
};

inline RigidityProbe rigidity_probe(const std::vector<GroupElement>& set, const ActionModel& a,
                                    const ActionModel& b, int ball_radius, double tol = 1e-9) {
  RigidityProbe r;
  auto lengths = [&](const GroupElement& g) -> std::optional<std::pair<double, double>> {
    const Word& w = word_of(g);
    try {
      return std::pair{translation_length(a, a.element(w)).value.estimate,
                       translation_length(b, b.element(w)).value.estimate};
    } catch (const BallExceeded&) {
      return std::nullopt;
    }
  };
  for (std::size_t k = 0; k < set.size(); ++k) {
    auto l = lengths(set[k]);
    if (!l) {
      ++r.skipped_members;
      continue;
    }
    ++r.compared_members;
    double d = std::abs(l->first - l->second);
    r.max_diff_on_set = std::max(r.max_diff_on_set, d);
    if (d > tol && !r.set_witness) {
      r.set_witness = set[k];
      r.set_witness_index = k;
      r.set_disagrees = true;
    }
  }
  for (const auto& g : free_ball_words(a.rank(), ball_radius)) {
    auto l = lengths(g);
    if (!l) {
      throw BallExceeded("comparison ball element " + g.str() +
                             " outside a word metric ball; use a smaller comparison radius",
                         ball_radius);
    }
    double d = std::abs(l->first - l->second);
    if (d > r.max_diff_on_ball) {
      r.max_diff_on_ball = d;
      r.ball_witness = g;
    }
  }
  r.ball_disagrees = r.max_diff_on_ball > tol;
  return r;
}

}  // namespace hyperlab
