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

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace hyperlab {

/// A real quantity known only up to an enclosure [lower, upper].
///
/// `estimate` is the value actually produced by the truncated computation
/// (for a liminf, the window minimum); it always lies inside the enclosure.
/// `depth` records the ray truncation depth that produced it (0 when exact).
struct IntervalValue {
  double lower = 0;
  double upper = 0;
  double estimate = 0;
  int depth = 0;

  static IntervalValue exact(double v, int depth = 0) { return {v, v, v, depth}; }
  static IntervalValue with_slack(double v, double slack_below, double slack_above,
                                  int depth = 0) {
    return {v - slack_below, v + slack_above, v, depth};
  }

  double width() const noexcept { return upper - lower; }
  double midpoint() const noexcept { return 0.5 * (lower + upper); }
  bool contains(double v, double widen = 0) const noexcept {
    return lower - widen <= v && v <= upper + widen;
  }
  bool overlaps(const IntervalValue& o, double widen = 0) const noexcept {
    return lower - widen <= o.upper && o.lower <= upper + widen;
  }
  // Largest |v| over the enclosure.
  double magnitude() const noexcept { return std::max(std::abs(lower), std::abs(upper)); }

  IntervalValue operator-() const { return {-upper, -lower, -estimate, depth}; }

  friend IntervalValue operator+(const IntervalValue& x, const IntervalValue& y) {
    return {x.lower + y.lower, x.upper + y.upper, x.estimate + y.estimate,
            std::max(x.depth, y.depth)};
  }
  friend IntervalValue operator-(const IntervalValue& x, const IntervalValue& y) {
    return x + (-y);
  }
  friend IntervalValue operator+(const IntervalValue& x, double v) {
    return {x.lower + v, x.upper + v, x.estimate + v, x.depth};
  }
  friend IntervalValue operator-(const IntervalValue& x, double v) { return x + (-v); }
  friend IntervalValue operator*(double s, const IntervalValue& x) {
    if (s >= 0) {
      return {s * x.lower, s * x.upper, s * x.estimate, x.depth};
    }
    return {s * x.upper, s * x.lower, s * x.estimate, x.depth};
  }

  IntervalValue abs() const {
    double lo = (lower <= 0 && upper >= 0) ? 0.0 : std::min(std::abs(lower), std::abs(upper));
    return {lo, magnitude(), std::abs(estimate), depth};
  }
};

inline IntervalValue interval_max(const IntervalValue& x, const IntervalValue& y) {
  return {std::max(x.lower, y.lower), std::max(x.upper, y.upper),
          std::max(x.estimate, y.estimate), std::max(x.depth, y.depth)};
}

inline IntervalValue interval_min(const IntervalValue& x, const IntervalValue& y) {
  return {std::min(x.lower, y.lower), std::min(x.upper, y.upper),
          std::min(x.estimate, y.estimate), std::max(x.depth, y.depth)};
}

}  // namespace hyperlab
