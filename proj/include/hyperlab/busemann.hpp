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

// Busemann functions and the Busemann cocycle.
//
// Two conventions are supported:
//   Direct   c(g, x)  = B_{o, g o}(x)
//   Inverse  c~(g, x) = B_{o, g^-1 o}(x)
// Only Inverse satisfies c(gh, x) = c(g, hx) + c(h, x) exactly on a tree;
// Direct satisfies c(gh, x) = c(g, x) + c(h, g^-1 x) instead.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hyperlab/boundary.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/spaces.hpp"

namespace hyperlab {

enum class CocycleConvention { Direct, Inverse };

inline std::string to_string(CocycleConvention c) {
  return c == CocycleConvention::Direct ? "direct" : "inverse";
}

inline CocycleConvention parse_convention(const std::string& s) {
  if (s == "direct") {
    return CocycleConvention::Direct;
  }
  if (s == "inverse") {
    return CocycleConvention::Inverse;
  }
  throw ConfigError("unknown cocycle convention '" + s + "' (expected direct or inverse)");
}

// Which form of the cocycle identity a defect measures.
enum class CocycleIdentity {
  // c(gh, x) - c(g, hx) - c(h, x)
  Stated,
  // c(gh, x) - c(g, x) - c(h, g^-1 x)
  Transformed,
};

// B_{o,p}(x) = 2 <p, x>_o - d(o, p).
inline IntervalValue busemann(const ActionModel& model, const Point& o, const Point& p,
                              const BoundaryPoint& x, const DepthPolicy& policy = {}) {
  return 2.0 * extended_gromov(model, p, x, o, policy) - model.distance(o, p);
}

inline IntervalValue cocycle(const ActionModel& model, const GroupElement& g,
                             const BoundaryPoint& x, CocycleConvention conv,
                             const DepthPolicy& policy = {}) {
  GroupElement h = conv == CocycleConvention::Direct ? g : model.inverse(g);
  return busemann(model, model.base(), model.orbit_point(h), x, policy);
}

// c(g, p) = d(o, p) - d(g o, p) for a point p (g^-1 o under Inverse).
inline double extended_cocycle(const ActionModel& model, const GroupElement& g, const Point& p,
                               CocycleConvention conv = CocycleConvention::Direct) {
  GroupElement h = conv == CocycleConvention::Direct ? g : model.inverse(g);
  return model.distance(model.base(), p) - model.distance(model.orbit_point(h), p);
}

inline IntervalValue cocycle_identity_defect(const ActionModel& model, const GroupElement& g,
                                             const GroupElement& h, const BoundaryPoint& x,
                                             CocycleConvention conv,
                                             CocycleIdentity form = CocycleIdentity::Stated,
                                             const DepthPolicy& policy = {}) {
  IntervalValue whole = cocycle(model, model.compose(g, h), x, conv, policy);
  if (form == CocycleIdentity::Stated) {
    return whole - cocycle(model, g, x.translated(model, h), conv, policy) -
           cocycle(model, h, x, conv, policy);
  }
  return whole - cocycle(model, g, x, conv, policy) -
         cocycle(model, h, x.translated(model, model.inverse(g)), conv, policy);
}

struct ProductTransformDefect {
  // <x,y> - <gx,gy> - c(g,x) - c(g,y), with the requested convention.
  IntervalValue literal;
  // <x,y> - <gx,gy> - (c~(g,x) + c~(g,y)) / 2.
  IntervalValue half_sum;
};

inline ProductTransformDefect product_transform_defect(
    const ActionModel& model, const GroupElement& g, const BoundaryPoint& x,
    const BoundaryPoint& y, CocycleConvention conv = CocycleConvention::Direct,
    const DepthPolicy& policy = {}) {
  IntervalValue diff = extended_gromov(model, x, y, policy) -
                       extended_gromov(model, x.translated(model, g), y.translated(model, g), policy);
  ProductTransformDefect out;
  out.literal = diff - cocycle(model, g, x, conv, policy) - cocycle(model, g, y, conv, policy);
  out.half_sum = diff - 0.5 * (cocycle(model, g, x, CocycleConvention::Inverse, policy) +
                               cocycle(model, g, y, CocycleConvention::Inverse, policy));
  return out;
}

// (running min of c(g, y_i) over the tail of the sequence) - c(g, x). The
// sequence must visibly converge to x: <y_i, x> non-decreasing and growing.
inline IntervalValue continuity_defect(const ActionModel& model, const GroupElement& g,
                                       const std::vector<BoundaryPoint>& ys,
                                       const BoundaryPoint& x, CocycleConvention conv,
                                       const DepthPolicy& policy = {}) {
  if (ys.empty()) {
    throw ConfigError("continuity check needs a nonempty sequence");
  }
  std::vector<double> closeness;
  for (const auto& y : ys) {
    try {
      closeness.push_back(extended_gromov(model, y, x, policy).estimate);
    } catch (const CoincidentBoundaryPoints&) {
      closeness.push_back(kInfinity);
    }
  }
  bool converging = closeness.size() == 1 || closeness.back() > closeness.front() ||
                    std::isinf(closeness.back());
  for (std::size_t i = 1; i < closeness.size(); ++i) {
    if (closeness[i] + 2 * model.delta() + model.float_tol() < closeness[i - 1]) {
      converging = false;
    }
  }
  if (!converging) {
    throw PreconditionError("sequence not converging to " + x.label());
  }
  std::size_t tail = ys.size() / 2;
  IntervalValue m = cocycle(model, g, ys[tail], conv, policy);
  for (std::size_t i = tail + 1; i < ys.size(); ++i) {
    m = interval_min(m, cocycle(model, g, ys[i], conv, policy));
  }
  return m - cocycle(model, g, x, conv, policy);
}

}  // namespace hyperlab
