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

// Hyperbolicity estimates, rough cross-ratios and rough-geodesic checks.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/boundary.hpp"
#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/spaces.hpp"

namespace hyperlab {

// Where quadruples are drawn from.
struct SampleRegion {
  enum class Kind {
    Ball,    // group-orbit ball of the given radius (vertices / ball elements)
    Disk,    // hyperbolic disk about `center`
    Points,  // an explicit finite set
  };
  Kind kind = Kind::Ball;
  int radius = 2;
  double disk_radius = 5;
  Complex center{0, 1};
  std::vector<Point> points;
};

struct SampleSpec {
  SampleRegion region;
  std::size_t count = 10'000;
  std::uint64_t seed = 1;
  // Check every quadruple of a finite region instead of sampling.
  bool exhaustive = false;
};

struct DeltaEstimate {
  // Pinned-basepoint four-point defect.
  double value = 0;
  // 2 * value, the constant for the unpinned condition.
  double doubled = 0;
  std::size_t sample_size = 0;
  // (o, p, q, r) achieving the maximum.
  std::optional<std::array<Point, 4>> witness;
};

// min(<p,r>_o, <r,q>_o) - <p,q>_o, clamped at 0.
inline double four_point_defect(const ActionModel& model, const Point& o, const Point& p,
                                const Point& q, const Point& r) {
  double v = std::min(gromov_product(model, p, r, o), gromov_product(model, r, q, o)) -
             gromov_product(model, p, q, o);
  return std::max(0.0, v);
}

namespace detail {

inline std::vector<Point> region_points(const ActionModel& model, const SampleRegion& region) {
  std::vector<Point> out;
  switch (region.kind) {
    case SampleRegion::Kind::Points:
      out = region.points;
      break;
    case SampleRegion::Kind::Ball: {
      if (model.kind() == ModelKind::UpperHalfPlane) {
        for (const auto& g : ball_enumerate(model, region.radius)) {
          out.push_back(model.orbit_point(g));
        }
        break;
      }
      if (model.kind() == ModelKind::WordMetricBall && 2 * region.radius > model.ball_radius()) {
        throw BallExceeded("distances inside a ball of radius " + std::to_string(region.radius) +
                               " need an enumerated ball of radius " +
                               std::to_string(2 * region.radius),
                           2 * region.radius);
      }
      for (const auto& g : ball_enumerate(model, region.radius)) {
        out.push_back(model.orbit_point(g));
      }
      break;
    }
    case SampleRegion::Kind::Disk:
      throw ConfigError("a disk region has no finite point list");
  }
  if (out.empty()) {
    throw ConfigError("empty sample region");
  }
  return out;
}

// Area-uniform point of the hyperbolic disk of radius R about `center`.
inline Complex disk_point(Rng& rng, Complex center, double radius) {
  double r = std::acosh(1 + rng.unit() * (std::cosh(radius) - 1));
  double theta = 2 * std::numbers::pi * rng.unit();
  Complex w = std::tanh(r / 2) * std::polar(1.0, theta);
  Complex z = Complex(0, 1) * (1.0 + w) / (1.0 - w);
  return translation_to(center).apply(z);
}

inline void consider(DeltaEstimate& est, double v, const std::array<Point, 4>& quad) {
  if (!est.witness || v > est.value) {
    est.value = v;
    est.witness = quad;
  }
}

}  // namespace detail

// Every quadruple of a finite point set, via a distance table.
inline DeltaEstimate delta_exhaustive(const ActionModel& model, const std::vector<Point>& pts) {
  if (pts.empty()) {
    throw ConfigError("empty sample region");
  }
  std::size_t n = pts.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = model.distance(pts[i], pts[j]);
    }
  }
  double best = -1;
  std::array<std::size_t, 4> arg{0, 0, 0, 0};
  for (std::size_t o = 0; o < n; ++o) {
    const double* dox = &d[o * n];
    for (std::size_t p = 0; p < n; ++p) {
      const double* dpx = &d[p * n];
      // The defect is symmetric in p and q.
      for (std::size_t q = p; q < n; ++q) {
        double pq = dox[p] + dox[q] - dpx[q];
        const double* dqx = &d[q * n];
        for (std::size_t r = 0; r < n; ++r) {
          double v = std::min(dox[p] + dox[r] - dpx[r], dox[r] + dox[q] - dqx[r]) - pq;
          if (v > best) {
            best = v;
            arg = {o, p, q, r};
          }
        }
      }
    }
  }
  DeltaEstimate est;
  est.value = std::max(0.0, 0.5 * best);
  est.doubled = 2 * est.value;
  est.sample_size = n * n * n * n;
  est.witness = std::array<Point, 4>{pts[arg[0]], pts[arg[1]], pts[arg[2]], pts[arg[3]]};
  return est;
}

// Maximum four-point defect over a seeded sample. Samples are drawn as a
// prefix-stable stream: the estimate for count 2n dominates that for n.
inline DeltaEstimate delta_estimate(const ActionModel& model, const SampleSpec& spec) {
  if (spec.count < 1) {
    throw ConfigError("sample count must be >= 1");
  }
  if (spec.exhaustive) {
    return delta_exhaustive(model, detail::region_points(model, spec.region));
  }
  Rng rng(spec.seed, "delta_estimate");
  DeltaEstimate est;
  std::array<Point, 4> quad;
  if (spec.region.kind == SampleRegion::Kind::Disk) {
    if (model.kind() != ModelKind::UpperHalfPlane) {
      throw ConfigError("disk regions need the upper half plane model");
    }
    for (std::size_t s = 0; s < spec.count; ++s) {
      for (auto& x : quad) {
        x = detail::disk_point(rng, spec.region.center, spec.region.disk_radius);
      }
      detail::consider(est, four_point_defect(model, quad[0], quad[1], quad[2], quad[3]), quad);
    }
  } else {
    std::vector<Point> pts = detail::region_points(model, spec.region);
    for (std::size_t s = 0; s < spec.count; ++s) {
      for (auto& x : quad) {
        x = pts[rng.below(pts.size())];
      }
      detail::consider(est, four_point_defect(model, quad[0], quad[1], quad[2], quad[3]), quad);
    }
  }
  est.sample_size = spec.count;
  est.doubled = 2 * est.value;
  return est;
}

// (x,y;z,w)_o = <x,y>_o + <z,w>_o - <z,y>_o - <x,w>_o.
inline IntervalValue cross_ratio(const ActionModel& model, const BoundaryPoint& x,
                                 const BoundaryPoint& y, const BoundaryPoint& z,
                                 const BoundaryPoint& w, const Point& o,
                                 const DepthPolicy& policy = {}) {
  try {
    IntervalValue xy = extended_gromov(model, x, y, o, policy);
    IntervalValue zw = extended_gromov(model, z, w, o, policy);
    IntervalValue zy = extended_gromov(model, z, y, o, policy);
    IntervalValue xw = extended_gromov(model, x, w, o, policy);
    extended_gromov(model, x, z, o, policy);
    extended_gromov(model, y, w, o, policy);
    return xy + zw - zy - xw;
  } catch (const CoincidentBoundaryPoints& e) {
    throw CoincidentBoundaryPoints(std::string("not pairwise distinct: ") + e.what());
  }
}

inline IntervalValue cross_ratio(const ActionModel& model, const BoundaryPoint& x,
                                 const BoundaryPoint& y, const BoundaryPoint& z,
                                 const BoundaryPoint& w, const DepthPolicy& policy = {}) {
  return cross_ratio(model, x, y, z, w, model.base(), policy);
}

struct RoughGeodesic {
  std::vector<double> grid;
  std::vector<Point> points;
  double C = 0;
};

struct RoughGeodesicDefect {
  // max <tau(t1), tau(t3)>_{tau(t2)} over t1 < t2 < t3.
  double inner = 0;
  // max |t2 - t1| - <tau(t2), tau(t3)>_{tau(t1)} over t1 < t2 < t3.
  double lower = 0;
  // 3C/2.
  double bound = 0;
  // max |d(tau(s), tau(t)) - |s - t|| over grid pairs.
  double roughness = 0;
  std::array<std::size_t, 3> inner_witness{0, 0, 0};
  std::array<std::size_t, 3> lower_witness{0, 0, 0};
};

inline RoughGeodesicDefect rough_geodesic_defect(const ActionModel& model,
                                                 const RoughGeodesic& tau) {
  std::size_t n = tau.grid.size();
  if (n < 3 || tau.points.size() != n) {
    throw ConfigError("rough geodesic needs >= 3 grid points, one point per grid value");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(tau.grid[i] > tau.grid[i - 1])) {
      throw ConfigError("grid not strictly increasing");
    }
  }
  std::vector<double> d(n * n);
  RoughGeodesicDefect out;
  out.bound = 1.5 * tau.C;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = model.distance(tau.points[i], tau.points[j]);
      out.roughness =
          std::max(out.roughness, std::abs(d[i * n + j] - (tau.grid[j] - tau.grid[i])));
    }
  }
  // <p,q>_o with indices.
  auto gp = [&](std::size_t p, std::size_t q, std::size_t o) {
    return 0.5 * (d[p * n + o] + d[q * n + o] - d[p * n + q]);
  };
  bool first = true;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        double inner = gp(a, c, b);
        double lower = (tau.grid[b] - tau.grid[a]) - gp(b, c, a);
        if (first || inner > out.inner) {
          out.inner = inner;
          out.inner_witness = {a, b, c};
        }
        if (first || lower > out.lower) {
          out.lower = lower;
          out.lower_witness = {a, b, c};
        }
        first = false;
      }
    }
  }
  return out;
}

}  // namespace hyperlab
