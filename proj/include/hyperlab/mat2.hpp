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

// Real 2x2 matrices of unit determinant acting on the upper half plane by
// Moebius transformations, and the hyperbolic-plane distance.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "hyperlab/error.hpp"

namespace hyperlab {

using Complex = std::complex<double>;

// Boundary of the upper half plane: a real number, or +infinity for the cusp.
using BoundaryReal = double;
inline constexpr BoundaryReal kInfinity = std::numeric_limits<double>::infinity();

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  static Mat2 identity() { return {}; }
  static Mat2 from_row_major(const std::array<double, 4>& m) {
    return Mat2{m[0], m[1], m[2], m[3]}.normalized();
  }

  double det() const noexcept { return a * d - b * c; }
  double trace() const noexcept { return a + d; }
  double frobenius2() const noexcept { return a * a + b * b + c * c + d * d; }

  // Rescales to determinant exactly 1 (up to rounding).
  Mat2 normalized() const {
    double dt = det();
    if (!(dt > 0)) {
      throw ConfigError("matrix must have positive determinant, got " + std::to_string(dt));
    }
    double s = 1.0 / std::sqrt(dt);
    return {a * s, b * s, c * s, d * s};
  }

  // Inverse of a unit-determinant matrix.
  Mat2 inverse() const noexcept { return {d, -b, -c, a}; }

  // Renormalises while the determinant can still be computed without
  // cancellation; beyond that det(xy) = det(x) det(y) is left to carry it.
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
           x.c * y.b + x.d * y.d};
    if (r.frobenius2() < 1e6) {
      double dt = r.det();
      if (dt > 0) {
        double s = 1.0 / std::sqrt(dt);
        r = {r.a * s, r.b * s, r.c * s, r.d * s};
      }
    }
    return r;
  }

  // Moebius action of a unit-determinant matrix. The imaginary part uses
  // Im(gz) = Im z / |cz + d|^2, which stays accurate near the boundary.
  Complex apply(Complex z) const { return apply_with_det(z, 1.0); }

  Complex apply_with_det(Complex z, double det) const {
    Complex num = a * z + b;
    Complex den = c * z + d;
    double n2 = std::norm(den);
    double re = (num * std::conj(den)).real() / n2;
    return {re, det * z.imag() / n2};
  }

  BoundaryReal apply(BoundaryReal x) const {
    if (std::isinf(x)) {
      return c == 0 ? kInfinity : a / c;
    }
    double den = c * x + d;
    if (den == 0) {
      return kInfinity;
    }
    return (a * x + b) / den;
  }

  // Fixed points (attracting, repelling) of a hyperbolic matrix.
  std::pair<BoundaryReal, BoundaryReal> fixed_points() const {
    double tr = trace();
    double disc = tr * tr - 4;
    if (!(disc > 0)) {
      throw PreconditionError("no axis: matrix is not hyperbolic (|trace| <= 2)");
    }
    if (c == 0) {
      BoundaryReal finite = b / (d - a);
      return std::abs(a) > std::abs(d) ? std::pair{kInfinity, finite}
                                       : std::pair{finite, kInfinity};
    }
    double root = std::sqrt(disc);
    BoundaryReal z1 = (a - d + root) / (2 * c);
    BoundaryReal z2 = (a - d - root) / (2 * c);
    // Derivative at a fixed point z is 1/(cz+d)^2; attracting iff |cz+d| > 1.
    return std::abs(c * z1 + d) > 1 ? std::pair{z1, z2} : std::pair{z2, z1};
  }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

// Attracting fixed point of a hyperbolic matrix known only up to a positive
// scale (for example the unit part of a ScaledMat2).
inline BoundaryReal attracting_fixed_point(const Mat2& m) {
  if (m.c == 0) {
    if (m.a == m.d) {
      throw PreconditionError("no axis: matrix is parabolic or trivial");
    }
    return std::abs(m.a) > std::abs(m.d) ? kInfinity : m.b / (m.d - m.a);
  }
  double disc = (m.a - m.d) * (m.a - m.d) + 4 * m.b * m.c;
  if (!(disc > 0)) {
    throw PreconditionError("no axis: matrix is not hyperbolic");
  }
  double root = std::sqrt(disc);
  BoundaryReal z1 = (m.a - m.d + root) / (2 * m.c);
  BoundaryReal z2 = (m.a - m.d - root) / (2 * m.c);
  // The derivative det/(cz+d)^2 is smaller at the attracting point.
  return std::abs(m.c * z1 + m.d) > std::abs(m.c * z2 + m.d) ? z1 : z2;
}

// The matrix taking i to z = x + iy: [[sqrt y, x/sqrt y], [0, 1/sqrt y]].
inline Mat2 translation_to(Complex z) {
  double sy = std::sqrt(z.imag());
  return {sy, z.real() / sy, 0, 1 / sy};
}

inline double hyperbolic_distance(Complex p, Complex q) {
  double num = std::abs(p - q);
  double den = 2 * std::sqrt(p.imag() * q.imag());
  return 2 * std::asinh(num / den);
}

// d(i, g i) given log of the Frobenius norm of a unit-determinant matrix:
// cosh d = |g|^2 / 2.
inline double displacement_from_log_norm(double log_norm) {
  double two_s = 2 * log_norm;
  if (two_s < 40) {
    double y = std::exp(two_s) / 2;
    return y <= 1 ? 0.0 : std::acosh(y);
  }
  return two_s - std::log(2.0) + std::log1p(std::sqrt(1 - 4 * std::exp(-2 * two_s)));
}

// A matrix stored as exp(log_scale) * unit, with |unit|_F = 1, so that large
// powers neither overflow nor lose the determinant.
struct ScaledMat2 {
  Mat2 unit;
  double log_scale = 0;

  static ScaledMat2 from(const Mat2& m) {
    double n = std::sqrt(m.frobenius2());
    return {Mat2{m.a / n, m.b / n, m.c / n, m.d / n}, std::log(n)};
  }

  friend ScaledMat2 operator*(const ScaledMat2& x, const ScaledMat2& y) {
    const Mat2& p = x.unit;
    const Mat2& q = y.unit;
    Mat2 r{p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d, p.c * q.a + p.d * q.c,
           p.c * q.b + p.d * q.d};
    double n = std::sqrt(r.frobenius2());
    return {Mat2{r.a / n, r.b / n, r.c / n, r.d / n}, x.log_scale + y.log_scale + std::log(n)};
  }

  ScaledMat2 pow(long long n) const {
    ScaledMat2 result = from(Mat2::identity());
    ScaledMat2 base = *this;
    while (n > 0) {
      if ((n & 1) != 0) {
        result = result * base;
      }
      base = base * base;
      n >>= 1;
    }
    return result;
  }

  // The unit part has determinant exp(-2 log_scale).
  Complex apply(Complex z) const { return unit.apply_with_det(z, std::exp(-2 * log_scale)); }

  // |matrix|_F = exp(log_scale) because the unit part has norm one.
  double displacement() const { return displacement_from_log_norm(log_scale); }
};

}  // namespace hyperlab
