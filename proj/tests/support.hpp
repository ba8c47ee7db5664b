#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "rhc/contour.hpp"
#include "rhc/types.hpp"

namespace test {

using rhc::Circle;
using rhc::Complex;
using rhc::Matrix;
using rhc::Orientation;

inline Circle unit(Orientation o = Orientation::counterclockwise, int nodes = 64) {
  return Circle{Complex(0.0, 0.0), 1.0, o, nodes};
}

inline Matrix scalar(Complex v) { return Matrix::Constant(1, 1, v); }

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Seeded generator with the handful of draws the property tests need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }
  Complex complex_in_box(double half) { return {uniform(-half, half), uniform(-half, half)}; }
  Complex complex_unit_disk(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double t = uniform(0.0, 2.0 * rhc::kPi);
    return std::polar(r, t);
  }

  // Up to `count` pairwise disjoint circles (rejection sampling), random orientations.
  std::vector<Circle> disjoint_circles(int count, int nodes = 16) {
    std::vector<Circle> out;
    for (int attempt = 0; attempt < 400 && static_cast<int>(out.size()) < count; ++attempt) {
      Circle c{complex_in_box(3.0), uniform(0.2, 2.5), coin() ? Orientation::counterclockwise : Orientation::clockwise,
               nodes};
      bool ok = true;
      for (const auto& o : out) {
        const double d = std::abs(c.center - o.center);
        if (!(d > c.radius + o.radius + 0.05 || d < std::abs(c.radius - o.radius) - 0.05)) ok = false;
      }
      if (ok) out.push_back(c);
    }
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

/// Signed crossing count of the ray z + t (cos a, sin a), t > 0, with one circle:
/// odd parity means z is enclosed, and the sign is the circle's orientation.
inline int ray_winding(const Circle& c, Complex z) {
  const Complex d = std::polar(1.0, 0.5772156649);  // generic direction
  const Complex w = z - c.center;
  // |w + t d|^2 = r^2  ->  t^2 + 2 Re(conj(d) w) t + |w|^2 - r^2 = 0
  const double b = (std::conj(d) * w).real();
  const double cc = std::norm(w) - c.radius * c.radius;
  const double disc = b * b - cc;
  int crossings = 0;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    if (-b - s > 0.0) ++crossings;
    if (-b + s > 0.0) ++crossings;
  }
  const int inside = crossings % 2;
  return inside * (c.orientation == Orientation::counterclockwise ? 1 : -1);
}

inline int total_winding(const std::vector<Circle>& cs, Complex z) {
  int w = 0;
  for (const auto& c : cs) w += ray_winding(c, z);
  return w;
}

/// Direct trapezoid quadrature of (1/2 pi i) \oint_c f(w) / (w - z) dw for closed-form f.
template <class F>
Matrix trapezoid_cauchy(const Circle& c, F f, Complex z, int points) {
  Matrix acc;
  for (int k = 0; k < points; ++k) {
    const Complex e = std::polar(1.0, 2.0 * rhc::kPi * k / points);
    const Complex w = c.center + c.radius * e;
    const Complex dw = rhc::kI * c.radius * e * (2.0 * rhc::kPi / points) *
                       (c.orientation == Orientation::counterclockwise ? 1.0 : -1.0);
    const Matrix term = f(w) * (dw / (w - z) / (2.0 * rhc::kPi * rhc::kI));
    if (k == 0) {
      acc = term;
    } else {
      acc += term;
    }
  }
  return acc;
}

}  // namespace test
