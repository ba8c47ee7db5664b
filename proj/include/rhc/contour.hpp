#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "rhc/types.hpp"

namespace rhc {

enum class Orientation { counterclockwise, clockwise };

inline const char* to_string(Orientation o) {
  return o == Orientation::counterclockwise ? "ccw" : "cw";
}

/// An oriented circle carrying `node_count` equispaced collocation nodes
/// center + radius * exp(2 pi i k / node_count), k = 0..node_count-1.
struct Circle {
  Complex center{0.0, 0.0};
  double radius = 1.0;
  Orientation orientation = Orientation::counterclockwise;
  int node_count = 64;

  Complex node(int k) const;
  // +1 for counterclockwise, -1 for clockwise.
  double orientation_sign() const { return orientation == Orientation::counterclockwise ? 1.0 : -1.0; }
  // The left side of an oriented circle is Omega_plus; for ccw that is the interior.
  bool interior_is_plus() const { return orientation == Orientation::counterclockwise; }
  double node_spacing() const;
  bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

/// Throws InvalidArgumentError unless radius > 0 and node_count >= 4 is even.
void validate(const Circle& c);

/// Collocation node with its signed arc element dz_k (trapezoid weight).
struct Node {
  Complex point;
  Complex weight;
};

/// Disjoint union of oriented circles with consistent Omega_plus/Omega_minus labels.
/// Immutable once built.
class ContourSystem {
 public:
  static ContourSystem build(std::vector<Circle> circles);

  const std::vector<Circle>& circles() const { return circles_; }
  const Circle& circle(std::size_t i) const { return circles_.at(i); }
  std::size_t circle_count() const { return circles_.size(); }
  std::size_t total_nodes() const { return offsets_.back(); }
  // First global node index of circle i; offset(circle_count()) == total_nodes().
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  std::size_t circle_of_node(std::size_t k) const;

  Complex node_point(std::size_t k) const;
  std::vector<Node> nodes() const;

  // Innermost circle strictly containing circle i, if any.
  std::optional<std::size_t> parent(std::size_t i) const { return parent_.at(i); }
  Side unbounded_side() const { return unbounded_side_; }

  // Side of C \ Sigma containing z. Throws InvalidArgumentError for points on a circle.
  Side side_of(Complex z) const;

  // Smallest distance from z to any circle of the system.
  double distance_to_contour(Complex z) const;

  // Index of a circle matching `c` in centre, radius and orientation (relative tolerance).
  std::optional<std::size_t> find_circle(const Circle& c, double tol = 1e-10) const;

  // Index of the unit circle |z| = 1, if present.
  std::optional<std::size_t> unit_circle() const;

 private:
  std::vector<Circle> circles_;
  std::vector<std::size_t> offsets_;
  std::vector<std::optional<std::size_t>> parent_;
  Side unbounded_side_ = Side::minus;
};

using ContourPtr = std::shared_ptr<const ContourSystem>;

/// Validates disjointness and side consistency; see ContourSystem::build.
ContourPtr build_contour(std::vector<Circle> circles);

/// The circle {1/conj(z) : z in c}. Traversal is inherited pointwise, so the
/// orientation flips for circles not enclosing 0 and is kept for circles enclosing 0.
Circle invert_circle(const Circle& c);

/// Inversion in the unit circle, z -> 1/conj(z).
inline Complex invert_point(Complex z) { return 1.0 / std::conj(z); }

std::vector<Node> nodes(const ContourSystem& cs);

}  // namespace rhc
