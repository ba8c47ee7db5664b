#include "rhc/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rhc/errors.hpp"

namespace rhc {

namespace {

constexpr double kGeomEps = 1e-12;

}  // namespace

Complex Circle::node(int k) const {
  const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(node_count);
  return center + radius * Complex(std::cos(t), std::sin(t));
}

double Circle::node_spacing() const { return 2.0 * kPi * radius / static_cast<double>(node_count); }

void validate(const Circle& c) {
  if (!(c.radius > 0.0) || !std::isfinite(c.radius))
    throw InvalidArgumentError("circle radius must be positive and finite");
  if (!std::isfinite(c.center.real()) || !std::isfinite(c.center.imag()))
    throw InvalidArgumentError("circle centre must be finite");
  if (c.node_count < 4 || c.node_count % 2 != 0)
    throw InvalidArgumentError("circle node_count must be an even integer >= 4, got " +
                               std::to_string(c.node_count));
}

ContourSystem ContourSystem::build(std::vector<Circle> circles) {
  for (const auto& c : circles) validate(c);

  const std::size_t count = circles.size();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const Circle& a = circles[i];
      const Circle& b = circles[j];
      const double d = std::abs(a.center - b.center);
      const double scale = std::max(a.radius, b.radius);
      const bool separate = d > a.radius + b.radius + kGeomEps * scale;
      const bool nested = d < std::abs(a.radius - b.radius) - kGeomEps * scale;
      if (!separate && !nested) {
        std::ostringstream msg;
        msg << "circles " << i << " and " << j << " intersect or touch";
        throw OverlapError(msg.str());
      }
    }
  }

  ContourSystem cs;
  cs.circles_ = std::move(circles);
  cs.offsets_.assign(count + 1, 0);
  for (std::size_t i = 0; i < count; ++i)
    cs.offsets_[i + 1] = cs.offsets_[i] + static_cast<std::size_t>(cs.circles_[i].node_count);

  // Containment tree: parent = smallest strictly enclosing circle.
  cs.parent_.assign(count, std::nullopt);
  for (std::size_t i = 0; i < count; ++i) {
    const Circle& c = cs.circles_[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const Circle& o = cs.circles_[j];
      if (o.radius > c.radius && std::abs(c.center - o.center) < o.radius - c.radius && o.radius < best) {
        best = o.radius;
        cs.parent_[i] = j;
      }
    }
  }

  // Each region is "inside circle j" (minus its children) or the unbounded one.
  // A circle labels its inside region by its own orientation and its outside
  // region (the parent's inside, or the unbounded region) oppositely.
  std::vector<int> inside_label(count, 0);
  int unbounded_label = 0;
  auto assign = [](int& slot, int value, std::size_t circle) {
    if (slot == 0) {
      slot = value;
    } else if (slot != value) {
      throw OrientationError("inconsistent Omega_plus/Omega_minus labels around circle " +
                             std::to_string(circle));
    }
  };
  for (std::size_t i = 0; i < count; ++i) {
    const Circle& c = cs.circles_[i];
    const int in = c.interior_is_plus() ? 1 : -1;
    assign(inside_label[i], in, i);
    if (cs.parent_[i]) {
      assign(inside_label[*cs.parent_[i]], -in, i);
    } else {
      assign(unbounded_label, -in, i);
    }
  }
  cs.unbounded_side_ = unbounded_label > 0 ? Side::plus : Side::minus;
  return cs;
}

std::size_t ContourSystem::circle_of_node(std::size_t k) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), k);
  return static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
}

Complex ContourSystem::node_point(std::size_t k) const {
  const std::size_t c = circle_of_node(k);
  return circles_[c].node(static_cast<int>(k - offsets_[c]));
}

std::vector<Node> ContourSystem::nodes() const {
  std::vector<Node> out;
  out.reserve(total_nodes());
  for (const auto& c : circles_) {
    const double n = static_cast<double>(c.node_count);
    for (int k = 0; k < c.node_count; ++k) {
      const Complex p = c.node(k);
      const Complex w = 2.0 * kPi * kI * (p - c.center) / n * c.orientation_sign();
      out.push_back({p, w});
    }
  }
  return out;
}

Side ContourSystem::side_of(Complex z) const {
  std::optional<std::size_t> innermost;
  for (std::size_t i = 0; i < circles_.size(); ++i) {
    const Circle& c = circles_[i];
    const double d = std::abs(z - c.center);
    if (std::abs(d - c.radius) <= kGeomEps * std::max(1.0, c.radius))
      throw InvalidArgumentError("point lies on circle " + std::to_string(i));
    if (d < c.radius && (!innermost || c.radius < circles_[*innermost].radius)) innermost = i;
  }
  if (!innermost) return unbounded_side_;
  return circles_[*innermost].interior_is_plus() ? Side::plus : Side::minus;
}

double ContourSystem::distance_to_contour(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : circles_) best = std::min(best, std::abs(std::abs(z - c.center) - c.radius));
  return best;
}

std::optional<std::size_t> ContourSystem::find_circle(const Circle& target, double tol) const {
  for (std::size_t i = 0; i < circles_.size(); ++i) {
    const Circle& c = circles_[i];
    const double scale = std::max(1.0, target.radius);
    if (std::abs(c.center - target.center) <= tol * std::max(1.0, std::abs(target.center)) &&
        std::abs(c.radius - target.radius) <= tol * scale && c.orientation == target.orientation)
      return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ContourSystem::unit_circle() const {
  for (std::size_t i = 0; i < circles_.size(); ++i) {
    const Circle& c = circles_[i];
    if (std::abs(c.center) <= 1e-12 && std::abs(c.radius - 1.0) <= 1e-12) return i;
  }
  return std::nullopt;
}

ContourPtr build_contour(std::vector<Circle> circles) {
  return std::make_shared<const ContourSystem>(ContourSystem::build(std::move(circles)));
}

Circle invert_circle(const Circle& c) {
  validate(c);
  const double denom = std::norm(c.center) - c.radius * c.radius;
  if (std::abs(denom) <= kGeomEps * std::max(1.0, c.radius * c.radius))
    throw SingularInversionError("circle passes through the origin; its inversion is a line");
  Circle out = c;
  out.center = c.center / denom;
  out.radius = c.radius / std::abs(denom);
  // denom > 0: origin outside, traversal flips. denom < 0: origin inside, kept.
  if (denom > 0.0)
    out.orientation = c.orientation == Orientation::counterclockwise ? Orientation::clockwise
                                                                      : Orientation::counterclockwise;
  return out;
}

std::vector<Node> nodes(const ContourSystem& cs) { return cs.nodes(); }

}  // namespace rhc
