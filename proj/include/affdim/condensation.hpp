#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "affdim/linalg.hpp"

namespace affdim {

/// Boundary of a disc (n = 2 only).
struct Circle {
  Vector center;
  double radius = 0.0;
};

struct Segment {
  Vector p;
  Vector q;
};

/// Closed polygon boundary through `vertices` (n = 2 only).
struct Polygon {
  std::vector<Vector> vertices;
};

struct PointCloud {
  std::vector<Vector> points;
};

using Primitive = std::variant<Circle, Segment, Polygon, PointCloud>;

/// Similarity x ↦ scale·x + shift, used to move a system into unit-diameter coordinates.
struct Similarity {
  double scale = 1.0;
  Vector shift;

  Vector apply(const Vector& x) const { return scale * x + shift; }
  Vector invert(const Vector& y) const { return (1.0 / scale) * (y - shift); }
};

/// Compact condensation set C given as a finite union of primitives.
class CondensationSet {
 public:
  /// Validates: non-empty, consistent dimension, circles/polygons only in the plane,
  /// positive radii, polygons with at least three vertices, non-empty point clouds.
  CondensationSet(int dim, std::vector<Primitive> primitives);

  int dim() const noexcept { return dim_; }
  const std::vector<Primitive>& primitives() const noexcept { return primitives_; }

  /// Points on every primitive with successive spacing ≤ δ/2 along each one.
  std::vector<Vector> discretize(double delta) const;

  /// Smallest axis-aligned box containing C.
  std::pair<Vector, Vector> bounding_box() const;
  /// sup_{x ∈ C} |x − from| (exact for every primitive kind).
  double max_distance(const Vector& from) const;

  CondensationSet transformed(const Similarity& t) const;

 private:
  int dim_;
  std::vector<Primitive> primitives_;
};

/// Free-function form of CondensationSet::discretize.
std::vector<Vector> discretize(const CondensationSet& c, double delta);

}  // namespace affdim
