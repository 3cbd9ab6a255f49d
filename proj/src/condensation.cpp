#include "affdim/condensation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "affdim/error.hpp"

namespace affdim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void append_segment(const Vector& p, const Vector& q, double spacing, bool include_end, std::vector<Vector>& out) {
  const double len = distance(p, q);
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(len / spacing)));
  const long last = include_end ? steps : steps - 1;
  for (long i = 0; i <= last; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    out.push_back((1.0 - t) * p + t * q);
  }
}

}  // namespace

CondensationSet::CondensationSet(int dim, std::vector<Primitive> primitives)
    : dim_(dim), primitives_(std::move(primitives)) {
  if (primitives_.empty()) throw DomainError("condensation set must contain at least one primitive");
  auto check = [&](const Vector& v, const char* what) {
    if (v.dim() != dim_) {
      throw DimensionMismatch(std::string(what) + " has dimension " + std::to_string(v.dim()) +
                              ", expected " + std::to_string(dim_));
    }
  };
  for (const auto& prim : primitives_) {
    std::visit(Overloaded{
                   [&](const Circle& c) {
                     if (dim_ != 2) throw Unsupported("circle primitives require n = 2");
                     check(c.center, "circle center");
                     if (!(c.radius > 0.0)) throw DomainError("circle radius must be positive");
                   },
                   [&](const Segment& s) {
                     check(s.p, "segment endpoint");
                     check(s.q, "segment endpoint");
                   },
                   [&](const Polygon& p) {
                     if (dim_ != 2) throw Unsupported("polygon primitives require n = 2");
                     if (p.vertices.size() < 3) throw DomainError("polygon needs at least three vertices");
                     for (const auto& v : p.vertices) check(v, "polygon vertex");
                   },
                   [&](const PointCloud& pc) {
                     if (pc.points.empty()) throw DomainError("point cloud must not be empty");
                     for (const auto& v : pc.points) check(v, "point");
                   },
               },
               prim);
  }
}

std::vector<Vector> CondensationSet::discretize(double delta) const {
  if (!(delta > 0.0)) throw DomainError("discretize: delta must be positive");
  const double spacing = 0.5 * delta;
  std::vector<Vector> out;
  for (const auto& prim : primitives_) {
    std::visit(Overloaded{
                   [&](const Circle& c) {
                     const double circumference = 2.0 * std::numbers::pi * c.radius;
                     const auto count = std::max<long>(8, static_cast<long>(std::ceil(circumference / spacing)));
                     for (long i = 0; i < count; ++i) {
                       const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
                       out.push_back(c.center + Vector{c.radius * std::cos(t), c.radius * std::sin(t)});
                     }
                   },
                   [&](const Segment& s) { append_segment(s.p, s.q, spacing, true, out); },
                   [&](const Polygon& p) {
                     const std::size_t k = p.vertices.size();
                     for (std::size_t i = 0; i < k; ++i) {
                       append_segment(p.vertices[i], p.vertices[(i + 1) % k], spacing, false, out);
                     }
                   },
                   [&](const PointCloud& pc) { out.insert(out.end(), pc.points.begin(), pc.points.end()); },
               },
               prim);
  }
  return out;
}

std::pair<Vector, Vector> CondensationSet::bounding_box() const {
  Vector lo = Vector::filled(dim_, std::numeric_limits<double>::infinity());
  Vector hi = Vector::filled(dim_, -std::numeric_limits<double>::infinity());
  auto grow = [&](const Vector& v, double pad) {
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::min(lo[i], v[i] - pad);
      hi[i] = std::max(hi[i], v[i] + pad);
    }
  };
  for (const auto& prim : primitives_) {
    std::visit(Overloaded{
                   [&](const Circle& c) { grow(c.center, c.radius); },
                   [&](const Segment& s) {
                     grow(s.p, 0.0);
                     grow(s.q, 0.0);
                   },
                   [&](const Polygon& p) {
                     for (const auto& v : p.vertices) grow(v, 0.0);
                   },
                   [&](const PointCloud& pc) {
                     for (const auto& v : pc.points) grow(v, 0.0);
                   },
               },
               prim);
  }
  return {lo, hi};
}

double CondensationSet::max_distance(const Vector& from) const {
  double best = 0.0;
  auto see = [&](const Vector& v, double pad) { best = std::max(best, distance(v, from) + pad); };
  for (const auto& prim : primitives_) {
    std::visit(Overloaded{
                   [&](const Circle& c) { see(c.center, c.radius); },
                   [&](const Segment& s) {
                     see(s.p, 0.0);
                     see(s.q, 0.0);
                   },
                   [&](const Polygon& p) {
                     for (const auto& v : p.vertices) see(v, 0.0);
                   },
                   [&](const PointCloud& pc) {
                     for (const auto& v : pc.points) see(v, 0.0);
                   },
               },
               prim);
  }
  return best;
}

CondensationSet CondensationSet::transformed(const Similarity& t) const {
  std::vector<Primitive> out;
  out.reserve(primitives_.size());
  for (const auto& prim : primitives_) {
    out.push_back(std::visit(Overloaded{
                                 [&](const Circle& c) -> Primitive { return Circle{t.apply(c.center), c.radius * t.scale}; },
                                 [&](const Segment& s) -> Primitive { return Segment{t.apply(s.p), t.apply(s.q)}; },
                                 [&](const Polygon& p) -> Primitive {
                                   Polygon q;
                                   for (const auto& v : p.vertices) q.vertices.push_back(t.apply(v));
                                   return q;
                                 },
                                 [&](const PointCloud& pc) -> Primitive {
                                   PointCloud q;
                                   for (const auto& v : pc.points) q.points.push_back(t.apply(v));
                                   return q;
                                 },
                             },
                             prim));
  }
  return {dim_, std::move(out)};
}

std::vector<Vector> discretize(const CondensationSet& c, double delta) { return c.discretize(delta); }

}  // namespace affdim
