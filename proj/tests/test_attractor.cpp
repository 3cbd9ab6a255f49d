#include <cmath>
#include <cstdint>
#include <set>

#include "affdim/attractor.hpp"
#include "affdim/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace affdim;

namespace {

// Sierpinski gasket with vertices (0,0), (1,0), (0,1): a dyadic point lies in it iff the binary
// expansions of x and y share no 1 digit (and x + y ≤ 1).
bool in_gasket(const Vector& p) {
  const double scale = std::ldexp(1.0, 40);
  const double x = p[0] * scale;
  const double y = p[1] * scale;
  if (x != std::floor(x) || y != std::floor(y) || x < 0 || y < 0) return false;
  return (static_cast<std::uint64_t>(x) & static_cast<std::uint64_t>(y)) == 0 && p[0] + p[1] <= 1.0;
}

// Ball whose corner (−1/2, −1/2) keeps the δ-grid aligned with the dyadic grid of the unit square.
const BoundingBall kAligned{Vector{0.5, 0.5}, 1.0};

}  // namespace

TEST_CASE("cells and rasterization") {
  CHECK(cell_of(Vector{0.26, 0.74}, Vector{0.0, 0.0}, 0.25) == CellIndex{1, 2, 0});
  CHECK(cell_of(Vector{-0.01, 0.0}, Vector{0.0, 0.0}, 0.25) == CellIndex{-1, 0, 0});
  const BoundingBall ball{Vector{0.5, 0.5}, 0.5};
  const std::vector<Vector> pts{Vector{0.5, 0.5}, Vector{0.51, 0.52}, Vector{0.9, 0.5}};
  const RasterGrid g = rasterize(pts, 0.25, ball);
  CHECK(g.count() == 2);
  CHECK(g.contains(CellIndex{2, 2, 0}));
  CHECK(g.contains(CellIndex{3, 2, 0}));
  CHECK_THROWS_AS(rasterize(std::vector<Vector>{Vector{3.0, 3.0}}, 0.25, ball), InvariantViolation);
  CHECK_THROWS_AS(rasterize(pts, 0.0, ball), DomainError);

  const RasterGrid sub = rasterize(std::vector<Vector>{Vector{0.5, 0.5}}, 0.25, ball);
  CHECK(sub.subset_of(g));
  CHECK_FALSE(g.subset_of(sub));
  CHECK_THROWS_AS(sub.subset_of(rasterize(pts, 0.125, ball)), DomainError);
}

TEST_CASE("ellipsoid samples lie in S(X) and are dense along the axes") {
  const AffineMap m(Matrix{{0.5, 0.0}, {0.5, 0.5}}, Vector{0.1, 0.2});
  const BoundingBall ball{Vector{0.5, 0.5}, 0.5};
  const double delta = 1.0 / 64.0;
  const auto pts = ellipsoid_samples(m, ball, delta);
  const Matrix inv_lin = [&] {
    const Matrix& a = m.linear();
    const double d = a.determinant();
    return Matrix{{a(1, 1) / d, -a(0, 1) / d}, {-a(1, 0) / d, a(0, 0) / d}};
  }();
  bool has_center = false;
  for (const auto& p : pts) {
    const Vector pre = inv_lin * (p - m.translation());
    CHECK(distance(pre, ball.center) <= ball.radius * (1.0 + 1e-9));
    if (distance(p, m(ball.center)) < 1e-14) has_center = true;
  }
  CHECK(has_center);
  // Major axis half-length α1·r sampled at spacing ≤ δ/2.
  const double a1 = singular_values(m.linear()).largest();
  CHECK(pts.size() >= static_cast<std::size_t>(2.0 * a1 * 0.5 / (0.5 * delta)));
}

TEST_CASE("homogeneous attractor of the gasket: exact points, dense, dimension") {
  const Ifs ifs = testsupport::similarity3();
  for (int j = 3; j <= 8; ++j) {
    const double delta = std::ldexp(1.0, -j);
    const PointRaster r = homogeneous(ifs, kAligned, delta, default_anchor(ifs));
    for (const auto& p : r.points) REQUIRE(in_gasket(p));
    // Every cell of the level-j gasket tiling holds a generated point within the error bound.
    std::set<CellIndex> occupied(r.grid.cells().begin(), r.grid.cells().end());
    const int reach = static_cast<int>(std::ceil(std::sqrt(2.0) / (1.0 - 0.5))) + 1;
    const int side = 1 << j;
    for (int a = 0; a < side; ++a) {
      for (int b = 0; a + b < side; ++b) {
        if ((a & b) != 0) continue;
        const Vector corner{a * delta, b * delta};
        const CellIndex c = cell_of(corner, kAligned.corner(), delta);
        bool near = false;
        for (int dx = -reach; dx <= reach && !near; ++dx)
          for (int dy = -reach; dy <= reach && !near; ++dy)
            near = occupied.count(CellIndex{c[0] + dx, c[1] + dy, 0}) != 0;
        REQUIRE(near);
      }
    }
  }
}

TEST_CASE("homogeneous attractor of the square tiling fills the dyadic grid exactly") {
  const Ifs ifs = testsupport::square_tiling();
  for (int j = 2; j <= 8; ++j) {
    const PointRaster r = homogeneous(ifs, kAligned, std::ldexp(1.0, -j), default_anchor(ifs));
    CHECK(r.grid.count() == (std::size_t{1} << (2 * j)));
  }
}

TEST_CASE("homogeneous attractor with a common fixed point is a single cell") {
  const NormalizedSystem ns = normalize(make_system(testsupport::example_ifs(), testsupport::example_circle()));
  for (int j = 4; j <= 12; ++j) {
    CHECK(homogeneous(ns.system.ifs, ns.system.ball, std::ldexp(1.0, -j), default_anchor(ns.system.ifs)).grid.count() == 1);
  }
}

TEST_CASE("orbital and inhomogeneous rasters") {
  const NormalizedSystem ns = normalize(make_system(testsupport::example_ifs(), testsupport::example_circle()));
  const System& s = ns.system;
  std::size_t prev = 0;
  for (int j = 4; j <= 10; ++j) {
    const double delta = std::ldexp(1.0, -j);
    const PointRaster orb = orbital(s, delta);
    const PointRaster fc = inhomogeneous(s, delta, default_anchor(s.ifs));
    const PointRaster f0 = homogeneous(s.ifs, s.ball, delta, default_anchor(s.ifs));
    const RasterGrid c = rasterize(discretize(s.condensation, delta), delta, s.ball);
    CHECK(c.subset_of(orb.grid));
    CHECK(orb.grid.subset_of(fc.grid));
    CHECK(f0.grid.subset_of(fc.grid));
    CHECK(fc.grid.count() >= prev);
    prev = fc.grid.count();
    for (std::size_t i = 0; i < fc.points.size(); ++i) {
      REQUIRE(cell_of(fc.points[i], fc.grid.origin(), delta) == fc.grid.cells()[i]);
    }
  }
}

TEST_CASE("generator preconditions") {
  const Ifs ifs = testsupport::similarity3();
  CHECK_THROWS_AS(homogeneous(ifs, kAligned, 0.0, default_anchor(ifs)), DomainError);
  CHECK_THROWS_AS(homogeneous(ifs, kAligned, 2.0, default_anchor(ifs)), DomainError);
  CHECK_THROWS_AS(homogeneous(ifs, kAligned, 0.1, Vector{9.0, 9.0}), DomainError);
  GenOptions tiny;
  tiny.word_budget = 10;
  CHECK_THROWS_AS(homogeneous(ifs, kAligned, 1.0 / 256, default_anchor(ifs), tiny), BudgetExceeded);

  const Ifs four({AffineMap(Matrix::diagonal({0.5, 0.5, 0.5, 0.5}), Vector(4))});
  const BoundingBall b4{Vector(4), 1.0};
  CHECK_THROWS_AS(homogeneous(four, b4, 0.1, Vector(4)), Unsupported);
}
