#include <cmath>
#include <numbers>

#include "affdim/error.hpp"
#include "affdim/verify.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace affdim;

namespace {

constexpr double kPi = std::numbers::pi;

Vector rotate(const Vector& p, double t) {
  return Vector{std::cos(t) * p[0] - std::sin(t) * p[1], std::sin(t) * p[0] + std::cos(t) * p[1]};
}

CondensationSet l_shape(double t = 0.0) {
  const Vector o{0.0, 0.0};
  return CondensationSet(2, {Segment{rotate(o, t), rotate(Vector{0.5, 0.0}, t)},
                             Segment{rotate(o, t), rotate(Vector{0.0, 0.5}, t)}});
}

Ifs scaled_pair(double r, double shift) {
  const Matrix h = Matrix::diagonal({r, r});
  return Ifs({AffineMap(h, Vector{0.0, 0.0}), AffineMap(h, Vector{shift, shift})});
}

}  // namespace

TEST_CASE("sandwich on the worked example") {
  const System sys = make_system(testsupport::example_ifs(), testsupport::example_circle());
  const BoundReport r = verify_sandwich(sys);
  CHECK(r.passed());
  CHECK(r.dim_FC.ols_slope > 1.05);
  CHECK(r.dim_F0.ols_slope == doctest::Approx(0.0));
  CHECK(r.dim_C.ols_slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r.s_upper == doctest::Approx(r.affinity.upper));
  // The flags follow from the reported numbers alone.
  CHECK(r.lower_bound_ok == BoundReport::lower_ok(r.dim_F0, r.dim_C, r.dim_FC, r.slack));
  CHECK(r.upper_bound_ok == BoundReport::upper_ok(r.dim_C, r.dim_FC, r.s_upper, r.slack));
  CHECK(r.curve_FC.samples.front().j == 4);
  CHECK(r.curve_FC.samples.back().j == 11);
  for (std::size_t i = 0; i < r.curve_FC.samples.size(); ++i) {
    CHECK(r.curve_F0.samples[i].count <= r.curve_FC.samples[i].count);
    CHECK(r.curve_C.samples[i].count <= r.curve_FC.samples[i].count);
  }
}

TEST_CASE("sandwich flag formulas") {
  DimEstimate f0, c, fc;
  f0.ols_slope = 1.2;
  c.ols_slope = 1.0;
  fc.ols_slope = 1.15;
  CHECK(BoundReport::lower_ok(f0, c, fc, 0.1));
  CHECK_FALSE(BoundReport::lower_ok(f0, c, fc, 0.01));
  CHECK(BoundReport::upper_ok(c, fc, 1.1, 0.1));
  CHECK_FALSE(BoundReport::upper_ok(c, fc, 1.0, 0.1));
}

TEST_CASE("sandwich on a gasket and on a sparse Cantor dust with a circle") {
  SandwichOptions opts;
  opts.k_max = 6;
  opts.j_max = 10;
  const System gasket = make_system(testsupport::similarity3(), CondensationSet(2, {PointCloud{{Vector{0.25, 0.25}}}}));
  const BoundReport g = verify_sandwich(gasket, opts);
  CHECK(g.passed());
  CHECK(g.dim_FC.ols_slope == doctest::Approx(std::log2(3.0)).epsilon(0.03));
  CHECK(g.s_upper == doctest::Approx(std::log2(3.0)).epsilon(1e-9));

  // dim F_∅ = 1/3 while C is a circle, so F_C is dominated by C.
  const System dust = make_system(scaled_pair(0.125, 0.875), CondensationSet(2, {Circle{Vector{0.5, 0.5}, 0.2}}));
  const BoundReport d = verify_sandwich(dust, opts);
  CHECK(d.passed());
  CHECK(d.s_upper == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(d.dim_FC.ols_slope == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("kappa condition") {
  const System sys = make_system(testsupport::example_ifs(), testsupport::example_circle());
  std::vector<double> deltas;
  for (int j = 4; j <= 8; ++j) deltas.push_back(std::ldexp(1.0, -j));
  const KappaReport k = kappa_condition(sys, deltas);
  REQUIRE(k.per_delta.size() == deltas.size());
  double floor = 1.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& s = k.per_delta[i];
    CHECK(s.delta == deltas[i]);
    CHECK(s.words > 0);
    CHECK(s.min_ratio > 0.0);
    CHECK(s.min_ratio <= 1.0);
    floor = std::min(floor, s.min_ratio);
  }
  CHECK(k.kappa_floor == floor);
  CHECK(k.kappa_floor > 0.1);

  // A point cannot fill a positive fraction of ever finer ellipses.
  const System pt = make_system(testsupport::example_ifs(), CondensationSet(2, {PointCloud{{Vector{0.75, 0.75}}}}));
  const KappaReport kp = kappa_condition(pt, {std::ldexp(1.0, -4), std::ldexp(1.0, -10)});
  CHECK(kp.per_delta[1].min_ratio < 0.1 * kp.per_delta[0].min_ratio);

  CHECK_THROWS_AS(kappa_condition(sys, {0.0}), DomainError);
  CHECK_THROWS_AS(kappa_condition(sys, {1.5}), DomainError);
}

TEST_CASE("projection measure") {
  const CondensationSet circle(2, {Circle{Vector{0.75, 0.75}, 0.2}});
  const auto pc = projection_measure(circle, 180);
  CHECK(pc.per_angle.size() == 180);
  for (const auto& s : pc.per_angle) CHECK(s.measure == doctest::Approx(0.4).epsilon(1e-3));

  // A segment along the x-axis collapses to (nearly) nothing at angle π/2.
  const CondensationSet seg(2, {Segment{Vector{0.0, 0.0}, Vector{1.0, 0.0}}});
  const auto ps = projection_measure(seg, 8);
  CHECK(ps.per_angle[0].measure == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ps.min_measure < 1e-3);
  CHECK(ps.argmin_angle == doctest::Approx(kPi / 2));
  for (const auto& s : ps.per_angle)
    CHECK(s.measure == doctest::Approx(std::abs(std::cos(s.angle)) + kProjectionDelta).epsilon(2e-3));

  // L-shape: the two arms project onto the same side for θ ∈ [0, π/2], minimum √2/4 at θ = π/4.
  const auto pl = projection_measure(l_shape(), 720);
  CHECK(pl.min_measure == doctest::Approx(std::sqrt(2.0) / 4.0 + kProjectionDelta).epsilon(1e-3));
  CHECK(pl.argmin_angle == doctest::Approx(kPi / 4).epsilon(1e-2));

  // Rotating C by a multiple of the angular step permutes the samples.
  const int steps = 720;
  const auto rotated = projection_measure(l_shape(37 * kPi / steps), steps);
  CHECK(rotated.min_measure == doctest::Approx(pl.min_measure).epsilon(1e-3));
  for (int i = 0; i < steps; ++i) {
    const auto& a = pl.per_angle[static_cast<std::size_t>(i)];
    const auto& b = rotated.per_angle[static_cast<std::size_t>((i + 37) % steps)];
    CHECK(a.measure == doctest::Approx(b.measure).epsilon(1e-3));
  }

  CHECK(projection_measure_min(circle, 16) == doctest::Approx(0.4).epsilon(1e-3));
  CHECK_THROWS_AS(projection_measure(circle, 3), DomainError);
  const CondensationSet c3(3, {PointCloud{{Vector{0.0, 0.0, 0.0}}}});
  CHECK_THROWS_AS(projection_measure(c3, 16), Unsupported);
}

TEST_CASE("condensation open set condition on rectangles") {
  const Rect unit{Vector{0.0, 0.0}, Vector{1.0, 1.0}};

  const auto ok = cosc_check_rect(testsupport::example_ifs(), testsupport::example_circle(), unit);
  CHECK(ok.holds);
  CHECK(ok.clause == CoscClause::none);
  CHECK(ok.eta > 0.0);
  CHECK(ok.eta == doctest::Approx(0.025).epsilon(0.05));

  // (a) the image of a small rectangle leaves it.
  const CondensationSet far(2, {PointCloud{{Vector{0.3, 0.3}}}});
  const auto a = cosc_check_rect(testsupport::similarity3(), far, Rect{Vector{0.0, 0.0}, Vector{0.4, 0.4}});
  CHECK_FALSE(a.holds);
  CHECK(a.clause == CoscClause::a);
  CHECK(a.map_i == 1);
  CHECK(std::string(clause_name(a.clause)) == "a");

  // (b) overlapping images.
  const auto b = cosc_check_rect(scaled_pair(0.6, 0.4), far, unit);
  CHECK_FALSE(b.holds);
  CHECK(b.clause == CoscClause::b);
  CHECK(b.map_i == 0);
  CHECK(b.map_j == 1);

  // (c) C meets an image of U.
  const auto c = cosc_check_rect(testsupport::example_ifs(), testsupport::example_circle(0.25, 0.25), unit);
  CHECK_FALSE(c.holds);
  CHECK(c.clause == CoscClause::c);
  REQUIRE(c.point.has_value());
  CHECK(distance(*c.point, Vector{0.25, 0.25}) == doctest::Approx(0.2).epsilon(1e-9));

  // Touching images are allowed.
  const auto tiles = cosc_check_rect(testsupport::square_tiling(), far, unit);
  CHECK(tiles.clause != CoscClause::a);
  CHECK(tiles.clause != CoscClause::b);

  CHECK_THROWS_AS(cosc_check_rect(testsupport::example_ifs(), far, Rect{Vector{0.5, 0.0}, Vector{0.5, 1.0}}),
                  DomainError);
}
