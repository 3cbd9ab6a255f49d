#include "affdim/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <numbers>

#include <omp.h>

#include "affdim/error.hpp"

namespace affdim {

// --- sandwich -----------------------------------------------------------------

bool BoundReport::lower_ok(const DimEstimate& f0, const DimEstimate& c, const DimEstimate& fc, double slack) {
  return std::max(f0.ols_slope, c.ols_slope) <= fc.ols_slope + slack;
}

bool BoundReport::upper_ok(const DimEstimate& c, const DimEstimate& fc, double s_upper, double slack) {
  return fc.ols_slope <= std::max(s_upper, c.ols_slope) + slack;
}

BoundReport verify_sandwich(const System& system, const SandwichOptions& opts) {
  if (!(opts.tol >= 0.0)) throw DomainError("verify_sandwich: tolerance must be non-negative");
  const NormalizedSystem ns = normalize(system);
  const System& s = ns.system;

  BoundReport r;
  r.slack = opts.tol;
  r.curve_C = target_curve(s, Target::C, opts.j_min, opts.j_max, opts.gen);
  r.curve_F0 = target_curve(s, Target::F0, opts.j_min, opts.j_max, opts.gen);
  r.curve_FC = target_curve(s, Target::FC, opts.j_min, opts.j_max, opts.gen);
  r.dim_C = estimate_dims(r.curve_C, opts.window);
  r.dim_F0 = estimate_dims(r.curve_F0, opts.window);
  r.dim_FC = estimate_dims(r.curve_FC, opts.window);
  r.affinity = affinity_estimate(system.ifs, opts.k_max, opts.pressure);
  r.s_upper = r.affinity.upper;
  r.lower_bound_ok = BoundReport::lower_ok(r.dim_F0, r.dim_C, r.dim_FC, r.slack);
  r.upper_bound_ok = BoundReport::upper_ok(r.dim_C, r.dim_FC, r.s_upper, r.slack);
  return r;
}

// --- kappa ----------------------------------------------------------------------

namespace {

std::size_t distinct_cells(std::vector<CellIndex>& cells) {
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

template <class Body>
void parallel_for(std::size_t count, const Exec& exec, Body&& body) {
  if (!exec.parallel || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const int threads = resolved_threads(exec);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(affdim_verify_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

KappaReport kappa_condition(const System& system, const std::vector<double>& deltas, const KappaOptions& opts) {
  if (deltas.empty()) throw DomainError("kappa_condition: no delta values given");
  const NormalizedSystem ns = normalize(system);
  const System& s = ns.system;
  const Vector origin = s.ball.corner();
  const int n = s.ifs.dim();

  KappaReport report;
  report.kappa_floor = 1.0;
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("kappa_condition: delta must lie in (0, 1]");
    const StoppingSet stop = stopping_set(s.ifs, n, delta, opts.word_budget, opts.exec);

    // discretize(C, 2^-L) for the dyadic levels the words need, so S_w(C) is sampled at spacing ≤ δ/2.
    std::vector<int> level_of(stop.words.size());
    std::map<int, std::vector<Vector>> levels;
    std::vector<AffineMap> maps(stop.words.size());
    for (std::size_t i = 0; i < stop.words.size(); ++i) {
      maps[i] = compose_word(s.ifs, stop.words[i]);
      const double a1 = singular_values(maps[i].linear()).largest();
      level_of[i] = static_cast<int>(std::ceil(-std::log2(delta / a1)));
      levels.try_emplace(level_of[i]);
    }
    for (auto& [level, pts] : levels) pts = s.condensation.discretize(std::ldexp(1.0, -level));

    std::vector<double> ratios(stop.words.size());
    parallel_for(stop.words.size(), opts.exec, [&](std::size_t i) {
      std::vector<CellIndex> c_cells;
      for (const auto& p : levels.at(level_of[i])) c_cells.push_back(cell_of(maps[i](p), origin, delta));
      std::vector<CellIndex> x_cells = c_cells;
      for (const auto& p : ellipsoid_samples(maps[i], s.ball, delta)) x_cells.push_back(cell_of(p, origin, delta));
      const std::size_t nc = distinct_cells(c_cells);
      const std::size_t nx = distinct_cells(x_cells);
      ratios[i] = static_cast<double>(nc) / static_cast<double>(nx);
    });

    KappaSample sample;
    sample.delta = delta;
    sample.words = stop.words.size();
    const auto it = std::min_element(ratios.begin(), ratios.end());
    sample.min_ratio = *it;
    sample.argmin = stop.words[static_cast<std::size_t>(it - ratios.begin())];
    report.kappa_floor = std::min(report.kappa_floor, sample.min_ratio);
    report.per_delta.push_back(std::move(sample));
  }
  return report;
}

// --- projections ----------------------------------------------------------------

ProjectionReport projection_measure(const CondensationSet& c, int angles, double delta_proj, const Exec& exec) {
  if (c.dim() != 2) throw Unsupported("projection measure is implemented for planar sets only");
  if (angles < 4) throw DomainError("projection measure needs at least 4 angles");
  if (!(delta_proj > 0.0)) throw DomainError("projection delta must be positive");
  const auto points = c.discretize(delta_proj);

  ProjectionReport report;
  report.per_angle.resize(static_cast<std::size_t>(angles));
  parallel_for(static_cast<std::size_t>(angles), exec, [&](std::size_t k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(angles);
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);
    std::vector<double> t(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) t[i] = points[i][0] * ux + points[i][1] * uy;
    std::sort(t.begin(), t.end());
    const double h = 0.5 * delta_proj;
    double total = 0.0;
    double lo = t.front() - h;
    double hi = t.front() + h;
    for (double v : t) {
      if (v - h > hi) {
        total += hi - lo;
        lo = v - h;
      }
      hi = std::max(hi, v + h);
    }
    total += hi - lo;
    report.per_angle[k] = {theta, total};
  });

  const auto it = std::min_element(report.per_angle.begin(), report.per_angle.end(),
                                   [](const auto& a, const auto& b) { return a.measure < b.measure; });
  report.min_measure = it->measure;
  report.argmin_angle = it->angle;
  return report;
}

double projection_measure_min(const CondensationSet& c, int angles) { return projection_measure(c, angles).min_measure; }

// --- COSC -------------------------------------------------------------------------

namespace {

constexpr double kCornerTol = 1e-9;
constexpr double kCoscDelta = 1e-3;

using Quad = std::array<Vector, 4>;

Quad rect_corners(const Rect& u) {
  return {Vector{u.lo[0], u.lo[1]}, Vector{u.hi[0], u.lo[1]}, Vector{u.hi[0], u.hi[1]}, Vector{u.lo[0], u.hi[1]}};
}

Quad image(const AffineMap& m, const Quad& q) { return {m(q[0]), m(q[1]), m(q[2]), m(q[3])}; }

std::pair<double, double> project(const Quad& q, const Vector& axis) {
  double lo = dot(q[0], axis);
  double hi = lo;
  for (const auto& p : q) {
    lo = std::min(lo, dot(p, axis));
    hi = std::max(hi, dot(p, axis));
  }
  return {lo, hi};
}

// Open convex quads are disjoint iff some edge normal separates them, touching included.
bool separated(const Quad& a, const Quad& b, double tol) {
  for (const Quad* q : {&a, &b}) {
    for (std::size_t e = 0; e < 4; ++e) {
      const Vector d = (*q)[(e + 1) % 4] - (*q)[e];
      const double len = d.norm();
      if (len == 0.0) continue;
      const Vector axis{-d[1] / len, d[0] / len};
      const auto [alo, ahi] = project(a, axis);
      const auto [blo, bhi] = project(b, axis);
      if (ahi <= blo + tol || bhi <= alo + tol) return true;
    }
  }
  return false;
}

double segment_distance(const Vector& p, const Vector& a, const Vector& b) {
  const Vector d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * d);
}

// Closed convex quad membership; corners in either orientation.
bool in_closed_quad(const Vector& p, const Quad& q, double tol) {
  int sign = 0;
  for (std::size_t e = 0; e < 4; ++e) {
    const Vector d = q[(e + 1) % 4] - q[e];
    const Vector r = p - q[e];
    const double cross = d[0] * r[1] - d[1] * r[0];
    const double scaled_tol = tol * std::max(1.0, d.norm());
    if (std::abs(cross) <= scaled_tol) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

double quad_distance(const Vector& p, const Quad& q) {
  double d = segment_distance(p, q[0], q[1]);
  for (std::size_t e = 1; e < 4; ++e) d = std::min(d, segment_distance(p, q[e], q[(e + 1) % 4]));
  return d;
}

}  // namespace

const char* clause_name(CoscClause clause) {
  switch (clause) {
    case CoscClause::none:
      return "none";
    case CoscClause::a:
      return "a";
    case CoscClause::b:
      return "b";
    case CoscClause::c:
      return "c";
  }
  return "?";
}

CoscResult cosc_check_rect(const Ifs& ifs, const CondensationSet& c, const Rect& u) {
  if (ifs.dim() != 2 || c.dim() != 2 || u.lo.dim() != 2 || u.hi.dim() != 2) {
    throw Unsupported("COSC check is implemented for planar systems with a rectangular U only");
  }
  if (!(u.lo[0] < u.hi[0] && u.lo[1] < u.hi[1])) throw DomainError("COSC rectangle must have lo < hi in each axis");

  const double scale = std::max(u.hi[0] - u.lo[0], u.hi[1] - u.lo[1]);
  const double tol = kCornerTol * std::max(1.0, scale);
  const Quad corners = rect_corners(u);
  std::vector<Quad> images;
  for (const auto& m : ifs.maps()) images.push_back(image(m, corners));

  CoscResult r;
  char buf[160];
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const auto& p : images[i]) {
      if (p[0] < u.lo[0] - tol || p[0] > u.hi[0] + tol || p[1] < u.lo[1] - tol || p[1] > u.hi[1] + tol) {
        r.clause = CoscClause::a;
        r.map_i = i;
        r.point = p;
        std::snprintf(buf, sizeof buf, "S_%zu(U) leaves U at corner (%.17g, %.17g)", i + 1, p[0], p[1]);
        r.message = buf;
        return r;
      }
    }
  }

  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if (!separated(images[i], images[j], tol)) {
        r.clause = CoscClause::b;
        r.map_i = i;
        r.map_j = j;
        std::snprintf(buf, sizeof buf, "S_%zu(U) and S_%zu(U) overlap", i + 1, j + 1);
        r.message = buf;
        return r;
      }
    }
  }

  double min_dist = std::numeric_limits<double>::infinity();
  for (const auto& p : c.discretize(kCoscDelta * scale)) {
    if (!(p[0] > u.lo[0] && p[0] < u.hi[0] && p[1] > u.lo[1] && p[1] < u.hi[1])) {
      r.clause = CoscClause::c;
      r.point = p;
      std::snprintf(buf, sizeof buf, "C point (%.17g, %.17g) is not inside U", p[0], p[1]);
      r.message = buf;
      return r;
    }
    min_dist = std::min(min_dist, quad_distance(p, corners));
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (in_closed_quad(p, images[i], tol)) {
        r.clause = CoscClause::c;
        r.map_i = i;
        r.point = p;
        std::snprintf(buf, sizeof buf, "C point (%.17g, %.17g) lies in the closure of S_%zu(U)", p[0], p[1], i + 1);
        r.message = buf;
        return r;
      }
      min_dist = std::min(min_dist, quad_distance(p, images[i]));
    }
  }

  r.holds = true;
  r.eta = 0.5 * min_dist;
  r.message = "COSC holds for the given rectangle";
  return r;
}

}  // namespace affdim
