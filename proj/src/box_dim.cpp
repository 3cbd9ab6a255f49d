#include "affdim/box_dim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "affdim/error.hpp"

namespace affdim {

void check_count_curve(const CountCurve& curve) {
  const double fanout = std::ldexp(1.0, curve.dim);
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& s = curve.samples[i];
    if (s.count == 0) throw InvariantViolation("count curve: zero count at j = " + std::to_string(s.j));
    if (i == 0) continue;
    const auto& prev = curve.samples[i - 1];
    if (s.j != prev.j + 1) throw InvariantViolation("count curve: scales must be consecutive");
    if (s.count < prev.count) {
      throw InvariantViolation("count curve: count decreased from j = " + std::to_string(prev.j) + " (" +
                               std::to_string(prev.count) + ") to j = " + std::to_string(s.j) + " (" +
                               std::to_string(s.count) + ")");
    }
    if (static_cast<double>(s.count) > fanout * static_cast<double>(prev.count)) {
      throw InvariantViolation("count curve: count at j = " + std::to_string(s.j) + " exceeds 2^n times the count at j = " +
                               std::to_string(prev.j));
    }
  }
}

CountCurve count_curve(const std::function<RasterGrid(double)>& generator, int j_min, int j_max) {
  if (j_min < 1 || j_max < j_min) throw DomainError("count_curve: need 1 <= j_min <= j_max");
  CountCurve curve;
  for (int j = j_min; j <= j_max; ++j) {
    const double delta = std::ldexp(1.0, -j);
    const RasterGrid grid = generator(delta);
    curve.dim = grid.dim();
    curve.samples.push_back({j, delta, grid.count()});
  }
  check_count_curve(curve);
  return curve;
}

CountCurve coarsened_count_curve(const RasterGrid& finest, int j_min, int j_max) {
  if (j_min < 1 || j_max < j_min) throw DomainError("coarsened_count_curve: need 1 <= j_min <= j_max");
  if (finest.delta() != std::ldexp(1.0, -j_max)) throw DomainError("coarsened_count_curve: finest delta must be 2^-j_max");
  CountCurve curve;
  curve.dim = finest.dim();
  std::vector<CellIndex> cells = finest.cells();
  std::vector<CountSample> rev;
  for (int j = j_max; j >= j_min; --j) {
    rev.push_back({j, std::ldexp(1.0, -j), cells.size()});
    for (auto& c : cells) {
      for (auto& x : c) x = static_cast<std::int32_t>(std::floor(x / 2.0));
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }
  curve.samples.assign(rev.rbegin(), rev.rend());
  check_count_curve(curve);
  return curve;
}

ScaleWindow default_window(const CountCurve& curve) {
  const int lo = curve.samples.front().j;
  const int hi = curve.samples.back().j;
  const int span = hi - lo + 1;
  return {std::min(hi - 1, lo + span / 2), hi};
}

DimEstimate estimate_dims(const CountCurve& curve, std::optional<ScaleWindow> window) {
  if (curve.samples.size() < 4) throw DomainError("estimate_dims: need at least 4 samples");
  const ScaleWindow w = window ? *window : default_window(curve);
  const int first = curve.samples.front().j;
  const int last = curve.samples.back().j;
  if (w.lo < first || w.hi > last || w.hi - w.lo < 1) {
    throw DomainError("estimate_dims: window " + std::to_string(w.lo) + ":" + std::to_string(w.hi) +
                      " not inside the sampled range " + std::to_string(first) + ":" + std::to_string(last));
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : curve.samples) {
    if (s.j < w.lo || s.j > w.hi) continue;
    xs.push_back(s.j);
    ys.push_back(std::log2(static_cast<double>(s.count)));
  }
  const auto m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }

  DimEstimate est;
  est.window = w;
  est.ols_slope = sxy / sxx;
  for (std::size_t i = 1; i < ys.size(); ++i) est.pair_slopes.push_back(ys[i] - ys[i - 1]);
  est.upper_proxy = *std::max_element(est.pair_slopes.begin(), est.pair_slopes.end());
  est.lower_proxy = *std::min_element(est.pair_slopes.begin(), est.pair_slopes.end());
  // The OLS slope on equispaced abscissae is a convex combination of the pair slopes;
  // clamp away the last-ulp disagreement.
  est.ols_slope = std::clamp(est.ols_slope, est.lower_proxy, est.upper_proxy);
  return est;
}

Target parse_target(const std::string& text) {
  if (text == "C") return Target::C;
  if (text == "F0") return Target::F0;
  if (text == "FC") return Target::FC;
  throw DomainError("target must be one of C, F0, FC; got '" + text + "'");
}

const char* target_name(Target t) {
  switch (t) {
    case Target::C:
      return "C";
    case Target::F0:
      return "F0";
    case Target::FC:
      return "FC";
  }
  return "?";
}

PointRaster target_raster(const System& system, Target target, double delta, const GenOptions& opts) {
  switch (target) {
    case Target::C: {
      const auto points = system.condensation.discretize(delta);
      const RasterGrid grid = rasterize(points, delta, system.ball);
      // Representatives are not needed for C beyond occupancy; keep one point per cell for CSV output.
      std::vector<Vector> reps(grid.count());
      std::vector<bool> set(grid.count(), false);
      for (const auto& p : points) {
        const auto c = cell_of(p, grid.origin(), delta);
        const auto it = std::lower_bound(grid.cells().begin(), grid.cells().end(), c);
        const auto i = static_cast<std::size_t>(it - grid.cells().begin());
        if (!set[i] || lex_less(p, reps[i])) {
          reps[i] = p;
          set[i] = true;
        }
      }
      return {grid, std::move(reps)};
    }
    case Target::F0:
      return homogeneous(system.ifs, system.ball, delta, default_anchor(system.ifs), opts);
    case Target::FC:
      return inhomogeneous(system, delta, default_anchor(system.ifs), opts);
  }
  throw DomainError("unknown target");
}

CountCurve target_curve(const System& system, Target target, int j_min, int j_max, const GenOptions& opts) {
  if (j_min < 1 || j_max < j_min) throw DomainError("need 1 <= j_min <= j_max");
  // Sampling at spacing δ/2 misses cells a set only clips at a corner, so every reported scale
  // is coarsened from a raster kOversampleLevels finer.
  const int j_fine = j_max + kOversampleLevels;
  const auto raster = target_raster(system, target, std::ldexp(1.0, -j_fine), opts);
  CountCurve fine = coarsened_count_curve(raster.grid, j_min, j_fine);
  fine.samples.resize(static_cast<std::size_t>(j_max - j_min + 1));
  return fine;
}

ScaleWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  ScaleWindow w;
  if (colon == std::string::npos) throw DomainError("window must be written jlo:jhi, got '" + text + "'");
  const char* b = text.data();
  const char* e = b + text.size();
  auto r1 = std::from_chars(b, b + colon, w.lo);
  auto r2 = std::from_chars(b + colon + 1, e, w.hi);
  if (r1.ec != std::errc{} || r1.ptr != b + colon || r2.ec != std::errc{} || r2.ptr != e || w.hi <= w.lo) {
    throw DomainError("window must be written jlo:jhi with jlo < jhi, got '" + text + "'");
  }
  return w;
}

}  // namespace affdim
