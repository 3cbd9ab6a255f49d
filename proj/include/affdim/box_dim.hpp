#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "affdim/attractor.hpp"

namespace affdim {

struct CountSample {
  int j = 0;
  double delta = 0.0;  // 2^-j
  std::uint64_t count = 0;
};

/// Box counts at dyadic scales δ_j = 2^-j, j increasing.
struct CountCurve {
  int dim = 0;
  std::vector<CountSample> samples;
};

/// Throws InvariantViolation unless counts are positive, j is consecutive and increasing,
/// and count_j ≤ count_{j+1} ≤ 2^n · count_j.
void check_count_curve(const CountCurve& curve);

/// Calls `generator(2^-j)` for j = j_min..j_max and records the occupied-cell counts.
/// Throws DomainError for j_min < 1 or j_max < j_min; invariants are enforced via check_count_curve.
CountCurve count_curve(const std::function<RasterGrid(double)>& generator, int j_min, int j_max);

/// Counts at coarser dyadic scales derived from one fine raster by merging 2^n children per parent.
/// `finest` must have δ = 2^-j_max; returns j = j_min..j_max. The invariants hold by construction.
CountCurve coarsened_count_curve(const RasterGrid& finest, int j_min, int j_max);

struct ScaleWindow {
  int lo = 0;
  int hi = 0;
};

/// Finite-scale proxies for box dimension. upper/lower are the extreme consecutive
/// two-point slopes inside the window; they are not the limsup/liminf themselves.
struct DimEstimate {
  double ols_slope = 0.0;
  double upper_proxy = 0.0;
  double lower_proxy = 0.0;
  ScaleWindow window;
  std::vector<double> pair_slopes;  // log2(count_{j+1}/count_j) for consecutive j in the window
};

/// OLS slope of log2(count) against j over the window (default: the upper half of the curve's
/// j-range, at least two samples). Throws DomainError with fewer than 4 samples or a window
/// not covered by the curve.
DimEstimate estimate_dims(const CountCurve& curve, std::optional<ScaleWindow> window = std::nullopt);

ScaleWindow default_window(const CountCurve& curve);

/// Which set a count curve describes.
enum class Target { C, F0, FC };

Target parse_target(const std::string& text);
const char* target_name(Target t);

/// Raster of the chosen set at scale δ. `system` must already be normalized (unit-diameter ball).
PointRaster target_raster(const System& system, Target target, double delta, const GenOptions& opts = {});

inline constexpr int kOversampleLevels = 2;

/// Count curve of the chosen set for j = j_min..j_max, coarsened from the raster at
/// δ = 2^-(j_max + kOversampleLevels).
CountCurve target_curve(const System& system, Target target, int j_min, int j_max, const GenOptions& opts = {});

/// Parses "jlo:jhi".
ScaleWindow parse_window(const std::string& text);

}  // namespace affdim
