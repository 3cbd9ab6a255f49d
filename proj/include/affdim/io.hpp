#pragma once

// Artifact writers: CSV tables (header row, LF endings), binary PGM rasters and flat
// `key = value` reports.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "affdim/attractor.hpp"
#include "affdim/box_dim.hpp"

namespace affdim {

/// Decimal text with 17 significant digits.
std::string format_g17(double x);

/// "x,y[,z]" rows, one per point.
std::string points_csv(const std::vector<Vector>& points);
/// "j,delta,count" rows.
std::string count_curve_csv(const CountCurve& curve);

/// P5 image of a planar raster on the normalized unit square: side 2^j pixels for δ = 2^-j,
/// 255 for occupied cells, 0 otherwise, row 0 at the top (largest y).
/// Throws Unsupported unless dim = 2 and DomainError unless δ is a power of two ≥ 2^-14.
std::string raster_pgm(const RasterGrid& grid);

/// Ordered `key = value` lines.
class Report {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, double value);
  void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add_bool(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add_estimate(const std::string& prefix, const DimEstimate& est);

  std::string text() const;
  const std::vector<std::pair<std::string, std::string>>& lines() const noexcept { return lines_; }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

/// Writes `content` byte-for-byte; throws Error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace affdim
