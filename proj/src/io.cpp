#include "affdim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "affdim/error.hpp"

namespace affdim {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string points_csv(const std::vector<Vector>& points) {
  const int n = points.empty() ? 2 : points.front().dim();
  static const char* names[] = {"x", "y", "z", "w"};
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '\n';
  for (const auto& p : points) {
    for (int i = 0; i < p.dim(); ++i) {
      if (i) out += ',';
      out += format_g17(p[i]);
    }
    out += '\n';
  }
  return out;
}

std::string count_curve_csv(const CountCurve& curve) {
  std::string out = "j,delta,count\n";
  for (const auto& s : curve.samples) {
    out += std::to_string(s.j) + ',' + format_g17(s.delta) + ',' + std::to_string(s.count) + '\n';
  }
  return out;
}

std::string raster_pgm(const RasterGrid& grid) {
  if (grid.dim() != 2) throw Unsupported("PGM output is available for planar rasters only");
  const int j = static_cast<int>(std::lround(-std::log2(grid.delta())));
  if (std::ldexp(1.0, -j) != grid.delta() || j < 0 || j > 14) {
    throw DomainError("PGM output needs delta = 2^-j with 0 <= j <= 14");
  }
  const std::size_t side = std::size_t{1} << j;
  std::vector<unsigned char> pixels(side * side, 0);
  const auto clamp = [side](std::int32_t v) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(v, 0, static_cast<std::int64_t>(side) - 1));
  };
  for (const auto& c : grid.cells()) {
    const std::size_t col = clamp(c[0]);
    const std::size_t row = side - 1 - clamp(c[1]);
    pixels[row * side + col] = 255;
  }
  std::string out = "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  out.append(pixels.begin(), pixels.end());
  return out;
}

void Report::add(const std::string& key, double value) { add(key, format_g17(value)); }

void Report::add_estimate(const std::string& prefix, const DimEstimate& est) {
  add(prefix + ".ols_slope", est.ols_slope);
  add(prefix + ".upper_proxy", est.upper_proxy);
  add(prefix + ".lower_proxy", est.lower_proxy);
  add(prefix + ".window", std::to_string(est.window.lo) + ":" + std::to_string(est.window.hi));
}

std::string Report::text() const {
  std::string out;
  for (const auto& [k, v] : lines_) out += k + " = " + v + '\n';
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace affdim
