#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "affdim/condensation.hpp"
#include "affdim/ifs.hpp"
#include "affdim/linalg.hpp"

namespace testsupport {

using namespace affdim;

inline std::string config_path(const std::string& name) { return std::string(AFFDIM_CONFIG_DIR) + "/" + name; }

inline Ifs example_ifs() {
  return Ifs({AffineMap(Matrix{{0.5, 0.0}, {0.5, 0.5}}, Vector{0.0, 0.0}),
              AffineMap(Matrix{{0.5, 0.5}, {0.0, 0.5}}, Vector{0.0, 0.0})});
}

inline CondensationSet example_circle(double cx = 0.75, double cy = 0.75) {
  return CondensationSet(2, {Circle{Vector{cx, cy}, 0.2}});
}

inline Ifs similarity3() {
  const Matrix h{{0.5, 0.0}, {0.0, 0.5}};
  return Ifs({AffineMap(h, Vector{0.0, 0.0}), AffineMap(h, Vector{0.5, 0.0}), AffineMap(h, Vector{0.0, 0.5})});
}

inline Ifs square_tiling() {
  const Matrix h{{0.5, 0.0}, {0.0, 0.5}};
  return Ifs({AffineMap(h, Vector{0.0, 0.0}), AffineMap(h, Vector{0.5, 0.0}), AffineMap(h, Vector{0.0, 0.5}),
              AffineMap(h, Vector{0.5, 0.5})});
}

inline Matrix random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = u(rng);
  return m;
}

/// Random invertible matrix with alpha_1 <= a1_max and alpha_n >= an_min (rejection sampling).
inline Matrix random_contraction(std::mt19937_64& rng, int n, double a1_max, double an_min) {
  while (true) {
    Matrix m = random_matrix(rng, n, a1_max);
    if (std::abs(m.determinant()) < 1e-6) continue;
    const auto s = singular_values(m);
    if (s.largest() <= a1_max && s.smallest() >= an_min) return m;
  }
}

inline Ifs random_ifs(std::mt19937_64& rng, int n, std::size_t maps, double a1_max, double an_min) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<AffineMap> out;
  for (std::size_t i = 0; i < maps; ++i) {
    Vector t(n);
    for (int k = 0; k < n; ++k) t[k] = u(rng);
    out.emplace_back(random_contraction(rng, n, a1_max, an_min), t);
  }
  return Ifs(std::move(out));
}

/// Singular values of a 2x2 matrix from the eigenvalues of A A^T by the quadratic formula.
inline std::pair<double, double> svd2_oracle(const Matrix& a) {
  const double p = a(0, 0) * a(0, 0) + a(0, 1) * a(0, 1);
  const double q = a(0, 0) * a(1, 0) + a(0, 1) * a(1, 1);
  const double r = a(1, 0) * a(1, 0) + a(1, 1) * a(1, 1);
  const double tr = p + r;
  const double disc = std::sqrt((p - r) * (p - r) + 4.0 * q * q);
  const double l1 = 0.5 * (tr + disc);
  const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
  const double s1 = std::sqrt(l1);
  return {s1, det / s1};
}

inline double frobenius2(const Matrix& a) {
  double s = 0.0;
  for (int r = 0; r < a.dim(); ++r)
    for (int c = 0; c < a.dim(); ++c) s += a(r, c) * a(r, c);
  return s;
}

}  // namespace testsupport
