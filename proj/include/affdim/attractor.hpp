#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "affdim/exec.hpp"
#include "affdim/ifs.hpp"

namespace affdim {

using CellIndex = std::array<std::int32_t, 3>;

/// Occupied cells of a uniform grid with side `delta` anchored at `origin`.
/// Cells are kept sorted and unique; unused trailing coordinates (n = 2) are zero.
class RasterGrid {
 public:
  RasterGrid(int dim, double delta, Vector origin, std::vector<CellIndex> cells);

  int dim() const noexcept { return dim_; }
  double delta() const noexcept { return delta_; }
  const Vector& origin() const noexcept { return origin_; }
  const std::vector<CellIndex>& cells() const noexcept { return cells_; }
  std::size_t count() const noexcept { return cells_.size(); }
  bool contains(const CellIndex& c) const;
  /// Cell-for-cell inclusion; grids must share delta, origin and dimension.
  bool subset_of(const RasterGrid& other) const;

  friend bool operator==(const RasterGrid&, const RasterGrid&) = default;

 private:
  int dim_;
  double delta_;
  Vector origin_;
  std::vector<CellIndex> cells_;
};

/// Grid occupancy plus one representative point per occupied cell (the lexicographically
/// smallest generated point in that cell, so the result is independent of traversal order).
struct PointRaster {
  RasterGrid grid;
  std::vector<Vector> points;  // points[i] lies in grid.cells()[i]
};

struct GenOptions {
  std::uint64_t word_budget = kDefaultWordBudget;
  Exec exec{};
};

/// Cell of `p` on the δ-grid anchored at `origin`: ⌊(p − origin)/δ⌋.
CellIndex cell_of(const Vector& p, const Vector& origin, double delta);

/// Occupancy of `points` on the δ-grid anchored at the ball's corner.
/// Throws InvariantViolation if a point lies outside the ball inflated by δ.
RasterGrid rasterize(std::span<const Vector> points, double delta, const BoundingBall& ball);

/// Points of S_w(X) at image spacing ≤ δ/2 along each principal axis of the ellipsoid.
std::vector<Vector> ellipsoid_samples(const AffineMap& map, const BoundingBall& ball, double delta);

/// Homogeneous attractor F_∅ as orbit points S_w(anchor). Starting from the anchor, every map is
/// applied to the representatives of newly occupied cells only, until no new cell appears.
/// All returned points lie in F_∅ when anchor ∈ F_∅, and F_∅ lies within √n·δ/(1 − max α_1)
/// of them. Requires δ ∈ (0, 1] and anchor ∈ X; `word_budget` caps the number of images formed.
PointRaster homogeneous(const Ifs& ifs, const BoundingBall& ball, double delta, const Vector& anchor,
                        const GenOptions& opts = {});

/// Orbital set 𝒪: C, then S_w(C) for every word with α_n(S_w)·diam X ≥ δ, and the whole
/// ellipsoid S_w(X) for each word of the n-δ-stopping (which contains all deeper images).
PointRaster orbital(const System& system, double delta, const GenOptions& opts = {});

/// F_C = F_∅ ∪ 𝒪 with the homogeneous part anchored at `anchor`.
PointRaster inhomogeneous(const System& system, double delta, const Vector& anchor, const GenOptions& opts = {});

/// Fixed point of S_1: a point of F_∅ and of X, the default anchor.
Vector default_anchor(const Ifs& ifs);

std::vector<Vector> homogeneous_points(const Ifs& ifs, const BoundingBall& ball, double delta, const Vector& anchor,
                                       const GenOptions& opts = {});
std::vector<Vector> orbital_points(const System& system, double delta, const GenOptions& opts = {});
std::vector<Vector> inhomogeneous_points(const System& system, double delta, const Vector& anchor,
                                         const GenOptions& opts = {});

}  // namespace affdim
