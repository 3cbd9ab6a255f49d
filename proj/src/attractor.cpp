#include "affdim/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <unordered_map>

#include <omp.h>

#include "affdim/error.hpp"
#include "word_tree.hpp"

namespace affdim {

namespace {

constexpr std::int64_t kKeyOffset = std::int64_t{1} << 20;
constexpr int kKeyBits = 21;
constexpr std::size_t kFrontierChunk = 1024;

std::uint64_t pack(const CellIndex& c) {
  std::uint64_t key = 0;
  for (int i = 0; i < 3; ++i) {
    const std::int64_t v = c[static_cast<std::size_t>(i)] + kKeyOffset;
    if (v < 0 || v >= (std::int64_t{1} << kKeyBits)) {
      throw DomainError("grid index out of range; delta too small for the raster key space");
    }
    key = (key << kKeyBits) | static_cast<std::uint64_t>(v);
  }
  return key;
}

CellIndex unpack(std::uint64_t key) {
  CellIndex c{};
  const std::uint64_t mask = (std::uint64_t{1} << kKeyBits) - 1;
  for (int i = 2; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(static_cast<std::int64_t>(key & mask) - kKeyOffset);
    key >>= kKeyBits;
  }
  return c;
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
}

void check_raster_dim(int n) {
  if (n > 3) throw Unsupported("rasters support n <= 3");
}

// Cell → representative point, with lexicographic-minimum resolution of collisions.
class CellMap {
 public:
  CellMap(const BoundingBall* ball, double delta) : ball_(ball), delta_(delta), origin_(ball->corner()) {}

  void add(const Vector& p) {
    if (!ball_->contains(p, delta_)) {
      throw InvariantViolation("generated point " + to_string(p) + " lies outside the bounding ball");
    }
    const auto key = pack(cell_of(p, origin_, delta_));
    auto [it, inserted] = cells_.try_emplace(key, p);
    if (!inserted && lex_less(p, it->second)) it->second = p;
  }

  bool has_cell(const Vector& p) const { return cells_.count(pack(cell_of(p, origin_, delta_))) != 0; }

  void merge(CellMap&& other) {
    if (cells_.size() < other.cells_.size()) std::swap(cells_, other.cells_);
    for (auto& [key, p] : other.cells_) {
      auto [it, inserted] = cells_.try_emplace(key, p);
      if (!inserted && lex_less(p, it->second)) it->second = p;
    }
    other.cells_.clear();
  }

  PointRaster finish() && {
    std::vector<std::pair<CellIndex, Vector>> items;
    items.reserve(cells_.size());
    for (auto& [key, p] : cells_) items.emplace_back(unpack(key), p);
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<CellIndex> cells;
    std::vector<Vector> points;
    cells.reserve(items.size());
    points.reserve(items.size());
    for (auto& [c, p] : items) {
      cells.push_back(c);
      points.push_back(p);
    }
    return {RasterGrid(ball_->center.dim(), delta_, origin_, std::move(cells)), std::move(points)};
  }

 private:
  const BoundingBall* ball_;
  double delta_;
  Vector origin_;
  std::unordered_map<std::uint64_t, Vector> cells_;
};

// discretize(C, 2^-L) for every level L in [lo, hi]; images under S_w use the level whose
// preimage spacing brings the image spacing under δ/2.
class CondensationLevels {
 public:
  CondensationLevels(const CondensationSet& c, double delta, double diameter) {
    lo_ = std::min(0, static_cast<int>(std::floor(-std::log2(diameter))) - 1);
    hi_ = static_cast<int>(std::ceil(-std::log2(delta))) + 1;
    for (int level = lo_; level <= hi_; ++level) levels_.push_back(c.discretize(std::ldexp(1.0, -level)));
  }

  /// Discretisation with parameter ≤ eps (spacing ≤ eps/2).
  const std::vector<Vector>& at_most(double eps) const {
    int level = static_cast<int>(std::ceil(-std::log2(eps)));
    level = std::clamp(level, lo_, hi_);
    return levels_[static_cast<std::size_t>(level - lo_)];
  }

 private:
  int lo_ = 0;
  int hi_ = 0;
  std::vector<std::vector<Vector>> levels_;
};

struct OrbitalVisitor {
  const BoundingBall* ball;
  const CondensationLevels* levels;
  double delta;
  CellMap cells;

  bool visit(const detail::WordNode& node, std::span<const Word::Letter>) {
    const auto spec = singular_values(node.map.linear());
    if (spec.smallest() * ball->diameter() < delta) {
      for (const auto& p : ellipsoid_samples(node.map, *ball, delta)) cells.add(p);
      return false;
    }
    for (const auto& p : levels->at_most(delta / spec.largest())) cells.add(node.map(p));
    return true;
  }
  void merge(OrbitalVisitor&& later) { cells.merge(std::move(later.cells)); }
};

}  // namespace

// --- RasterGrid ---------------------------------------------------------------

RasterGrid::RasterGrid(int dim, double delta, Vector origin, std::vector<CellIndex> cells)
    : dim_(dim), delta_(delta), origin_(std::move(origin)), cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

bool RasterGrid::contains(const CellIndex& c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

bool RasterGrid::subset_of(const RasterGrid& other) const {
  if (dim_ != other.dim_ || delta_ != other.delta_ || !(origin_ == other.origin_)) {
    throw DomainError("subset_of: grids differ in dimension, delta or origin");
  }
  return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
}

CellIndex cell_of(const Vector& p, const Vector& origin, double delta) {
  CellIndex c{};
  for (int i = 0; i < p.dim() && i < 3; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(std::floor((p[i] - origin[i]) / delta));
  }
  return c;
}

RasterGrid rasterize(std::span<const Vector> points, double delta, const BoundingBall& ball) {
  if (!(delta > 0.0)) throw DomainError("rasterize: delta must be positive");
  check_raster_dim(ball.center.dim());
  CellMap cells(&ball, delta);
  for (const auto& p : points) cells.add(p);
  return std::move(cells).finish().grid;
}

std::vector<Vector> ellipsoid_samples(const AffineMap& map, const BoundingBall& ball, double delta) {
  const int n = map.dim();
  const auto frame = singular_frame(map.linear());
  const Vector center = map(ball.center);
  std::array<int, kMaxDim> steps{};
  std::array<double, kMaxDim> half_axis{};
  for (int j = 0; j < n; ++j) {
    half_axis[static_cast<std::size_t>(j)] = frame.spectrum.alpha(j + 1) * ball.radius;
    steps[static_cast<std::size_t>(j)] =
        std::max(1, static_cast<int>(std::ceil(half_axis[static_cast<std::size_t>(j)] / (0.5 * delta))));
  }

  std::vector<Vector> out;
  std::array<int, kMaxDim> idx{};
  for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = -steps[static_cast<std::size_t>(j)];
  while (true) {
    double r2 = 0.0;
    Vector p = center;
    for (int j = 0; j < n; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double t = static_cast<double>(idx[js]) / static_cast<double>(steps[js]);
      r2 += t * t;
      p = p + (t * half_axis[js]) * frame.left.column(j);
    }
    if (r2 <= 1.0 + 1e-12) out.push_back(p);

    int j = 0;
    while (j < n) {
      const auto js = static_cast<std::size_t>(j);
      if (++idx[js] <= steps[js]) break;
      idx[js] = -steps[js];
      ++j;
    }
    if (j == n) break;
  }
  return out;
}

Vector default_anchor(const Ifs& ifs) { return ifs.map(0).fixed_point(); }

PointRaster homogeneous(const Ifs& ifs, const BoundingBall& ball, double delta, const Vector& anchor,
                        const GenOptions& opts) {
  check_delta(delta);
  check_raster_dim(ifs.dim());
  if (!ball.contains(anchor, 1e-12 * std::max(1.0, ball.radius))) throw DomainError("anchor must lie in the bounding ball");
  detail::NodeBudget budget(opts.word_budget);
  const std::size_t n_maps = ifs.size();

  CellMap seen(&ball, delta);
  seen.add(anchor);
  std::vector<Vector> frontier{anchor};
  while (!frontier.empty()) {
    budget.charge(frontier.size() * n_maps);
    // Images of the frontier whose cells are new; each chunk keeps its own lexicographic minima.
    const std::size_t chunks = (frontier.size() + kFrontierChunk - 1) / kFrontierChunk;
    std::vector<CellMap> found(chunks, CellMap(&ball, delta));
    auto expand = [&](std::size_t c) {
      const std::size_t lo = c * kFrontierChunk;
      const std::size_t hi = std::min(frontier.size(), lo + kFrontierChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t m = 0; m < n_maps; ++m) {
          const Vector q = ifs.map(m)(frontier[i]);
          if (!seen.has_cell(q)) found[c].add(q);
        }
      }
    };
    if (opts.exec.parallel && chunks > 1) {
      const int threads = resolved_threads(opts.exec);
      std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
      for (std::size_t c = 0; c < chunks; ++c) {
        try {
          expand(c);
        } catch (...) {
#pragma omp critical(affdim_homogeneous_error)
          if (!error) error = std::current_exception();
        }
      }
      if (error) std::rethrow_exception(error);
    } else {
      for (std::size_t c = 0; c < chunks; ++c) expand(c);
    }
    for (std::size_t c = 1; c < chunks; ++c) found[0].merge(std::move(found[c]));
    frontier = chunks == 0 ? std::vector<Vector>{} : std::move(found[0]).finish().points;
    for (const auto& p : frontier) seen.add(p);
  }
  return std::move(seen).finish();
}

PointRaster orbital(const System& system, double delta, const GenOptions& opts) {
  check_delta(delta);
  check_raster_dim(system.ifs.dim());
  const BoundingBall& ball = system.ball;
  const CondensationLevels levels(system.condensation, delta, ball.diameter());

  detail::NodeBudget budget(opts.word_budget);
  auto make = [&] { return OrbitalVisitor{&ball, &levels, delta, CellMap(&ball, delta)}; };
  auto v = detail::walk<OrbitalVisitor>(system.ifs, make, budget, opts.exec);
  for (const auto& p : levels.at_most(delta)) v.cells.add(p);
  return std::move(v.cells).finish();
}

PointRaster inhomogeneous(const System& system, double delta, const Vector& anchor, const GenOptions& opts) {
  auto hom = homogeneous(system.ifs, system.ball, delta, anchor, opts);
  auto orb = orbital(system, delta, opts);
  CellMap cells(&system.ball, delta);
  for (const auto& p : hom.points) cells.add(p);
  for (const auto& p : orb.points) cells.add(p);
  return std::move(cells).finish();
}

std::vector<Vector> homogeneous_points(const Ifs& ifs, const BoundingBall& ball, double delta, const Vector& anchor,
                                       const GenOptions& opts) {
  return homogeneous(ifs, ball, delta, anchor, opts).points;
}

std::vector<Vector> orbital_points(const System& system, double delta, const GenOptions& opts) {
  return orbital(system, delta, opts).points;
}

std::vector<Vector> inhomogeneous_points(const System& system, double delta, const Vector& anchor,
                                         const GenOptions& opts) {
  return inhomogeneous(system, delta, anchor, opts).points;
}

}  // namespace affdim
