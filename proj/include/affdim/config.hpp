#pragma once

// Run configuration: a line-oriented `key = value` format with `[section]` headers.
//
//   [system]       dim = 2
//   [map]          linear = [[1/2, 0], [1/2, 1/2]]       (one section per map, in order)
//                  translation = [0, 0]
//   [condensation] circle = [3/4, 3/4], 1/5               (keys repeatable, one primitive each)
//                  segment = [0, 0], [1, 0]
//                  polygon = [[0, 0], [1, 0], [0, 1]]
//                  points = [[0.5, 0.5]]
//   [ball]         center = [0.5, 0.5]   radius = 1       (optional)
//   [budgets]      kmax, leaves, words
//   [scales]       jmin, jmax, window = 8:11
//   [tolerances]   sandwich, kappa, projection
//   [cosc]         rect = [[0, 1], [0, 1]]                (x-range, y-range)
//   [kappa]        jmin, jmax
//   [run]          seed
//
// Numbers are decimals or exact rationals p/q. `#` starts a comment.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affdim/affinity.hpp"
#include "affdim/box_dim.hpp"
#include "affdim/condensation.hpp"
#include "affdim/ifs.hpp"
#include "affdim/verify.hpp"

namespace affdim {

struct RunConfig {
  int dim = 2;
  std::vector<AffineMap> maps;
  std::vector<Primitive> condensation;
  std::optional<BoundingBall> ball;

  int k_max = 12;
  std::uint64_t leaf_budget = kDefaultLeafBudget;
  std::uint64_t word_budget = kDefaultWordBudget;

  int j_min = 4;
  int j_max = 11;
  std::optional<ScaleWindow> window;

  double sandwich_tol = 0.1;
  double kappa_min = 0.01;
  double projection_min = 1e-3;

  std::optional<Rect> cosc_rect;
  int kappa_j_min = 4;
  int kappa_j_max = 10;

  std::uint64_t seed = 0;

  Ifs ifs() const;
  CondensationSet condensation_set() const;
  System system() const;
};

/// Parses and validates. Throws ConfigError: syntax errors carry the 1-based line, semantic
/// errors the key path (for example "map[2].linear").
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

/// Field-by-field equality, with exact floating-point comparison.
bool same_config(const RunConfig& a, const RunConfig& b);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace affdim
