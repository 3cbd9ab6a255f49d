#pragma once

// Numerical falsification checks for the dimension sandwich, the κ-condition, the projection
// condition and the condensation open set condition. Each check evaluates finitely many scales
// or samples; a pass is evidence, not proof.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "affdim/affinity.hpp"
#include "affdim/attractor.hpp"
#include "affdim/box_dim.hpp"
#include "affdim/ifs.hpp"

namespace affdim {

struct BoundReport {
  DimEstimate dim_F0;
  DimEstimate dim_C;
  DimEstimate dim_FC;
  CountCurve curve_F0;
  CountCurve curve_C;
  CountCurve curve_FC;
  AffinityEstimate affinity;
  double s_upper = 0.0;
  bool lower_bound_ok = false;
  bool upper_bound_ok = false;
  double slack = 0.0;

  /// max(dim_F0, dim_C) ≤ dim_FC + slack
  static bool lower_ok(const DimEstimate& f0, const DimEstimate& c, const DimEstimate& fc, double slack);
  /// dim_FC ≤ max(s_upper, dim_C) + slack
  static bool upper_ok(const DimEstimate& c, const DimEstimate& fc, double s_upper, double slack);

  bool passed() const noexcept { return lower_bound_ok && upper_bound_ok; }
};

struct SandwichOptions {
  int j_min = 4;
  int j_max = 11;
  std::optional<ScaleWindow> window;
  double tol = 0.1;
  int k_max = 12;
  PressureOptions pressure{};
  GenOptions gen{};
};

/// Box-dimension estimates of F_∅, C and F_C (normalized coordinates) and the affinity upper
/// bound, compared with the given slack. Takes the system in its original coordinates.
BoundReport verify_sandwich(const System& system, const SandwichOptions& opts = {});

struct KappaSample {
  double delta = 0.0;
  double min_ratio = 0.0;
  Word argmin;           // stopping word attaining min_ratio
  std::size_t words = 0;  // |I_n(δ)|
};

struct KappaReport {
  std::vector<KappaSample> per_delta;  // in the order of the requested δ list
  double kappa_floor = 0.0;
};

struct KappaOptions {
  std::uint64_t word_budget = kDefaultWordBudget;
  Exec exec{};
};

/// For every δ and every word of the n-δ-stopping, the ratio of δ-cells hit by S_w(C) to those
/// hit by S_w(X), computed in normalized coordinates. Throws DomainError for δ ∉ (0, 1].
KappaReport kappa_condition(const System& system, const std::vector<double>& deltas, const KappaOptions& opts = {});

struct ProjectionSample {
  double angle = 0.0;  // radians in [0, π)
  double measure = 0.0;
};

struct ProjectionReport {
  std::vector<ProjectionSample> per_angle;
  double min_measure = 0.0;
  double argmin_angle = 0.0;
};

inline constexpr double kProjectionDelta = 1e-4;

/// Length of the union of width-δ_proj intervals around the projections of discretize(C, δ_proj)
/// onto the line at each of `angles` equispaced angles in [0, π). Planar sets only.
/// Throws Unsupported for n ≠ 2 and DomainError for fewer than 4 angles.
ProjectionReport projection_measure(const CondensationSet& c, int angles, double delta_proj = kProjectionDelta,
                                    const Exec& exec = {});

double projection_measure_min(const CondensationSet& c, int angles);

/// Open axis-aligned rectangle (lo, hi).
struct Rect {
  Vector lo;
  Vector hi;
};

enum class CoscClause { none, a, b, c };

struct CoscResult {
  bool holds = false;
  CoscClause clause = CoscClause::none;
  std::size_t map_i = 0;  // 0-based offending map (clauses a, b, c)
  std::size_t map_j = 0;  // second map for clause b
  std::optional<Vector> point;
  /// Half the smallest sampled distance from C to ∂U and to the images S_i(U); set when holds.
  double eta = 0.0;
  std::string message;
};

/// (a) S_i(U) ⊆ U: image corners in the closed rectangle within 1e-9 (exact for convex images);
/// (b) the open images are pairwise disjoint: a separating axis exists, touching allowed;
/// (c) discretize(C, 1e-3) lies strictly inside U and outside every closed image.
/// Throws Unsupported for n ≠ 2 and DomainError for an empty rectangle.
CoscResult cosc_check_rect(const Ifs& ifs, const CondensationSet& c, const Rect& u);

const char* clause_name(CoscClause clause);

}  // namespace affdim
