#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "affdim/exec.hpp"
#include "affdim/ifs.hpp"

namespace affdim {

inline constexpr std::uint64_t kDefaultLeafBudget = std::uint64_t{1} << 24;

struct PressureOptions {
  /// Maximum number of words of length k (N^k) a single sum may enumerate.
  std::uint64_t leaf_budget = kDefaultLeafBudget;
  Exec exec{};
};

/// Σ_{|w| = k} φ^s(S_w), enumerated depth-first with shared partial products.
/// Throws DomainError for k < 1 or s < 0 and BudgetExceeded when N^k > leaf_budget.
/// Parallel results are bit-identical for every worker count.
double pressure_sum(const Ifs& ifs, int k, double s, const PressureOptions& opts = {});

/// Root s_k of Σ_{|w| = k} φ^s(S_w) = 1.
struct PressureProfile {
  int k = 0;
  double root = 0.0;
  /// Every (s, Σ) pair evaluated by the bisection, in evaluation order.
  std::vector<std::pair<double, double>> evaluations;
};

/// Bisection on [0, 2n] until |Σ − 1| < 1e-10 or the bracket is narrower than 1e-12.
/// Throws DomainError("degenerate ...") if Σ at s = 2n is still ≥ 1, which happens only when
/// the pressure root lies beyond 2n (heavily overlapping systems).
PressureProfile solve_sk(const Ifs& ifs, int k, const PressureOptions& opts = {});

struct AffinityEstimate {
  /// min_k s_k: an upper bound for the affinity dimension.
  double upper = 0.0;
  /// Aitken Δ² extrapolation from the last three s_k; equals the last s_k when fewer are available
  /// or the sequence is already flat.
  double extrapolated = 0.0;
  /// |s_{k_max} − s_{k_max−1}|, or 0 when only one term was computed.
  double convergence = 0.0;
  int k_max = 0;
  std::vector<std::pair<int, double>> sequence;
};

/// s_k for k = 1..k_max; stops early (and records the reached k) once N^k exceeds the leaf budget.
/// Throws BudgetExceeded if even k = 1 is over budget.
AffinityEstimate affinity_estimate(const Ifs& ifs, int k_max, const PressureOptions& opts = {});

/// Aitken Δ² acceleration of x0, x1, x2 (x2 most recent).
double aitken(double x0, double x1, double x2);

namespace kernels {

/// Singular spectra of all N^k compositions, flattened (n values per word, lexicographic word order).
std::vector<double> leaf_spectra(const Ifs& ifs, int k, const PressureOptions& opts = {});

/// Σ φ^s over spectra produced by leaf_spectra, reduced in fixed-size chunks combined in order.
double pressure_from_spectra(std::span<const double> spectra, int n, double s, const Exec& exec = {});

}  // namespace kernels

}  // namespace affdim
