#include "affdim/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affdim/error.hpp"
#include "word_tree.hpp"

namespace affdim {

namespace {

// Leaf sets up to this size are cached for the bisection; larger ones are re-enumerated per step.
constexpr std::uint64_t kSpectrumCacheLimit = std::uint64_t{1} << 21;
constexpr std::size_t kReduceChunk = 4096;
constexpr double kRootTolerance = 1e-10;
constexpr double kBracketWidth = 1e-12;

std::uint64_t leaf_count(const Ifs& ifs, int k, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < k; ++i) {
    if (total > cap / ifs.size()) return std::numeric_limits<std::uint64_t>::max();
    total *= ifs.size();
  }
  return total;
}

void check_budget(const Ifs& ifs, int k, const PressureOptions& opts) {
  if (k < 1) throw DomainError("word length k must be at least 1");
  if (leaf_count(ifs, k, opts.leaf_budget) > opts.leaf_budget) {
    throw BudgetExceeded("N^k = " + std::to_string(ifs.size()) + "^" + std::to_string(k) +
                         " exceeds the leaf budget of " + std::to_string(opts.leaf_budget));
  }
}

std::uint64_t node_budget(const Ifs& ifs, int k) {
  // Σ_{j ≤ k} N^j ≤ 2·N^k
  return 2 * leaf_count(ifs, k, std::numeric_limits<std::uint64_t>::max() / 4) + ifs.size();
}

struct PressureVisitor {
  std::uint32_t k = 1;
  double s = 0.0;
  double sum = 0.0;

  bool visit(const detail::WordNode& node, std::span<const Word::Letter>) {
    if (node.depth < k) return true;
    sum += phi_s(singular_values(node.map.linear()), s);
    return false;
  }
  void merge(PressureVisitor&& later) { sum += later.sum; }
};

struct SpectrumVisitor {
  std::uint32_t k = 1;
  std::vector<double> values;

  bool visit(const detail::WordNode& node, std::span<const Word::Letter>) {
    if (node.depth < k) return true;
    const auto spec = singular_values(node.map.linear());
    values.insert(values.end(), spec.values().begin(), spec.values().end());
    return false;
  }
  void merge(SpectrumVisitor&& later) { values.insert(values.end(), later.values.begin(), later.values.end()); }
};

}  // namespace

double aitken(double x0, double x1, double x2) {
  const double d1 = x1 - x0;
  const double d2 = x2 - x1;
  const double den = d2 - d1;
  if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(x2))) return x2;
  return x2 - d2 * d2 / den;
}

namespace kernels {

std::vector<double> leaf_spectra(const Ifs& ifs, int k, const PressureOptions& opts) {
  check_budget(ifs, k, opts);
  detail::NodeBudget budget(node_budget(ifs, k));
  const auto kk = static_cast<std::uint32_t>(k);
  auto make = [kk] { return SpectrumVisitor{kk, {}}; };
  return detail::walk<SpectrumVisitor>(ifs, make, budget, opts.exec).values;
}

double pressure_from_spectra(std::span<const double> spectra, int n, double s, const Exec& exec) {
  const std::size_t leaves = spectra.size() / static_cast<std::size_t>(n);
  const std::size_t chunks = (leaves + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial(chunks, 0.0);
  auto chunk_sum = [&](std::size_t c) {
    const std::size_t lo = c * kReduceChunk;
    const std::size_t hi = std::min(leaves, lo + kReduceChunk);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      acc += phi_s(SingularSpectrum(spectra.subspan(i * static_cast<std::size_t>(n), static_cast<std::size_t>(n))), s);
    }
    partial[c] = acc;
  };
  if (exec.parallel) {
    const int threads = resolved_threads(exec);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::size_t c = 0; c < chunks; ++c) chunk_sum(c);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) chunk_sum(c);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace kernels

double pressure_sum(const Ifs& ifs, int k, double s, const PressureOptions& opts) {
  if (!(s >= 0.0)) throw DomainError("pressure_sum: s must be non-negative");
  check_budget(ifs, k, opts);
  detail::NodeBudget budget(node_budget(ifs, k));
  const auto kk = static_cast<std::uint32_t>(k);
  auto make = [kk, s] { return PressureVisitor{kk, s, 0.0}; };
  return detail::walk<PressureVisitor>(ifs, make, budget, opts.exec).sum;
}

PressureProfile solve_sk(const Ifs& ifs, int k, const PressureOptions& opts) {
  check_budget(ifs, k, opts);
  const int n = ifs.dim();

  std::vector<double> cache;
  const bool cached = leaf_count(ifs, k, opts.leaf_budget) <= kSpectrumCacheLimit;
  if (cached) cache = kernels::leaf_spectra(ifs, k, opts);

  PressureProfile profile;
  profile.k = k;
  auto eval = [&](double s) {
    const double v = cached ? kernels::pressure_from_spectra(cache, n, s, opts.exec) : pressure_sum(ifs, k, s, opts);
    profile.evaluations.emplace_back(s, v);
    return v;
  };

  double lo = 0.0;
  double hi = 2.0 * n;
  if (std::abs(eval(lo) - 1.0) < kRootTolerance) {
    profile.root = lo;
    return profile;
  }
  if (eval(hi) >= 1.0) {
    throw DomainError("degenerate system: pressure at s = 2n is still >= 1 for k = " + std::to_string(k) +
                      " (the root lies beyond the bracket [0, 2n])");
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double v = eval(mid);
    if (std::abs(v - 1.0) < kRootTolerance) {
      profile.root = mid;
      break;
    }
    if (v > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < kBracketWidth) {
      profile.root = 0.5 * (lo + hi);
      break;
    }
  }
  return profile;
}

AffinityEstimate affinity_estimate(const Ifs& ifs, int k_max, const PressureOptions& opts) {
  if (k_max < 1) throw DomainError("affinity_estimate: k_max must be at least 1");
  AffinityEstimate est;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1 && leaf_count(ifs, k, opts.leaf_budget) > opts.leaf_budget) break;
    est.sequence.emplace_back(k, solve_sk(ifs, k, opts).root);
  }
  est.k_max = est.sequence.back().first;
  est.upper = est.sequence.front().second;
  for (const auto& [k, sk] : est.sequence) est.upper = std::min(est.upper, sk);
  const std::size_t m = est.sequence.size();
  est.extrapolated = est.sequence.back().second;
  if (m >= 2) est.convergence = std::abs(est.sequence[m - 1].second - est.sequence[m - 2].second);
  if (m >= 3) est.extrapolated = aitken(est.sequence[m - 3].second, est.sequence[m - 2].second, est.sequence[m - 1].second);
  return est;
}

}  // namespace affdim
