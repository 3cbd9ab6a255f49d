#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affdim/condensation.hpp"
#include "affdim/exec.hpp"
#include "affdim/linalg.hpp"

namespace affdim {

inline constexpr std::uint64_t kDefaultWordBudget = std::uint64_t{1} << 24;

/// Finite family of contracting affine maps S_1..S_N on R^n (n ≥ 2).
/// Per-map singular spectra are computed once at construction.
class Ifs {
 public:
  /// Throws DomainError for an empty list, DimensionMismatch for mixed or n < 2 dimensions,
  /// and DomainError naming the (1-based) map when some α_1(S_i) ≥ 1.
  explicit Ifs(std::vector<AffineMap> maps);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return maps_.size(); }
  const AffineMap& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<AffineMap>& maps() const noexcept { return maps_; }
  const SingularSpectrum& spectrum(std::size_t i) const { return spectra_.at(i); }

  double max_alpha_1() const noexcept;
  /// min_i α_n(S_i): the b of the stopping sandwich before the (1 − 1e-12) safety factor.
  double min_alpha_n() const noexcept;

  /// Same linear parts, translations conjugated by t: returns t ∘ S_i ∘ t⁻¹ for every map.
  Ifs conjugated(const Similarity& t) const;

 private:
  int dim_ = 0;
  std::vector<AffineMap> maps_;
  std::vector<SingularSpectrum> spectra_;
};

/// Finite word over {0..N-1} (printed 1-based). Word::empty() is the empty word ∅.
class Word {
 public:
  using Letter = std::uint32_t;

  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  static Word empty() { return Word{}; }
  /// Builds from 1-based letters: from_one_based({1, 2}).
  static Word from_one_based(std::initializer_list<Letter> letters);

  std::size_t length() const noexcept { return letters_.size(); }
  bool is_empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  /// 𝐢_−: the word with its last letter removed.
  Word parent() const;
  Word extended(Letter j) const;
  bool is_prefix_of(const Word& other) const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

Word concat(const Word& a, const Word& b);

/// S_{i_1} ∘ … ∘ S_{i_k}. Throws DomainError for the empty word or an out-of-range letter.
AffineMap compose_word(const Ifs& ifs, const Word& w);

/// α_m(S_w) with the convention α_m(S_∅) = 1.
double alpha_of_word(const Ifs& ifs, const Word& w, int m_index);

/// The m-δ-stopping I_m(δ) = { w : α_m(S_w) < δ ≤ α_m(S_{w−}) } in lexicographic order.
struct StoppingSet {
  std::vector<Word> words;
  int m_index = 0;
  double delta = 0.0;
};

/// Depth-first enumeration with pruning at the first word whose α_m drops below δ.
/// Throws DomainError unless 1 ≤ m ≤ n and 0 < δ ≤ 1; BudgetExceeded if more than
/// `word_budget` tree nodes would be visited. Output order is lexicographic for every `exec`.
StoppingSet stopping_set(const Ifs& ifs, int m_index, double delta, std::uint64_t word_budget = kDefaultWordBudget,
                         const Exec& exec = {});

struct BoundingBall {
  Vector center;
  double radius = 0.0;

  double diameter() const noexcept { return 2.0 * radius; }
  bool contains(const Vector& p, double tol = 0.0) const { return distance(p, center) <= radius + tol; }
  /// Lower corner of the axis-aligned cube circumscribing the ball; raster grids are anchored here.
  Vector corner() const;
};

/// A ball with S_i(X) ⊆ X for every map and C ⊆ X. Centre is the midpoint between the mean
/// of the maps' fixed points and the centre of C's bounding box; the radius is the larger of
/// max_i |S_i(c) − c| / (1 − α_1(S_i)) and the farthest point of C, inflated by 1%.
BoundingBall bounding_ball(const Ifs& ifs, const CondensationSet& c);

/// Checks |S_i(c) − c| + α_1(S_i)·r ≤ r + tol for every map.
bool maps_into_ball(const Ifs& ifs, const BoundingBall& ball, double tol = 1e-12);
/// Checks every discretised point of C (at spacing 1e-3·r) lies in the ball.
bool contains_condensation(const BoundingBall& ball, const CondensationSet& c, double tol = 1e-12);

/// An IFS together with its condensation set and bounding ball.
struct System {
  Ifs ifs;
  CondensationSet condensation;
  BoundingBall ball;
};

/// System rescaled so the ball has unit diameter and sits in [0,1]^n: centre (½,…,½), radius ½.
/// Linear parts are unchanged; `to_normalized` maps original coordinates to the new ones.
struct NormalizedSystem {
  System system;
  Similarity to_normalized;
};

/// Uses `ball` if given (validated), otherwise bounding_ball().
/// Throws DomainError if an explicit ball violates the invariants.
System make_system(Ifs ifs, CondensationSet c, std::optional<BoundingBall> ball = std::nullopt);
NormalizedSystem normalize(const System& system);

}  // namespace affdim
