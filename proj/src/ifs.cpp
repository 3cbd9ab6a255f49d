#include "affdim/ifs.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "affdim/error.hpp"
#include "word_tree.hpp"

namespace affdim {

int resolved_threads(const Exec& exec) {
  if (!exec.parallel) return 1;
  return exec.threads > 0 ? exec.threads : omp_get_max_threads();
}

// --- Ifs --------------------------------------------------------------------

Ifs::Ifs(std::vector<AffineMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw DomainError("an IFS needs at least one map");
  dim_ = maps_.front().dim();
  if (dim_ < 2) throw DimensionMismatch("IFS dimension must be at least 2");
  spectra_.reserve(maps_.size());
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    if (maps_[i].dim() != dim_) {
      throw DimensionMismatch("map " + std::to_string(i + 1) + " has dimension " + std::to_string(maps_[i].dim()) +
                              ", expected " + std::to_string(dim_));
    }
    const auto spec = singular_values(maps_[i].linear());
    if (!(spec.largest() < 1.0)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g", spec.largest());
      throw DomainError("map " + std::to_string(i + 1) + " is not contracting (alpha_1 = " + buf + ")");
    }
    spectra_.push_back(spec);
  }
}

double Ifs::max_alpha_1() const noexcept {
  double a = 0.0;
  for (const auto& s : spectra_) a = std::max(a, s.largest());
  return a;
}

double Ifs::min_alpha_n() const noexcept {
  double a = 1.0;
  for (const auto& s : spectra_) a = std::min(a, s.smallest());
  return a;
}

Ifs Ifs::conjugated(const Similarity& t) const {
  std::vector<AffineMap> out;
  out.reserve(maps_.size());
  for (const auto& m : maps_) {
    // t ∘ S ∘ t⁻¹ (y) = A y + λ b + t − A t
    const Vector b = t.scale * m.translation() + t.shift - m.linear() * t.shift;
    out.emplace_back(m.linear(), b);
  }
  return Ifs(std::move(out));
}

// --- Word -------------------------------------------------------------------

Word Word::from_one_based(std::initializer_list<Letter> letters) {
  std::vector<Letter> v;
  for (Letter l : letters) {
    if (l == 0) throw DomainError("one-based letters start at 1");
    v.push_back(l - 1);
  }
  return Word(std::move(v));
}

Word Word::parent() const {
  if (letters_.empty()) throw DomainError("the empty word has no parent");
  return Word(std::vector<Letter>(letters_.begin(), letters_.end() - 1));
}

Word Word::extended(Letter j) const {
  auto v = letters_;
  v.push_back(j);
  return Word(std::move(v));
}

bool Word::is_prefix_of(const Word& other) const noexcept {
  return letters_.size() <= other.letters_.size() &&
         std::equal(letters_.begin(), letters_.end(), other.letters_.begin());
}

std::string Word::to_string() const {
  if (letters_.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(letters_[i] + 1);
  }
  return s + ")";
}

Word concat(const Word& a, const Word& b) {
  std::vector<Word::Letter> v(a.letters().begin(), a.letters().end());
  v.insert(v.end(), b.letters().begin(), b.letters().end());
  return Word(std::move(v));
}

AffineMap compose_word(const Ifs& ifs, const Word& w) {
  if (w.is_empty()) throw DomainError("compose_word: empty word");
  const auto letters = w.letters();
  auto check = [&](Word::Letter l) {
    if (l >= ifs.size()) {
      throw DomainError("compose_word: letter " + std::to_string(l + 1) + " outside 1.." + std::to_string(ifs.size()));
    }
  };
  check(letters[0]);
  AffineMap acc = ifs.map(letters[0]);
  for (std::size_t i = 1; i < letters.size(); ++i) {
    check(letters[i]);
    acc = compose(acc, ifs.map(letters[i]));
  }
  return acc;
}

double alpha_of_word(const Ifs& ifs, const Word& w, int m_index) {
  if (m_index < 1 || m_index > ifs.dim()) throw DomainError("alpha_of_word: index out of range");
  if (w.is_empty()) return 1.0;
  return singular_values(compose_word(ifs, w).linear()).alpha(m_index);
}

// --- stoppings --------------------------------------------------------------

namespace {

struct StoppingVisitor {
  int m_index = 1;
  double delta = 1.0;
  std::vector<Word> words;

  bool visit(const detail::WordNode& node, std::span<const Word::Letter> word) {
    if (singular_values(node.map.linear()).alpha(m_index) < delta) {
      words.emplace_back(std::vector<Word::Letter>(word.begin(), word.end()));
      return false;
    }
    return true;
  }

  void merge(StoppingVisitor&& later) {
    words.insert(words.end(), std::make_move_iterator(later.words.begin()), std::make_move_iterator(later.words.end()));
  }
};

}  // namespace

StoppingSet stopping_set(const Ifs& ifs, int m_index, double delta, std::uint64_t word_budget, const Exec& exec) {
  if (m_index < 1 || m_index > ifs.dim()) {
    throw DomainError("stopping_set: m = " + std::to_string(m_index) + " outside [1, " + std::to_string(ifs.dim()) + "]");
  }
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("stopping_set: delta must lie in (0, 1]");
  detail::NodeBudget budget(word_budget);
  auto make = [&] { return StoppingVisitor{m_index, delta, {}}; };
  auto visitor = detail::walk<StoppingVisitor>(ifs, make, budget, exec);
  return {std::move(visitor.words), m_index, delta};
}

// --- bounding ball and normalisation ----------------------------------------

Vector BoundingBall::corner() const { return center - Vector::filled(center.dim(), radius); }

BoundingBall bounding_ball(const Ifs& ifs, const CondensationSet& c) {
  if (c.dim() != ifs.dim()) throw DimensionMismatch("condensation set and IFS dimensions differ");
  const int n = ifs.dim();

  Vector fixed_mean(n);
  for (const auto& m : ifs.maps()) fixed_mean = fixed_mean + m.fixed_point();
  fixed_mean = (1.0 / static_cast<double>(ifs.size())) * fixed_mean;
  const auto [lo, hi] = c.bounding_box();
  const Vector c_mid = 0.5 * (lo + hi);
  const Vector center = 0.5 * (fixed_mean + c_mid);

  double radius = c.max_distance(center);
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const double shift = distance(ifs.map(i)(center), center);
    radius = std::max(radius, shift / (1.0 - ifs.spectrum(i).largest()));
  }
  if (!(radius > 0.0)) radius = 1.0;
  return {center, radius * 1.01};
}

bool maps_into_ball(const Ifs& ifs, const BoundingBall& ball, double tol) {
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const double lhs = distance(ifs.map(i)(ball.center), ball.center) + ifs.spectrum(i).largest() * ball.radius;
    if (lhs > ball.radius + tol * std::max(1.0, ball.radius)) return false;
  }
  return true;
}

bool contains_condensation(const BoundingBall& ball, const CondensationSet& c, double tol) {
  return c.max_distance(ball.center) <= ball.radius + tol * std::max(1.0, ball.radius);
}

System make_system(Ifs ifs, CondensationSet c, std::optional<BoundingBall> ball) {
  if (c.dim() != ifs.dim()) throw DimensionMismatch("condensation set and IFS dimensions differ");
  BoundingBall x = ball ? *ball : bounding_ball(ifs, c);
  if (ball) {
    if (x.center.dim() != ifs.dim()) throw DimensionMismatch("ball center dimension differs from the IFS");
    if (!(x.radius > 0.0)) throw DomainError("ball radius must be positive");
    if (!maps_into_ball(ifs, x)) throw DomainError("ball is not mapped into itself by every S_i");
    if (!contains_condensation(x, c)) throw DomainError("ball does not contain the condensation set");
  }
  return System{std::move(ifs), std::move(c), std::move(x)};
}

NormalizedSystem normalize(const System& system) {
  const int n = system.ifs.dim();
  const double scale = 1.0 / system.ball.diameter();
  const Similarity t{scale, Vector::filled(n, 0.5) - scale * system.ball.center};
  System out{system.ifs.conjugated(t), system.condensation.transformed(t),
             BoundingBall{Vector::filled(n, 0.5), 0.5}};
  return {std::move(out), t};
}

}  // namespace affdim
