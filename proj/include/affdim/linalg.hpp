#pragma once

// Small dense linear algebra for affine maps on R^n, n <= kMaxDim.
// Storage is inline so compositions inside word enumeration never allocate.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace affdim {

inline constexpr int kMaxDim = 4;

class Vector {
 public:
  Vector() = default;
  explicit Vector(int n);
  Vector(std::initializer_list<double> values);

  static Vector filled(int n, double value);

  int dim() const noexcept { return n_; }
  double& operator[](int i) noexcept { return v_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const noexcept { return v_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const noexcept { return {v_.data(), static_cast<std::size_t>(n_)}; }

  double norm() const noexcept;

  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(double s, const Vector& a);
  friend bool operator==(const Vector& a, const Vector& b) noexcept;

 private:
  int n_ = 0;
  std::array<double, kMaxDim> v_{};
};

double dot(const Vector& a, const Vector& b);
double distance(const Vector& a, const Vector& b);
/// Strict lexicographic order on coordinates.
bool lex_less(const Vector& a, const Vector& b) noexcept;

/// Row-major n×n matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n);
  /// Rows as nested lists; throws DimensionMismatch if not square or n > kMaxDim.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);
  static Matrix diagonal(std::initializer_list<double> diag);

  int dim() const noexcept { return n_; }
  double& operator()(int r, int c) noexcept { return a_[static_cast<std::size_t>(r * kMaxDim + c)]; }
  double operator()(int r, int c) const noexcept { return a_[static_cast<std::size_t>(r * kMaxDim + c)]; }

  Matrix transpose() const;
  double determinant() const;
  Vector column(int c) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& x);
  friend bool operator==(const Matrix& a, const Matrix& b) noexcept;

 private:
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

/// Solves m·x = rhs by Gaussian elimination with partial pivoting; throws InvalidMatrix if singular.
Vector solve(const Matrix& m, const Vector& rhs);

double max_abs_diff(const Matrix& a, const Matrix& b);

/// Singular values α_1 ≥ … ≥ α_n > 0.
class SingularSpectrum {
 public:
  SingularSpectrum() = default;
  SingularSpectrum(std::span<const double> values);

  int dim() const noexcept { return n_; }
  /// 1-based access matching the usual α_j indexing.
  double alpha(int j) const noexcept { return v_[static_cast<std::size_t>(j - 1)]; }
  double largest() const noexcept { return v_[0]; }
  double smallest() const noexcept { return v_[static_cast<std::size_t>(n_ - 1)]; }
  std::span<const double> values() const noexcept { return {v_.data(), static_cast<std::size_t>(n_)}; }
  double product() const noexcept;

 private:
  int n_ = 0;
  std::array<double, kMaxDim> v_{};
};

/// Singular values plus the matching left singular vectors (columns of `left`),
/// i.e. the principal axes of m applied to the unit ball.
struct SingularFrame {
  SingularSpectrum spectrum;
  Matrix left;
};

/// Closed form for n = 2, cyclic Jacobi on m·mᵀ otherwise.
/// Throws InvalidMatrix when m is singular.
SingularSpectrum singular_values(const Matrix& m);
SingularFrame singular_frame(const Matrix& m);

/// Singular value function. φ^0 = 1; for s > n it is |det|^{s/n}.
/// Throws DomainError for negative s.
double phi_s(const SingularSpectrum& spectrum, double s);
double phi_s(const Matrix& m, double s);

/// 2^n · Π_{j<m} α_j/α_m: boxes of side α_m sufficient to cover the ellipsoid with axes α_1..α_n.
double cover_bound(const SingularSpectrum& spectrum, int m_index);

class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(Matrix linear, Vector translation);

  static AffineMap identity(int n);

  int dim() const noexcept { return linear_.dim(); }
  const Matrix& linear() const noexcept { return linear_; }
  const Vector& translation() const noexcept { return translation_; }

  Vector operator()(const Vector& x) const;
  Vector fixed_point() const;

 private:
  Matrix linear_;
  Vector translation_;
};

/// x ↦ a(b(x)).
AffineMap compose(const AffineMap& a, const AffineMap& b);

std::string to_string(const Matrix& m);
std::string to_string(const Vector& v);

}  // namespace affdim
