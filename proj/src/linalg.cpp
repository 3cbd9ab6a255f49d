#include "affdim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "affdim/error.hpp"

namespace affdim {

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw DimensionMismatch("dimension " + std::to_string(n) + " outside [1, " +
                            std::to_string(kMaxDim) + "]");
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// On return `b` is (numerically) diagonal and the columns of `v` are the eigenvectors.
void jacobi_eigen(Matrix& b, Matrix& v) {
  const int n = b.dim();
  v = Matrix::identity(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) scale += b(i, j) * b(i, j);
  }
  if (scale == 0.0) return;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += b(p, q) * b(p, q);
    }
    if (off <= 1e-34 * scale) return;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double bpq = b(p, q);
        if (bpq == 0.0) continue;
        const double theta = (b(q, q) - b(p, p)) / (2.0 * bpq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double bkp = b(k, p);
          const double bkq = b(k, q);
          b(k, p) = c * bkp - s * bkq;
          b(k, q) = s * bkp + c * bkq;
        }
        for (int k = 0; k < n; ++k) {
          const double bpk = b(p, k);
          const double bqk = b(q, k);
          b(p, k) = c * bpk - s * bqk;
          b(q, k) = s * bpk + c * bqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

SingularFrame frame_2x2(const Matrix& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double det = std::abs(a * d - b * c);
  const double q = std::hypot(0.5 * (a + d), 0.5 * (c - b));
  const double r = std::hypot(0.5 * (a - d), 0.5 * (c + b));
  const double s1 = q + r;
  if (!(det > 0.0) || !(s1 > 0.0) || !std::isfinite(s1)) {
    throw InvalidMatrix("singular matrix " + to_string(m));
  }
  // α_2 from the determinant keeps Πα = |det| exact and stays accurate when α_2 ≪ α_1.
  const double s2 = det / s1;
  const std::array<double, 2> values{s1, s2};

  // Major axis of m·mᵀ.
  const double p = a * a + b * b;
  const double off = a * c + b * d;
  const double rr = c * c + d * d;
  const double theta = 0.5 * std::atan2(2.0 * off, p - rr);
  Matrix left(2);
  left(0, 0) = std::cos(theta);
  left(1, 0) = std::sin(theta);
  left(0, 1) = -std::sin(theta);
  left(1, 1) = std::cos(theta);
  return {SingularSpectrum(values), left};
}

SingularFrame frame_jacobi(const Matrix& m) {
  const int n = m.dim();
  const double det = std::abs(m.determinant());
  if (!(det > 0.0) || !std::isfinite(det)) throw InvalidMatrix("singular matrix " + to_string(m));

  Matrix b = m * m.transpose();
  Matrix v;
  jacobi_eigen(b, v);

  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::sort(order.begin(), order.begin() + n, [&](int i, int j) { return b(i, i) > b(j, j); });

  std::array<double, kMaxDim> values{};
  Matrix left(n);
  double head = 1.0;
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    values[static_cast<std::size_t>(k)] = std::sqrt(std::max(b(src, src), 0.0));
    if (k < n - 1) head *= values[static_cast<std::size_t>(k)];
    for (int r = 0; r < n; ++r) left(r, k) = v(r, src);
  }
  // The smallest eigenvalue of m·mᵀ carries the largest relative error; pin α_n to the determinant.
  values[static_cast<std::size_t>(n - 1)] = det / head;
  if (!(values[static_cast<std::size_t>(n - 1)] > 0.0)) throw InvalidMatrix("singular matrix " + to_string(m));
  return {SingularSpectrum(std::span<const double>(values.data(), static_cast<std::size_t>(n))), left};
}

}  // namespace

// --- Vector -----------------------------------------------------------------

Vector::Vector(int n) : n_(n) { check_dim(n); }

Vector::Vector(std::initializer_list<double> values) : n_(static_cast<int>(values.size())) {
  check_dim(n_);
  std::copy(values.begin(), values.end(), v_.begin());
}

Vector Vector::filled(int n, double value) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = value;
  return v;
}

double Vector::norm() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += v_[static_cast<std::size_t>(i)] * v_[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.n_ != b.n_) throw DimensionMismatch("vector dimensions differ");
  Vector r(a.n_);
  for (int i = 0; i < a.n_; ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.n_ != b.n_) throw DimensionMismatch("vector dimensions differ");
  Vector r(a.n_);
  for (int i = 0; i < a.n_; ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(double s, const Vector& a) {
  Vector r(a.n_);
  for (int i = 0; i < a.n_; ++i) r[i] = s * a[i];
  return r;
}

bool operator==(const Vector& a, const Vector& b) noexcept {
  if (a.n_ != b.n_) return false;
  for (int i = 0; i < a.n_; ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

double dot(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("vector dimensions differ");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

bool lex_less(const Vector& a, const Vector& b) noexcept {
  const auto av = a.values();
  const auto bv = b.values();
  return std::lexicographical_compare(av.begin(), av.end(), bv.begin(), bv.end());
}

// --- Matrix -----------------------------------------------------------------

Matrix::Matrix(int n) : n_(n) { check_dim(n); }

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(static_cast<int>(rows.size())) {
  check_dim(n_);
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw DimensionMismatch("matrix rows must have length " + std::to_string(n_));
    int c = 0;
    for (double x : row) (*this)(r, c++) = x;
    ++r;
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
  Matrix m(static_cast<int>(diag.size()));
  int i = 0;
  for (double x : diag) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double Matrix::determinant() const {
  if (n_ == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
  Matrix a = *this;
  double det = 1.0;
  for (int col = 0; col < n_; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n_; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n_; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n_; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int c = col; c < n_; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

Vector Matrix::column(int c) const {
  Vector v(n_);
  for (int r = 0; r < n_; ++r) v[r] = (*this)(r, c);
  return v;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.n_ != b.n_) throw DimensionMismatch("matrix dimensions differ");
  const int n = a.n_;
  Matrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.n_ != x.dim()) throw DimensionMismatch("matrix/vector dimensions differ");
  Vector r(a.n_);
  for (int i = 0; i < a.n_; ++i) {
    double s = 0.0;
    for (int k = 0; k < a.n_; ++k) s += a(i, k) * x[k];
    r[i] = s;
  }
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) noexcept {
  if (a.n_ != b.n_) return false;
  for (int i = 0; i < a.n_; ++i) {
    for (int j = 0; j < a.n_; ++j) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

Vector solve(const Matrix& m, const Vector& rhs) {
  const int n = m.dim();
  if (rhs.dim() != n) throw DimensionMismatch("solve: dimensions differ");
  Matrix a = m;
  Vector x = rhs;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw InvalidMatrix("solve: singular matrix " + to_string(m));
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(x[pivot], x[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      x[r] -= f * x[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = x[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matrix dimensions differ");
  double d = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  }
  return d;
}

// --- singular values --------------------------------------------------------

SingularSpectrum::SingularSpectrum(std::span<const double> values) : n_(static_cast<int>(values.size())) {
  check_dim(n_);
  std::copy(values.begin(), values.end(), v_.begin());
}

double SingularSpectrum::product() const noexcept {
  double p = 1.0;
  for (int j = 0; j < n_; ++j) p *= v_[static_cast<std::size_t>(j)];
  return p;
}

SingularFrame singular_frame(const Matrix& m) {
  if (m.dim() == 2) return frame_2x2(m);
  if (m.dim() == 1) {
    const double a = std::abs(m(0, 0));
    if (!(a > 0.0)) throw InvalidMatrix("singular matrix " + to_string(m));
    const std::array<double, 1> v{a};
    return {SingularSpectrum(v), Matrix::identity(1)};
  }
  return frame_jacobi(m);
}

SingularSpectrum singular_values(const Matrix& m) { return singular_frame(m).spectrum; }

double phi_s(const SingularSpectrum& spectrum, double s) {
  if (!(s >= 0.0)) throw DomainError("phi_s: s must be non-negative, got " + format_double(s));
  const int n = spectrum.dim();
  if (s == 0.0) return 1.0;
  if (s > n) return std::pow(spectrum.product(), s / n);
  const int m = static_cast<int>(std::ceil(s));
  double value = 1.0;
  for (int j = 1; j < m; ++j) value *= spectrum.alpha(j);
  return value * std::pow(spectrum.alpha(m), s - m + 1);
}

double phi_s(const Matrix& m, double s) { return phi_s(singular_values(m), s); }

double cover_bound(const SingularSpectrum& spectrum, int m_index) {
  const int n = spectrum.dim();
  if (m_index < 1 || m_index > n) {
    throw DomainError("cover_bound: index " + std::to_string(m_index) + " outside [1, " + std::to_string(n) + "]");
  }
  double bound = std::ldexp(1.0, n);
  const double am = spectrum.alpha(m_index);
  for (int j = 1; j < m_index; ++j) bound *= spectrum.alpha(j) / am;
  return bound;
}

// --- affine maps ------------------------------------------------------------

AffineMap::AffineMap(Matrix linear, Vector translation)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  if (linear_.dim() != translation_.dim()) {
    throw DimensionMismatch("affine map: linear part is " + std::to_string(linear_.dim()) + "x" +
                            std::to_string(linear_.dim()) + " but translation has length " +
                            std::to_string(translation_.dim()));
  }
}

AffineMap AffineMap::identity(int n) { return {Matrix::identity(n), Vector(n)}; }

Vector AffineMap::operator()(const Vector& x) const { return linear_ * x + translation_; }

Vector AffineMap::fixed_point() const {
  const int n = dim();
  Matrix a = Matrix::identity(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) -= linear_(i, j);
  }
  return solve(a, translation_);
}

AffineMap compose(const AffineMap& a, const AffineMap& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("compose: map dimensions differ");
  return {a.linear() * b.linear(), a.linear() * b.translation() + a.translation()};
}

std::string to_string(const Vector& v) {
  std::string s = "[";
  for (int i = 0; i < v.dim(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

std::string to_string(const Matrix& m) {
  std::string s = "[";
  for (int r = 0; r < m.dim(); ++r) {
    if (r) s += ", ";
    s += "[";
    for (int c = 0; c < m.dim(); ++c) {
      if (c) s += ", ";
      s += format_double(m(r, c));
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace affdim
