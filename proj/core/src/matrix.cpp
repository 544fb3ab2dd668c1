#include "numrad/matrix.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "numrad/error.hpp"

namespace numrad {

ComplexMatrix::ComplexMatrix(std::size_t n, std::vector<Complex> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) {
    throw Error(ErrorKind::NotSquare, "expected " + std::to_string(n * n) + " entries, got " +
                                          std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  std::vector<std::vector<Complex>> r;
  r.reserve(rows.size());
  for (const auto& row : rows) r.emplace_back(row);
  return from_rows(r);
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t n = rows.size();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorKind::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> d) {
  return diagonal(std::span<const Complex>(d.begin(), d.size()));
}

ComplexMatrix ComplexMatrix::diagonal_real(std::span<const double> d) {
  ComplexMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

Vector ComplexMatrix::column(std::size_t j) const {
  Vector v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const Complex> v) {
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex c) {
  for (auto& z : data_) z *= c;
  return *this;
}

bool ComplexMatrix::all_finite() const noexcept {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

Complex ComplexMatrix::trace() const noexcept {
  Complex t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex c, ComplexMatrix a) { return a *= c; }
ComplexMatrix operator*(ComplexMatrix a, Complex c) { return a *= c; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * brow[j];
    }
  }
  return c;
}

Vector operator*(const ComplexMatrix& a, std::span<const Complex> x) {
  const std::size_t n = a.size();
  if (x.size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < n; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

ComplexMatrix rotated_real_part(const ComplexMatrix& a, double theta) {
  const std::size_t n = a.size();
  const Complex e = std::polar(1.0, theta);
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = (e * a(i, i)).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (e * a(i, j) + std::conj(e * a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

ComplexMatrix block2x2(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                       const ComplexMatrix& d) {
  const std::size_t n = a.size();
  if (b.size() != n || c.size() != n || d.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "block2x2 blocks differ in size");
  }
  ComplexMatrix m(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      m(i, j + n) = b(i, j);
      m(i + n, j) = c(i, j);
      m(i + n, j + n) = d(i, j);
    }
  }
  return m;
}

ComplexMatrix matrix_power_int(const ComplexMatrix& a, unsigned k) {
  ComplexMatrix result = ComplexMatrix::identity(a.size());
  ComplexMatrix base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  // Gauss-Jordan with partial pivoting.
  const std::size_t n = a.size();
  ComplexMatrix m = a;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, a.max_abs());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) <= 1e-300 * scale) {
      throw Error(ErrorKind::OutOfRange, "matrix is singular");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const Complex d = 1.0 / m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) *= d;
      inv(col, j) *= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = m(r, col);
      if (f == Complex(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.all_finite()) throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
}

void require_finite(std::span<const Complex> v, const char* what) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
    }
  }
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "inner product");
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

double norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

Vector normalized(std::span<const Complex> x) {
  const double nx = norm(x);
  Vector v(x.begin(), x.end());
  if (nx > 0.0)
    for (auto& z : v) z /= nx;
  return v;
}

Vector axpy(Complex a, std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "axpy");
  Vector r(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += a * x[i];
  return r;
}

Vector unit_vector(std::size_t n, std::size_t k) {
  Vector v(n);
  v.at(k) = 1.0;
  return v;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* bytes, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a_values(std::uint64_t h, std::span<const Complex> v) {
  for (const auto& z : v) {
    double parts[2] = {z.real(), z.imag()};
    // Canonicalise -0.0 so equal matrices hash equally.
    for (double& d : parts)
      if (d == 0.0) d = 0.0;
    h = fnv1a(h, parts, sizeof parts);
  }
  return h;
}

}  // namespace

std::uint64_t digest(const ComplexMatrix& a, std::uint64_t seed) {
  const std::uint64_t n = a.size();
  return fnv1a_values(fnv1a(seed, &n, sizeof n), a.data());
}

std::uint64_t digest(std::span<const Complex> v, std::uint64_t seed) {
  const std::uint64_t n = v.size();
  return fnv1a_values(fnv1a(seed ^ 0x5bd1e995ULL, &n, sizeof n), v);
}

std::string hex_digest(std::uint64_t h) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace numrad
