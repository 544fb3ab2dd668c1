#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace numrad {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Dense square complex matrix stored row-major.
///
/// The type only guarantees squareness; finiteness is validated at the
/// boundaries that accept external data (parsers, public entry points of the
/// spectral routines) via require_finite().
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}
  ComplexMatrix(std::size_t n, std::vector<Complex> row_major);

  /// Builds from nested rows; throws NotSquare on ragged or non-square input.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows);

  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  static ComplexMatrix diagonal(std::initializer_list<Complex> d);
  static ComplexMatrix diagonal_real(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

  ComplexMatrix adjoint() const;
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> v);

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex c);

  bool all_finite() const noexcept;
  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;
  Complex trace() const noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex c, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex c);
inline ComplexMatrix operator*(double c, ComplexMatrix a) { return Complex(c) * std::move(a); }
Vector operator*(const ComplexMatrix& a, std::span<const Complex> x);

/// (H + H*)/2, exactly Hermitian in floating point.
ComplexMatrix hermitian_part(const ComplexMatrix& a);
/// Re(e^{i theta} A) = (e^{i theta} A + e^{-i theta} A*)/2.
ComplexMatrix rotated_real_part(const ComplexMatrix& a, double theta);
/// Block matrix [[a, b], [c, d]] of dimension 2n.
ComplexMatrix block2x2(const ComplexMatrix& a, const ComplexMatrix& b,
                       const ComplexMatrix& c, const ComplexMatrix& d);
/// Integer power by repeated squaring; k = 0 gives the identity.
ComplexMatrix matrix_power_int(const ComplexMatrix& a, unsigned k);
ComplexMatrix inverse(const ComplexMatrix& a);

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, const char* what);
void require_finite(std::span<const Complex> v, const char* what);

// ---- vectors ---------------------------------------------------------------
// Inner products are linear in the first argument: <x, y> = sum x_i conj(y_i).

Complex inner(std::span<const Complex> x, std::span<const Complex> y);
double norm(std::span<const Complex> x);
Vector normalized(std::span<const Complex> x);
Vector axpy(Complex a, std::span<const Complex> x, std::span<const Complex> y);  // a x + y
Vector unit_vector(std::size_t n, std::size_t k);

/// FNV-1a over the IEEE-754 bytes of the entries; stable content digest.
std::uint64_t digest(const ComplexMatrix& a, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t digest(std::span<const Complex> v, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex_digest(std::uint64_t h);

}  // namespace numrad
