#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "numrad/matrix.hpp"
#include "numrad/random.hpp"

namespace numrad::test {

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double frob_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).frobenius_norm(); }

inline ComplexMatrix random_ginibre(RngStream& rng, std::size_t n) {
  ComplexMatrix m(n);
  for (auto& z : m.data()) z = rng.complex_gaussian();
  return m;
}

inline ComplexMatrix random_hermitian(RngStream& rng, std::size_t n) {
  return hermitian_part(random_ginibre(rng, n));
}

inline ComplexMatrix jordan2() { return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}}); }

}  // namespace numrad::test

namespace numrad::test {

// Haar-ish unitary by Gram-Schmidt on a Ginibre matrix (test-only; the
// harness has its own generator).
inline ComplexMatrix random_unitary(RngStream& rng, std::size_t n) {
  ComplexMatrix g = random_ginibre(rng, n);
  ComplexMatrix q(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector v = g.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        const Vector qk = q.column(k);
        v = axpy(-inner(v, qk), qk, v);
      }
    q.set_column(j, normalized(v));
  }
  return q;
}

inline ComplexMatrix random_normal(RngStream& rng, std::size_t n) {
  const ComplexMatrix u = random_unitary(rng, n);
  Vector d(n);
  for (auto& z : d) z = rng.complex_gaussian();
  return u * ComplexMatrix::diagonal(d) * u.adjoint();
}

}  // namespace numrad::test
