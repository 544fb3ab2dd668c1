#include <cmath>

#include "doctest.h"
#include "numrad/error.hpp"
#include "numrad/linalg.hpp"
#include "numrad/numrange.hpp"
#include "numrad/transforms.hpp"
#include "support/test_util.hpp"

using namespace numrad;
using numrad::test::jordan2;
using numrad::test::max_abs_diff;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidConfig;
}

ComplexMatrix rank_deficient(RngStream& rng, std::size_t n, std::size_t rank) {
  ComplexMatrix l(n), r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < rank; ++j) {
      l(i, j) = rng.complex_gaussian();
      r(j, i) = rng.complex_gaussian();
    }
  return l * r;
}

void check_polar_invariants(const ComplexMatrix& t) {
  const PolarFactors p = polar_decompose(t);
  const double nt = operator_norm(t);
  CHECK(max_abs_diff(p.isometry * p.modulus, t) <= 1e-8 * std::max(1.0, nt));
  CHECK(classify(p.modulus).psd);
  CHECK(max_abs_diff(p.modulus * p.modulus, t.adjoint() * t) <= 1e-8 * std::max(1.0, nt * nt));
  CHECK(max_abs_diff(p.isometry.adjoint() * p.isometry * p.modulus, p.modulus) <= 1e-8 * std::max(1.0, nt));
}

}  // namespace

TEST_CASE("polar_decompose examples") {
  const PolarFactors j = polar_decompose(jordan2());
  CHECK(max_abs_diff(j.isometry, jordan2()) <= 1e-12);
  CHECK(max_abs_diff(j.modulus, ComplexMatrix::diagonal({0.0, 1.0})) <= 1e-12);

  const ComplexMatrix p = ComplexMatrix::diagonal({2.0, 0.0, 0.5});
  const PolarFactors pp = polar_decompose(p);
  CHECK(max_abs_diff(pp.isometry, ComplexMatrix::diagonal({1.0, 0.0, 1.0})) <= 1e-12);
  CHECK(max_abs_diff(pp.modulus, p) <= 1e-12);

  RngStream rng(5);
  const ComplexMatrix v = numrad::test::random_unitary(rng, 4);
  const PolarFactors pv = polar_decompose(v);
  CHECK(max_abs_diff(pv.isometry, v) <= 1e-10);
  CHECK(max_abs_diff(pv.modulus, ComplexMatrix::identity(4)) <= 1e-10);
}

TEST_CASE("polar re-composition on random operators") {
  RngStream rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(16);
    check_polar_invariants(numrad::test::random_ginibre(rng, n));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    check_polar_invariants(rank_deficient(rng, n, 1 + rng.below(n - 1)));
  }
  check_polar_invariants(ComplexMatrix::zero(3));
}

TEST_CASE("aluthge examples") {
  CHECK(aluthge(jordan2()).max_abs() <= 1e-12);
  CHECK(aluthge(ComplexMatrix::zero(3)).max_abs() == 0.0);

  RngStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix n = numrad::test::random_normal(rng, 1 + rng.below(6));
    const ComplexMatrix tn = aluthge(n);
    CHECK(max_abs_diff(tn, n) <= 1e-9 * std::max(1.0, operator_norm(n)));
  }
  const ComplexMatrix h = numrad::test::random_hermitian(rng, 5);
  CHECK(std::abs(numerical_radius(aluthge(h), 1e-10).value - numerical_radius(h, 1e-10).value) <= 1e-8);
}

TEST_CASE("aluthge_general examples and agreement at one half") {
  CHECK(aluthge_general(jordan2(), 0.5).max_abs() <= 1e-12);

  RngStream rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix t = numrad::test::random_ginibre(rng, 1 + rng.below(8));
    CHECK(max_abs_diff(aluthge_general(t, 0.5), aluthge(t)) <= 1e-12);
    const PolarFactors p = polar_decompose(t);
    CHECK(max_abs_diff(aluthge_general(t, 0.0), t) <= 1e-9 * std::max(1.0, operator_norm(t)));
    CHECK(max_abs_diff(aluthge_general(t, 1.0), p.modulus * p.isometry) <= 1e-9 * std::max(1.0, operator_norm(t)));
  }
  CHECK(kind_of([] { aluthge_general(jordan2(), 1.5); }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([] { aluthge_general(jordan2(), -0.1); }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([] { aluthge_general(jordan2(), NAN); }) == ErrorKind::AlphaOutOfRange);
}

TEST_CASE("aluthge transform radius is bounded by the norm") {
  RngStream rng(3030);
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix t = numrad::test::random_ginibre(rng, 1 + rng.below(10));
    const double nt = operator_norm(t);
    CHECK(numerical_radius(aluthge(t), 1e-9).value <= nt + 1e-8);
  }
}

TEST_CASE("heinz_mean examples") {
  RngStream rng(41);
  const ComplexMatrix x = numrad::test::random_ginibre(rng, 3);
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const ComplexMatrix i3 = ComplexMatrix::identity(3);
    CHECK(max_abs_diff(heinz_mean(i3, x, i3, alpha), x) <= 1e-12);
  }
  const ComplexMatrix two = heinz_mean(ComplexMatrix::diagonal({4.0, 4.0}), ComplexMatrix::identity(2),
                                       ComplexMatrix::identity(2), 0.5);
  CHECK(max_abs_diff(two, 2.0 * ComplexMatrix::identity(2)) <= 1e-12);

  const ComplexMatrix g = numrad::test::random_ginibre(rng, 3);
  const ComplexMatrix a = g * g.adjoint();
  const ComplexMatrix g2 = numrad::test::random_ginibre(rng, 3);
  const ComplexMatrix b = g2 * g2.adjoint();
  CHECK(max_abs_diff(heinz_mean(a, x, b, 0.0), 0.5 * (x * b + a * x)) <= 1e-9 * a.max_abs() * b.max_abs());
}

TEST_CASE("heinz_mean symmetry and errors") {
  RngStream rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const ComplexMatrix ga = numrad::test::random_ginibre(rng, n);
    const ComplexMatrix gb = numrad::test::random_ginibre(rng, n);
    const ComplexMatrix a = ga * ga.adjoint();
    const ComplexMatrix b = gb * gb.adjoint();
    const ComplexMatrix x = numrad::test::random_ginibre(rng, n);
    const double alpha = rng.uniform();
    const double scale = std::max({1.0, operator_norm(a), operator_norm(b)}) * std::max(1.0, operator_norm(x));
    CHECK(max_abs_diff(heinz_mean(a, x, b, alpha), heinz_mean(a, x, b, 1.0 - alpha)) <= 1e-10 * scale);
  }
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(kind_of([&] { heinz_mean(ComplexMatrix::diagonal({1.0, -1.0}), i2, i2, 0.5); }) == ErrorKind::NotPositive);
  CHECK(kind_of([&] { heinz_mean(i2, ComplexMatrix::identity(3), i2, 0.5); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("power_pair examples") {
  const FunctionPair half = power_pair(0.5);
  CHECK(half.f(9.0) == doctest::Approx(3.0));
  CHECK(half.g(9.0) == doctest::Approx(3.0));

  const FunctionPair one = power_pair(1.0);
  CHECK(one.f(2.5) == 2.5);
  CHECK(one.g(2.5) == 1.0);
  CHECK(one.g(0.0) == 0.0);

  const FunctionPair p3 = power_pair(0.3);
  CHECK(std::abs(p3.f(2.0) * p3.g(2.0) - 2.0) <= 1e-12);

  for (double s : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) CHECK(satisfies_pair_identity(power_pair(s)));
  CHECK(kind_of([] { power_pair(1.1); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { power_pair(-1e-9); }) == ErrorKind::OutOfRange);
}

TEST_CASE("paranormal_evidence examples") {
  CHECK(paranormal_evidence(ComplexMatrix::diagonal({Complex(0, 1), 2.0}), 500, 1) >= -1e-10);
  CHECK(paranormal_evidence(jordan2(), 10, 1) <= -1.0 + 1e-12);
  CHECK(paranormal_evidence(ComplexMatrix::zero(3), 10, 1) == 0.0);
  RngStream rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix n = numrad::test::random_normal(rng, 1 + rng.below(8));
    CHECK(paranormal_evidence(n, 200, trial) >= -1e-10 * std::max(1.0, std::pow(operator_norm(n), 2)));
  }
  CHECK(kind_of([] { paranormal_evidence(jordan2(), 0, 1); }) == ErrorKind::OutOfRange);
}
