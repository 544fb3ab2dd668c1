#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "numrad/error.hpp"
#include "numrad/inequalities.hpp"
#include "numrad/linalg.hpp"
#include "numrad/numrange.hpp"
#include "support/test_util.hpp"

using namespace numrad;
using numrad::test::jordan2;

namespace {

ComplexMatrix psd(RngStream& rng, std::size_t n) {
  const ComplexMatrix g = numrad::test::random_ginibre(rng, n);
  return hermitian_part(g * g.adjoint());
}

OperandBundle matrices(std::optional<ComplexMatrix> a, std::optional<ComplexMatrix> b = {},
                       std::optional<ComplexMatrix> x = {}) {
  OperandBundle o;
  o.A = std::move(a);
  o.B = std::move(b);
  o.X = std::move(x);
  return o;
}

CheckParams with_r(double r) {
  CheckParams p;
  p.r = r;
  return p;
}

bool all_satisfied(const std::vector<CheckResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckResult& r) { return r.satisfied; });
}

std::set<std::string> ids_of(const std::vector<CheckResult>& rs) {
  std::set<std::string> s;
  for (const auto& r : rs) s.insert(r.checker_id);
  return s;
}

// Entries whose stated form fails on valid operands; they are exercised by
// the counterexample cases below instead.
bool known_false(const CheckResult& r) {
  return r.checker_id == "R18" || r.checker_id == "R26" || (r.checker_id == "R17" && r.link == "i");
}

}  // namespace

TEST_CASE("registry lists R01..R26 in order with unique aliases") {
  const auto& reg = registry();
  REQUIRE(reg.size() == 26);
  std::set<std::string_view> aliases;
  for (std::size_t k = 0; k < reg.size(); ++k) {
    char want[8];
    std::snprintf(want, sizeof want, "R%02zu", k + 1);
    CHECK(reg[k].id == want);
    CHECK(aliases.insert(reg[k].alias).second);
    CHECK(!reg[k].links.empty());
  }
  CHECK(find_checker("sandwich").id == "R01");
  CHECK(find_checker("r17").id == "R17");
  CHECK_THROWS_AS(find_checker("R99"), Error);
}

TEST_CASE("applicable examples") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CheckParams p = with_r(2.0);
  CHECK(applicable("R16", matrices(i2, i2, jordan2()), p).empty());

  p.r = 1.5;
  const auto r16 = applicable("R16", matrices(i2, i2, jordan2()), p);
  REQUIRE(r16.size() == 1);
  CHECK(r16[0] == "r ≥ 2 violated");

  // 1/1.5 + 1/3 = 1, so only the ordering constraint fails.
  CheckParams pq;
  pq.p = 1.5;
  pq.q = 3.0;
  pq.r = 1.0;
  const auto r06 = applicable("R06", matrices(jordan2()), pq);
  REQUIRE(r06.size() == 1);
  CHECK(r06[0] == "p ≥ q violated");

  pq.p = 3.0;
  pq.q = 2.0;
  const auto conj = applicable("R06", matrices(jordan2()), pq);
  CHECK(std::find(conj.begin(), conj.end(), "1/p+1/q ≠ 1") != conj.end());

  CHECK(!applicable("R14", matrices(jordan2(), i2, i2), with_r(2.0)).empty());
  CHECK(!applicable("R18", matrices(ComplexMatrix::diagonal({1.0, 0.0}), i2, i2), {}).empty());
  CHECK(!applicable("R08", matrices(jordan2()), with_r(1.0)).empty());
  CHECK(applicable("R08", matrices(ComplexMatrix::diagonal({Complex(0, 1), 2.0})), with_r(1.0)).empty());
  CHECK(!applicable("R04", matrices(i2, ComplexMatrix::identity(3)), with_r(1.0)).empty());
  CHECK_THROWS_AS(applicable("nope", matrices(i2), {}), Error);
}

TEST_CASE("check examples") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);

  const auto r05 = check("R05", matrices(jordan2()), with_r(1.0));
  REQUIRE(r05.size() == 1);
  CHECK(std::abs(r05[0].lhs - 0.25) <= 1e-8);
  CHECK(std::abs(r05[0].rhs - 0.5) <= 1e-8);
  CHECK(r05[0].satisfied);

  const auto r11 = check("R11", matrices(i2, i2), with_r(1.0));
  CHECK(std::abs(r11[0].lhs - 1.0) <= 1e-10);
  CHECK(std::abs(r11[0].rhs - 1.0) <= 1e-10);
  CHECK(std::abs(r11[0].slack) <= 1e-10);
  CHECK(r11[0].satisfied);

  CheckParams p14 = with_r(2.0);
  p14.alpha = 1.0;
  const auto r14 = check("R14", matrices(i2, i2, jordan2()), p14);
  CHECK(std::abs(r14[0].lhs - 0.25) <= 1e-8);
  CHECK(std::abs(r14[0].rhs - 1.0) <= 1e-12);
  CHECK(r14[0].satisfied);

  RngStream rng(9);
  const ComplexMatrix x = numrad::test::random_ginibre(rng, 2);
  const double wx = radius_dense_oracle(x, 100000);
  const double nx = operator_norm(x);
  for (double alpha : {0.0, 0.3, 0.5, 1.0}) {
    CheckParams p = with_r(2.0);
    p.alpha = alpha;
    const auto r17 = check("R17", matrices(i2, i2, x), p);
    REQUIRE(r17.size() == 3);
    CHECK(r17[0].link == "i");
    CHECK(std::abs(r17[0].lhs - wx * wx) <= 1e-3);
    CHECK(std::abs(r17[1].rhs - nx * nx) <= 1e-8);
    CHECK(std::abs(r17[2].rhs - nx * nx) <= 1e-8);
    CHECK(all_satisfied(r17));
  }

  OperandBundle mc = matrices(ComplexMatrix::diagonal({1.0, 4.0}));
  mc.x = Vector{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  const auto r20 = check("R20", mc, with_r(2.0));
  REQUIRE(r20.size() == 2);
  CHECK(std::abs(r20[0].lhs - 6.25) <= 1e-12);
  CHECK(std::abs(r20[0].rhs - 8.5) <= 1e-12);
  CHECK(all_satisfied(r20));

  OperandBundle pol;
  pol.x = unit_vector(3, 0);
  pol.y = unit_vector(3, 1);
  const auto r23 = check("R23", pol, {});
  CHECK(r23[0].lhs <= 1e-12);
  CHECK(r23[0].satisfied);

  CHECK_THROWS_AS(check("R16", matrices(i2, i2, i2), with_r(1.0)), Error);
  try {
    check("R16", matrices(i2, i2, i2), with_r(1.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolated);
  }
}

TEST_CASE("check_all examples") {
  const auto basic = ids_of(check_all(matrices(ComplexMatrix::identity(3)), ParamGrid{}));
  for (const char* id : {"R01", "R02", "R03", "R05"}) CHECK(basic.count(id) == 1);

  RngStream rng(10);
  const auto pos = ids_of(check_all(matrices(psd(rng, 3), psd(rng, 3), numrad::test::random_ginibre(rng, 3)),
                                    ParamGrid{}));
  for (const char* id : {"R14", "R16", "R17"}) CHECK(pos.count(id) == 1);

  ParamGrid empty;
  empty.r.clear();
  CHECK(check_all(matrices(ComplexMatrix::identity(3)), empty).empty());

  std::vector<std::string> skipped;
  const std::vector<std::string> only{"R16"};
  CHECK(check_all(matrices(jordan2(), jordan2(), jordan2()), ParamGrid{}, 1e-8, only, &skipped).empty());
  CHECK(!skipped.empty());
}

TEST_CASE("check_all ordering is deterministic") {
  RngStream rng(11);
  OperandBundle o = matrices(psd(rng, 4), psd(rng, 4), numrad::test::random_ginibre(rng, 4));
  o.x = rng.unit_vector(4);
  o.y = rng.gaussian_vector(4);
  o.e = rng.unit_vector(4);
  o.a = 0.7;
  o.b = 2.5;
  const auto first = check_all(o, ParamGrid{});
  const auto second = check_all(o, ParamGrid{});
  REQUIRE(first.size() == second.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK(first[k].checker_id == second[k].checker_id);
    CHECK(first[k].link == second[k].link);
    CHECK(first[k].lhs == second[k].lhs);
    CHECK(first[k].rhs == second[k].rhs);
  }
  for (std::size_t k = 1; k < first.size(); ++k) CHECK(first[k - 1].checker_id <= first[k].checker_id);
}

TEST_CASE("every true entry holds on random operands") {
  RngStream rng(12);
  std::set<std::string> seen;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    OperandBundle o;
    switch (trial % 4) {
      case 0:
        o = matrices(numrad::test::random_ginibre(rng, n), numrad::test::random_ginibre(rng, n),
                     numrad::test::random_ginibre(rng, n));
        break;
      case 1:
        o = matrices(psd(rng, n), psd(rng, n), numrad::test::random_ginibre(rng, n));
        break;
      case 2:
        o = matrices(numrad::test::random_normal(rng, n), numrad::test::random_hermitian(rng, n),
                     numrad::test::random_ginibre(rng, n));
        break;
      default: {
        ComplexMatrix low = psd(rng, n);
        const HermitianSpectrum sp = hermitian_eig(low);
        low = low - sp.eigenvalues.front() * ComplexMatrix::identity(n);  // singular PSD
        o = matrices(hermitian_part(low), psd(rng, n), numrad::test::random_ginibre(rng, n));
      }
    }
    o.x = rng.unit_vector(n);
    o.y = rng.gaussian_vector(n);
    o.e = rng.unit_vector(n);
    o.a = 3.0 * rng.uniform();
    o.b = 3.0 * rng.uniform();
    for (const CheckResult& r : check_all(o, ParamGrid{})) {
      seen.insert(r.checker_id);
      if (known_false(r)) continue;
      INFO(r.checker_id << "[" << r.link << "] r=" << r.params.r << " alpha=" << r.params.alpha
                        << " slack=" << r.slack);
      CHECK(r.satisfied);
    }
  }
  CHECK(seen.size() == 26);
}

TEST_CASE("R18 counterexample: the similarity mean can shrink the radius") {
  // A X is nilpotent here, so w(A X) = ||A X|| / 2 = 1 while w(X) = 2.
  const ComplexMatrix a = ComplexMatrix::diagonal({1.0, -1.0});
  const ComplexMatrix x = ComplexMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}});
  const auto r = check("R18", matrices(a, ComplexMatrix::identity(2), x), {});
  CHECK(std::abs(r[0].lhs - radius_dense_oracle(x, 100000)) <= 1e-8);
  CHECK(std::abs(r[0].rhs - radius_dense_oracle(a * x, 100000)) <= 1e-4);
  CHECK(std::abs(r[0].slack + 1.0) <= 1e-4);
  CHECK(!r[0].satisfied);
}

TEST_CASE("R17 first link counterexample on positive definite operands") {
  const ComplexMatrix a = ComplexMatrix::diagonal({4.0, 1.0});
  const ComplexMatrix b = 4.0 * ComplexMatrix::identity(2);
  const ComplexMatrix x = ComplexMatrix::from_rows({{2.0, -2.0}, {1.0, -1.0}});
  CheckParams p = with_r(2.0);
  p.alpha = 1.0;
  const auto r = check("R17", matrices(a, b, x), p);
  // Independent lower / upper brackets from the dense oracle.
  const ComplexMatrix geo = matrix_power_psd(a, 0.5) * x * matrix_power_psd(b, 0.5);
  const ComplexMatrix heinz = 0.5 * (a * x + x * b);
  const std::size_t grid = 100000;
  const double geo_lo = radius_dense_oracle(geo, grid);
  const double heinz_hi = radius_dense_oracle(heinz, grid) + std::numbers::pi * operator_norm(heinz) / grid;
  CHECK(geo_lo * geo_lo > heinz_hi * heinz_hi + 1.0);
  CHECK(!r[0].satisfied);
  CHECK(r[1].satisfied);
  CHECK(r[2].satisfied);
}

TEST_CASE("R26 identities fail for non-normal X and hold for normal X") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  const auto bad = check("R26", matrices(i2, i2, jordan2()), {});
  REQUIRE(bad.size() == 2);
  // The dilation is self-adjoint: its radius is ||X|| = 1, not w(X) = 1/2.
  CHECK(std::abs(bad[0].lhs - 0.5) <= 1e-8);
  CHECK(!bad[0].satisfied);
  CHECK(!bad[1].satisfied);

  const ComplexMatrix n = ComplexMatrix::diagonal({Complex(0, 2), -1.0});
  CHECK(all_satisfied(check("R26", matrices(i2, i2, n), {})));
}

TEST_CASE("chain consistency between R11, R12 and R04") {
  RngStream rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const OperandBundle o = matrices(numrad::test::random_ginibre(rng, n), numrad::test::random_ginibre(rng, n));
    for (double r : {1.0, 2.0}) {
      const auto r11 = check("R11", o, with_r(r));
      const auto r12 = check("R12", o, with_r(r));
      CHECK(std::abs(r11[0].rhs - r12[0].lhs) <= 1e-12 * std::max(1.0, r12[0].lhs));
      CHECK(r11[0].lhs <= r12[0].rhs + r11[0].tolerance + r12[0].tolerance);
      CHECK(r12[0].satisfied);
    }
  }
}

TEST_CASE("equality witnesses") {
  RngStream rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix h = numrad::test::random_hermitian(rng, 2 + rng.below(10));
    CHECK(check("R01", matrices(h), {})[1].slack <= 1e-8);
  }
  const ComplexMatrix i3 = ComplexMatrix::identity(3);
  CHECK(std::abs(check("R11", matrices(i3, i3), with_r(1.0))[0].slack) <= 1e-10);
  const ComplexMatrix herm = numrad::test::random_hermitian(rng, 3);
  for (const CheckResult& r : check("R17", matrices(i3, i3, herm), with_r(2.0))) CHECK(r.slack <= 1e-8);
}

TEST_CASE("slack scale covariance") {
  RngStream rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = numrad::test::random_ginibre(rng, 2 + rng.below(6));
    const auto s01 = check("R01", matrices(a), {});
    const double s03 = check("R03", matrices(a), {})[0].slack;
    for (double c : {0.5, 2.0}) {
      const Complex phase = std::polar(c, 2.0 * std::numbers::pi * rng.uniform());
      const auto t01 = check("R01", matrices(phase * a), {});
      for (int link = 0; link < 2; ++link) {
        CHECK(std::abs(t01[link].slack - c * s01[link].slack) <= 1e-6 * std::max(1.0, std::abs(c * s01[link].slack)));
      }
      const double t03 = check("R03", matrices(phase * a), {})[0].slack;
      CHECK(std::abs(t03 - c * c * s03) <= 1e-6 * std::max(1.0, std::abs(c * c * s03)));
    }
  }
}

TEST_CASE("R07 right side is smallest at alpha one half on normal operands") {
  RngStream rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const OperandBundle o = matrices(numrad::test::random_normal(rng, 2 + rng.below(6)));
    for (double r : {1.0, 2.0}) {
      CheckParams p = with_r(r);
      p.alpha = 0.5;
      const double mid = check("R07", o, p)[0].rhs;
      for (double edge : {0.0, 1.0}) {
        p.alpha = edge;
        CHECK(mid <= check("R07", o, p)[0].rhs + 1e-8 * std::max(1.0, mid));
      }
    }
  }
}

TEST_CASE("vector identities on random inputs") {
  RngStream rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    OperandBundle o;
    o.x = rng.gaussian_vector(n);
    o.y = rng.gaussian_vector(n);
    o.e = rng.unit_vector(n);
    const auto pol = check("R23", o, {});
    CHECK(pol[0].lhs <= 1e-12 * std::max(1.0, norm(*o.x) * norm(*o.y)));
    const auto cs = check("R22", o, {});
    CHECK(cs[0].satisfied);
    CHECK(cs[1].satisfied);
  }
}

TEST_CASE("scalar Young entry records the printed middle term") {
  OperandBundle o;
  o.a = 0.5;
  o.b = 3.0;
  CheckParams p;
  p.p = 3.0;
  p.q = 1.5;
  p.r = 2.0;
  const auto r = check("R19", o, p);
  REQUIRE(r.size() == 4);
  CHECK(all_satisfied(r));
  // Printed a^p/p + a^q/q = 0.0417 + 0.2357 < ab = 1.5.
  CHECK(r[2].notes.find("lower fails") != std::string::npos);
}
