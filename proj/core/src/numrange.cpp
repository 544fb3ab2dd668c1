#include "numrad/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "numrad/error.hpp"
#include "numrad/linalg.hpp"
#include "numrad/random.hpp"

namespace numrad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kInitialAngles = 64;
constexpr std::size_t kMaxEvaluations = 2'000'000;

double profile(const ComplexMatrix& a, double theta) {
  return hermitian_max_eigenvalue(rotated_real_part(a, theta));
}

struct Cell {
  double lo, hi;
  double f_lo, f_hi;
  double upper;
  bool operator<(const Cell& o) const { return upper < o.upper; }
};

// Upper bound of the profile on [lo, hi], given endpoint values that are each
// accurate to +-slack.
double cell_upper_bound(double lo, double hi, double f_lo, double f_hi, double lipschitz, double slack) {
  const double fa = f_lo + slack;
  const double fb = f_hi + slack;
  const double h = 0.5 * (hi - lo);
  const double lip = 0.5 * (fa + fb) + lipschitz * h;

  // Supporting lines at lo and hi, in coordinates rotated by the mid angle:
  // u cos h + v sin h = fa, u cos h - v sin h = fb. On the cell the profile is
  // bounded by max_{|phi| <= h} (u cos phi - v sin phi).
  const double sh = std::sin(h);
  const double ch = std::cos(h);
  if (sh <= 0.0 || ch <= 0.0) return lip;
  const double u = (fa + fb) / (2.0 * ch);
  const double v = (fa - fb) / (2.0 * sh);
  const double psi = std::atan2(v, u);
  double wedge = std::abs(psi) <= h ? std::hypot(u, v) : std::max(fa, fb);
  // fa - fb is exact for nearby values, so u, v and the hypot carry only a few
  // ulps of relative error each.
  wedge += 16.0 * kEps * (std::abs(u) + std::abs(v));
  return std::min(lip, wedge);
}

Vector top_eigenvector(const ComplexMatrix& h) {
  const HermitianSpectrum sp = hermitian_eig(h);
  Vector x = sp.eigenvectors.column(h.size() - 1);
  // Fix the phase: largest-magnitude component real and positive.
  std::size_t k = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) > std::abs(x[k])) k = i;
  if (std::abs(x[k]) > 0.0) {
    const Complex ph = std::conj(x[k]) / std::abs(x[k]);
    for (auto& z : x) z *= ph;
  }
  return normalized(x);
}

// Number of eigenvalues of h above x, from the signs of the LDL* pivots of
// h - x I (Sylvester's law of inertia). Returns -1 when a pivot is too small to
// trust, in which case the caller must fall back to a full eigensolve.
int count_eigenvalues_above(const ComplexMatrix& h, double x, double scale) {
  const std::size_t n = h.size();
  ComplexMatrix m = h;
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= x;
  int positive = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = m(k, k).real();
    if (std::abs(d) <= 64.0 * kEps * scale * static_cast<double>(n)) return -1;
    if (d > 0.0) ++positive;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex l = m(i, k) / d;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j <= i; ++j) m(i, j) -= l * std::conj(m(j, k));
    }
  }
  return positive;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

}  // namespace

RadiusEstimate numerical_radius(const ComplexMatrix& a, double tol) {
  require_finite(a, "numerical_radius input");
  RadiusEstimate out;
  const std::size_t n = a.size();
  if (n == 0) return out;

  const double lipschitz = operator_norm(a);
  if (!(tol >= 1e-12 * std::max(1.0, lipschitz))) {
    throw Error(ErrorKind::ToleranceTooSmall,
                "tolerance " + std::to_string(tol) + " below 1e-12 * max(1, ||A||)");
  }
  if (lipschitz == 0.0) {
    out.witness = unit_vector(n, 0);
    return out;
  }
  // Backward error of the tridiagonal eigenvalue kernel.
  const double slack = 4.0 * static_cast<double>(n) * kEps * lipschitz;

  std::vector<double> f0(kInitialAngles);
  double best = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  auto consider = [&](double theta, double f) {
    if (f > best) {
      best = f;
      best_theta = theta;
    }
  };
  for (std::size_t k = 0; k < kInitialAngles; ++k) {
    const double th = kTwoPi * static_cast<double>(k) / kInitialAngles;
    f0[k] = profile(a, th);
    consider(th, f0[k]);
  }
  out.evaluations = kInitialAngles;

  std::priority_queue<Cell> cells;
  for (std::size_t k = 0; k < kInitialAngles; ++k) {
    const double lo = kTwoPi * static_cast<double>(k) / kInitialAngles;
    const double hi = kTwoPi * static_cast<double>(k + 1) / kInitialAngles;
    const double fa = f0[k];
    const double fb = f0[(k + 1) % kInitialAngles];
    cells.push({lo, hi, fa, fb, cell_upper_bound(lo, hi, fa, fb, lipschitz, slack)});
  }

  while (!cells.empty() && cells.top().upper - best > tol) {
    if (out.evaluations >= kMaxEvaluations) {
      throw Error(ErrorKind::ToleranceTooSmall,
                  "certificate not reached within " + std::to_string(kMaxEvaluations) + " evaluations");
    }
    const Cell c = cells.top();
    cells.pop();
    const double mid = 0.5 * (c.lo + c.hi);
    if (mid <= c.lo || mid >= c.hi) {
      // Cannot split further; keep as is and stop refining.
      cells.push(c);
      break;
    }
    const double fm = profile(a, mid);
    ++out.evaluations;
    consider(mid, fm);
    cells.push({c.lo, mid, c.f_lo, fm, cell_upper_bound(c.lo, mid, c.f_lo, fm, lipschitz, slack)});
    cells.push({mid, c.hi, fm, c.f_hi, cell_upper_bound(mid, c.hi, fm, c.f_hi, lipschitz, slack)});
  }
  const double upper = cells.empty() ? best : std::max(best, cells.top().upper);

  out.theta_star = wrap_angle(best_theta);
  out.witness = top_eigenvector(rotated_real_part(a, out.theta_star));
  const double rho = std::abs(inner(a * out.witness, out.witness));
  out.value = std::max({best, rho, 0.0});
  out.certified_error = std::max(0.0, upper - out.value);
  return out;
}

double radius_dense_oracle(const ComplexMatrix& a, std::size_t n_angles) {
  require_finite(a, "radius_dense_oracle input");
  if (n_angles < 4) throw Error(ErrorKind::OutOfRange, "oracle needs at least 4 angles");
  if (a.empty()) return 0.0;
  const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());
  double best = -std::numeric_limits<double>::infinity();
  // Same angle set, visited coarse to fine so the running maximum is nearly
  // final early and few angles reach the eigensolver.
  std::size_t previous = 0;
  for (std::size_t stride : {std::size_t{1024}, std::size_t{32}, std::size_t{1}}) {
    for (std::size_t k = 0; k < n_angles; k += stride) {
      if (previous != 0 && k % previous == 0) continue;
      const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(n_angles);
      const ComplexMatrix h = rotated_real_part(a, th);
      const int above = best == -std::numeric_limits<double>::infinity() ? 1 : count_eigenvalues_above(h, best, scale);
      if (above != 0) best = std::max(best, hermitian_eig(h).max_eigenvalue());
    }
    previous = stride;
  }
  return std::max(best, 0.0);
}

Complex rayleigh(const ComplexMatrix& a, std::span<const Complex> x) {
  require_finite(x, "rayleigh vector");
  if (x.size() != a.size()) throw Error(ErrorKind::DimensionMismatch, "rayleigh vector length");
  const double nx = norm(x);
  if (!(std::abs(nx - 1.0) <= 1e-12)) {
    throw Error(ErrorKind::NotUnit, "vector norm " + std::to_string(nx) + " is not 1");
  }
  return inner(a * x, x);
}

double radius_lower_bound_sampling(const ComplexMatrix& a, std::size_t k, std::uint64_t seed) {
  require_finite(a, "radius_lower_bound_sampling input");
  if (k < 1) throw Error(ErrorKind::OutOfRange, "need at least one sample");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  RngStream rng(seed);
  double best = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vector x = rng.unit_vector(n);
    best = std::max(best, std::abs(inner(a * x, x)));
  }
  // Grid maximiser of the profile supplies one more (usually the best) candidate.
  double best_f = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (std::size_t j = 0; j < kInitialAngles; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / kInitialAngles;
    const double f = profile(a, th);
    if (f > best_f) {
      best_f = f;
      best_theta = th;
    }
  }
  const Vector x = top_eigenvector(rotated_real_part(a, best_theta));
  return std::max(best, std::abs(inner(a * x, x)));
}

std::vector<BoundaryPoint> numerical_range_boundary(const ComplexMatrix& a, std::size_t m) {
  require_finite(a, "numerical_range_boundary input");
  if (m < 3) throw Error(ErrorKind::OutOfRange, "need at least 3 boundary points");
  std::vector<BoundaryPoint> pts;
  pts.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    if (a.empty()) {
      pts.push_back({th, 0.0});
      continue;
    }
    const Vector x = top_eigenvector(rotated_real_part(a, th));
    pts.push_back({th, inner(a * x, x)});
  }
  return pts;
}

}  // namespace numrad
