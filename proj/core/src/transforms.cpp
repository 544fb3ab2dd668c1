#include "numrad/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "numrad/error.hpp"
#include "numrad/random.hpp"

namespace numrad {

namespace {

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::AlphaOutOfRange, "alpha = " + std::to_string(alpha) + " outside [0, 1]");
  }
}

// V diag(phi(sigma_i)) V* over the retained singular values.
ComplexMatrix right_function(const SvdFactors& f, const std::vector<bool>& keep, double power) {
  const std::size_t n = f.right.size();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!keep[k]) continue;
    const double w = spectral_pow(f.singular_values[k], power);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = w * f.right(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(f.right(j, k));
    }
  }
  return hermitian_part(out);
}

std::vector<bool> retained(const SvdFactors& f) {
  const double smax = f.singular_values.empty() ? 0.0 : f.singular_values.front();
  std::vector<bool> keep(f.singular_values.size());
  for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = f.singular_values[k] > kRangeThreshold * smax;
  return keep;
}

ComplexMatrix isometry_from(const SvdFactors& f, const std::vector<bool>& keep) {
  const std::size_t n = f.right.size();
  ComplexMatrix u(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!keep[k]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex wi = f.left(i, k);
      for (std::size_t j = 0; j < n; ++j) u(i, j) += wi * std::conj(f.right(j, k));
    }
  }
  return u;
}

}  // namespace

PolarFactors polar_decompose(const ComplexMatrix& t) {
  const SvdFactors f = svd(t);
  const std::vector<bool> keep = retained(f);
  return {isometry_from(f, keep), right_function(f, keep, 1.0)};
}

ComplexMatrix aluthge(const ComplexMatrix& t) { return aluthge_general(t, 0.5); }

ComplexMatrix aluthge_general(const ComplexMatrix& t, double alpha) {
  require_alpha(alpha);
  const SvdFactors f = svd(t);
  const std::vector<bool> keep = retained(f);
  const ComplexMatrix u = isometry_from(f, keep);
  return right_function(f, keep, alpha) * u * right_function(f, keep, 1.0 - alpha);
}

ComplexMatrix heinz_mean(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& b, double alpha) {
  if (a.size() != x.size() || b.size() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "heinz_mean operands differ in size");
  }
  require_alpha(alpha);
  const HermitianSpectrum sa = psd_spectrum(a);
  const HermitianSpectrum sb = psd_spectrum(b);
  const ComplexMatrix first = matrix_power_psd(sa, alpha) * x * matrix_power_psd(sb, 1.0 - alpha);
  if (alpha == 0.5) return first;
  const ComplexMatrix second = matrix_power_psd(sa, 1.0 - alpha) * x * matrix_power_psd(sb, alpha);
  return 0.5 * (first + second);
}

FunctionPair power_pair(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::OutOfRange, "power pair exponent outside [0, 1]");
  char label[64];
  std::snprintf(label, sizeof label, "t^%.17g, t^%.17g", s, 1.0 - s);
  return {[s](double t) { return spectral_pow(t, s); }, [s](double t) { return spectral_pow(t, 1.0 - s); }, label};
}

bool satisfies_pair_identity(const FunctionPair& pair) {
  constexpr int kPoints = 64;
  for (int k = 0; k < kPoints; ++k) {
    const double t = 1e3 * static_cast<double>(k) / (kPoints - 1);
    const double f = pair.f(t);
    const double g = pair.g(t);
    if (!(f >= 0.0 && g >= 0.0)) return false;
    if (!(std::abs(f * g - t) <= 1e-10 * std::max(1.0, t))) return false;
  }
  return true;
}

double paranormal_evidence(const ComplexMatrix& a, std::size_t samples, std::uint64_t seed) {
  require_finite(a, "paranormal_evidence input");
  if (samples == 0) throw Error(ErrorKind::OutOfRange, "need at least one sample");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  const ComplexMatrix a2 = a * a;
  auto gap = [&](const Vector& x) {
    const double ax = norm(a * x);
    return norm(a2 * x) - ax * ax;
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) best = std::min(best, gap(unit_vector(n, k)));
  RngStream rng(seed);
  for (std::size_t i = 0; i < samples; ++i) best = std::min(best, gap(rng.unit_vector(n)));
  return best;
}

}  // namespace numrad
