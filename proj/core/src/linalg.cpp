#include "numrad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "numrad/error.hpp"

namespace numrad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Unitary 2x2 G = [[c, s], [-s conj(e), c conj(e)]] that diagonalises the
// Hermitian block [[app, apq], [conj(apq), aqq]] via G* H G.
struct Rotation {
  double c = 1.0;
  double s = 0.0;
  Complex phase = 1.0;  // e = apq / |apq|
  double t = 0.0;
};

Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  Rotation rot;
  const double b = std::abs(apq);
  rot.phase = apq / b;
  const double tau = (aqq - app) / (2.0 * b);
  rot.t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  rot.c = 1.0 / std::sqrt(1.0 + rot.t * rot.t);
  rot.s = rot.t * rot.c;
  return rot;
}

// Columns p, q of m are replaced by [m_p m_q] G.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const Complex ce = std::conj(r.phase);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = r.c * mp - r.s * ce * mq;
    m(k, q) = r.s * mp + r.c * ce * mq;
  }
}

// Rows p, q of m are replaced by G* [m_p; m_q].
void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = r.c * mp - r.s * r.phase * mq;
    m(q, k) = r.s * mp + r.c * r.phase * mq;
  }
}

// Reduces a Hermitian matrix to real symmetric tridiagonal form (diagonal d,
// squared off-diagonal e2) with Householder reflections.
void tridiagonalize(ComplexMatrix a, std::vector<double>& d, std::vector<double>& e2) {
  const std::size_t n = a.size();
  d.assign(n, 0.0);
  e2.assign(n > 0 ? n - 1 : 0, 0.0);
  Vector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // trailing block starts at k+1
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * xnorm;
    // v = x - alpha e1, normalised.
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] -= alpha;
    const double vn = norm(std::span<const Complex>(v.data(), m));
    if (vn == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) v[i] /= vn;
    // Column/row k: becomes alpha at (k+1, k), zero below.
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
    // Trailing block: B <- B - v w* - w v*, w = 2(p - K v), p = B v, K = v* B v.
    for (std::size_t i = 0; i < m; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      p[i] = s;
    }
    double kk = 0.0;
    for (std::size_t i = 0; i < m; ++i) kk += (std::conj(v[i]) * p[i]).real();
    for (std::size_t i = 0; i < m; ++i) p[i] = 2.0 * (p[i] - kk * v[i]);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        a(k + 1 + i, k + 1 + j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) e2[i] = std::norm(a(i + 1, i));
}

// Number of eigenvalues of the tridiagonal matrix strictly below x.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e2, double x) {
  std::size_t count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = kEps * (std::abs(d[i - 1]) + std::abs(x)) + std::numeric_limits<double>::min();
    q = d[i] - x - e2[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_max_eigenvalue(const std::vector<double>& d, const std::vector<double>& e2) {
  const std::size_t n = d.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::sqrt(e2[i - 1]);
    if (i + 1 < n) r += std::sqrt(e2[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double width = std::max(std::abs(lo), std::abs(hi));
  lo -= kEps * width + std::numeric_limits<double>::min();
  hi += kEps * width + std::numeric_limits<double>::min();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(d, e2, mid) == n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void complete_orthonormal(ComplexMatrix& w, std::vector<bool>& filled) {
  const std::size_t n = w.size();
  for (std::size_t col = 0; col < n; ++col) {
    if (filled[col]) continue;
    Vector best;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      Vector cand = unit_vector(n, k);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!filled[j]) continue;
          const Vector wj = w.column(j);
          cand = axpy(-inner(cand, wj), wj, cand);
        }
      }
      const double nc = norm(cand);
      if (nc > best_norm) {
        best_norm = nc;
        best = std::move(cand);
      }
      if (best_norm > 0.5) break;
    }
    w.set_column(col, normalized(best));
    filled[col] = true;
  }
}

}  // namespace

ComplexMatrix HermitianSpectrum::reconstruct() const {
  const std::size_t n = eigenvectors.size();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
      m(i, j) = s;
    }
  return m;
}

ComplexMatrix SvdFactors::reconstruct() const {
  const std::size_t n = left.size();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += left(i, k) * singular_values[k] * std::conj(right(j, k));
      m(i, j) = s;
    }
  return m;
}

HermitianSpectrum hermitian_eig(const ComplexMatrix& h) {
  require_finite(h, "hermitian_eig input");
  const std::size_t n = h.size();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double frob = a.frobenius_norm();
  const std::size_t budget = 100 * n * n;
  std::size_t rotations = 0;

  if (frob > 0.0) {
    for (;;) {
      bool rotated = false;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double b = std::abs(apq);
          if (b == 0.0) continue;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          if (b <= kEps * 0.5 * std::sqrt(std::abs(app * aqq)) || b <= 1e-3 * kEps * frob) {
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            continue;
          }
          if (++rotations > budget) {
            throw Error(ErrorKind::ConvergenceFailure,
                        "Jacobi exceeded " + std::to_string(budget) + " rotations");
          }
          const Rotation r = jacobi_rotation(app, aqq, apq);
          rotate_columns(a, p, q, r);
          rotate_rows(a, p, q, r);
          a(p, p) = app - r.t * b;
          a(q, q) = aqq + r.t * b;
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          rotate_columns(v, p, q, r);
          rotated = true;
        }
      }
      if (!rotated) break;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianSpectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

double hermitian_max_eigenvalue(const ComplexMatrix& h) {
  require_finite(h, "hermitian_max_eigenvalue input");
  const std::size_t n = h.size();
  if (n == 0) return 0.0;
  if (n == 1) return h(0, 0).real();
  std::vector<double> d, e2;
  tridiagonalize(hermitian_part(h), d, e2);
  return tridiagonal_max_eigenvalue(d, e2);
}

SvdFactors svd(const ComplexMatrix& a) {
  require_finite(a, "svd input");
  const std::size_t n = a.size();
  ComplexMatrix u = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  constexpr int kMaxSweeps = 80;
  constexpr double kOrthTol = 1e-15;

  for (int sweep = 0;; ++sweep) {
    if (sweep >= kMaxSweeps) {
      throw Error(ErrorKind::ConvergenceFailure, "one-sided Jacobi SVD did not converge");
    }
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          alpha += std::norm(u(k, p));
          beta += std::norm(u(k, q));
          gamma += std::conj(u(k, p)) * u(k, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kOrthTol * std::sqrt(alpha * beta)) continue;
        const Rotation r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(u, p, q, r);
        rotate_columns(v, p, q, r);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::norm(u(k, j));
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdFactors out;
  out.left = ComplexMatrix(n);
  out.right = ComplexMatrix(n);
  out.singular_values.resize(n);
  const double smax = n > 0 ? sigma[order[0]] : 0.0;
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v(i, j);
    if (sigma[j] > 1e-13 * smax && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < n; ++i) out.left(i, k) = u(i, j) / sigma[j];
      filled[k] = true;
    }
  }
  complete_orthonormal(out.left, filled);
  return out;
}

double operator_norm(const ComplexMatrix& a) {
  require_finite(a, "operator_norm input");
  if (a.empty()) return 0.0;
  // sigma_max^2 = lambda_max(A* A); the largest eigenvalue keeps full relative
  // accuracy, so this agrees with svd() to rounding.
  const double lmax = hermitian_max_eigenvalue(a.adjoint() * a);
  return std::sqrt(std::max(lmax, 0.0));
}

ComplexMatrix absolute_value(const ComplexMatrix& a) {
  const SvdFactors f = svd(a);
  const std::size_t n = a.size();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += f.right(i, k) * f.singular_values[k] * std::conj(f.right(j, k));
      m(i, j) = s;
    }
  return hermitian_part(m);
}

double spectral_pow(double t, double s) noexcept {
  if (t <= 0.0) return 0.0;
  if (s == 0.0) return 1.0;
  if (s == 1.0) return t;
  return std::pow(t, s);
}

HermitianSpectrum psd_spectrum(const ComplexMatrix& p) {
  HermitianSpectrum sp = hermitian_eig(p);
  double scale = 0.0;
  for (double l : sp.eigenvalues) scale = std::max(scale, std::abs(l));
  const double thr = kPsdThreshold * scale;
  for (double& l : sp.eigenvalues) {
    if (l < -thr) {
      throw Error(ErrorKind::NotPositive,
                  "eigenvalue " + std::to_string(l) + " below -1e-10*||P|| = " + std::to_string(-thr));
    }
    if (l <= thr) l = 0.0;
  }
  return sp;
}

ComplexMatrix apply_scalar_function_psd(const HermitianSpectrum& spectrum, const ScalarMap& f) {
  const std::size_t n = spectrum.eigenvectors.size();
  std::vector<double> fv(n);
  for (std::size_t k = 0; k < n; ++k) {
    fv[k] = f(spectrum.eigenvalues[k]);
    if (!std::isfinite(fv[k])) throw Error(ErrorKind::NonFinite, "spectral function returned non-finite value");
    if (fv[k] < 0.0) {
      throw Error(ErrorKind::FunctionNegative,
                  "f(" + std::to_string(spectrum.eigenvalues[k]) + ") = " + std::to_string(fv[k]));
    }
  }
  const ComplexMatrix& v = spectrum.eigenvectors;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (fv[k] == 0.0) continue;
        s += v(i, k) * fv[k] * std::conj(v(j, k));
      }
      m(i, j) = s;
      m(j, i) = std::conj(s);
    }
  for (std::size_t i = 0; i < n; ++i) m(i, i) = m(i, i).real();
  return m;
}

ComplexMatrix apply_scalar_function_psd(const ComplexMatrix& p, const ScalarMap& f) {
  return apply_scalar_function_psd(psd_spectrum(p), f);
}

ComplexMatrix matrix_power_psd(const HermitianSpectrum& spectrum, double s) {
  if (!std::isfinite(s) || s < 0.0) throw Error(ErrorKind::OutOfRange, "exponent must be finite and >= 0");
  return apply_scalar_function_psd(spectrum, [s](double t) { return spectral_pow(t, s); });
}

ComplexMatrix matrix_power_psd(const ComplexMatrix& p, double s) {
  return matrix_power_psd(psd_spectrum(p), s);
}

StructureFlags classify(const ComplexMatrix& a, double tol) {
  StructureFlags f;
  if (a.empty() || !a.all_finite()) return f;
  const std::size_t n = a.size();
  const SvdFactors sv = svd(a);
  const double nrm = sv.singular_values.front();
  const double scale = std::max(1.0, nrm);
  const ComplexMatrix adj = a.adjoint();

  f.hermitian = (a - adj).frobenius_norm() <= tol * scale;
  if (f.hermitian) {
    const HermitianSpectrum sp = hermitian_eig(a);
    f.psd = sp.min_eigenvalue() >= -tol * scale;
  }
  const ComplexMatrix aa = a * adj;
  const ComplexMatrix a_a = adj * a;
  f.normal = (aa - a_a).frobenius_norm() <= tol * scale * scale;
  f.unitary = (a_a - ComplexMatrix::identity(n)).frobenius_norm() <= tol * scale;
  f.invertible = sv.singular_values.back() > tol * scale;
  return f;
}

}  // namespace numrad
