#pragma once

#include <functional>
#include <vector>

#include "numrad/matrix.hpp"

namespace numrad {

/// Eigen-decomposition H = V diag(eigenvalues) V* of a Hermitian matrix.
/// Eigenvalues ascend; eigenvector k is column k of `eigenvectors`.
struct HermitianSpectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
  double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  double min_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
};

/// A = left * diag(singular_values) * right*, singular values descending.
struct SvdFactors {
  ComplexMatrix left;
  std::vector<double> singular_values;
  ComplexMatrix right;

  ComplexMatrix reconstruct() const;
};

/// Cyclic complex Jacobi on the symmetrised input (H + H*)/2.
/// Throws NonFinite, or ConvergenceFailure once 100 n^2 rotations are spent.
HermitianSpectrum hermitian_eig(const ComplexMatrix& h);

/// Largest eigenvalue only, via Householder tridiagonalisation and Sturm
/// bisection. Much cheaper than hermitian_eig; used by the radius sweep.
double hermitian_max_eigenvalue(const ComplexMatrix& h);

/// One-sided (Hestenes) Jacobi SVD; null left directions are completed by
/// Gram-Schmidt so `left` is always unitary.
SvdFactors svd(const ComplexMatrix& a);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// |A| = (A*A)^{1/2}, assembled as V diag(sigma) V* from the SVD.
ComplexMatrix absolute_value(const ComplexMatrix& a);

/// Relative threshold below which eigenvalues of a PSD operand are treated as
/// zero (and negative ones are clamped). Anything more negative than
/// -kPsdThreshold * ||P|| is a NotPositive error.
inline constexpr double kPsdThreshold = 1e-10;

/// Spectral power with the range-projection convention 0^0 := 0
/// (t <= 0 maps to 0 for every exponent).
double spectral_pow(double t, double s) noexcept;

/// Eigen-decomposition of a PSD operand after clamping; eigenvalues within the
/// threshold are snapped to exactly zero.
HermitianSpectrum psd_spectrum(const ComplexMatrix& p);

/// P^s = V diag(lambda_i^s) V* with 0^0 := 0.
ComplexMatrix matrix_power_psd(const ComplexMatrix& p, double s);
ComplexMatrix matrix_power_psd(const HermitianSpectrum& spectrum, double s);

using ScalarMap = std::function<double(double)>;

/// f(P) = V diag(f(lambda_i)) V*; throws FunctionNegative if f is negative on
/// the spectrum.
ComplexMatrix apply_scalar_function_psd(const ComplexMatrix& p, const ScalarMap& f);
ComplexMatrix apply_scalar_function_psd(const HermitianSpectrum& spectrum, const ScalarMap& f);

struct StructureFlags {
  bool hermitian = false;
  bool psd = false;
  bool normal = false;
  bool unitary = false;
  bool invertible = false;

  bool none() const { return !(hermitian || psd || normal || unitary || invertible); }
  friend bool operator==(const StructureFlags&, const StructureFlags&) = default;
};

/// Each flag holds iff its defining residual is within tol relative to
/// max(1, ||A||) (squared scale for the quadratic residuals).
StructureFlags classify(const ComplexMatrix& a, double tol = 1e-10);

}  // namespace numrad
