#pragma once

#include <cstdint>
#include <string>

#include "numrad/linalg.hpp"
#include "numrad/matrix.hpp"

namespace numrad {

/// T = isometry * modulus, with isometry the canonical partial isometry that
/// vanishes on ker|T|.
struct PolarFactors {
  ComplexMatrix isometry;
  ComplexMatrix modulus;
};

/// Relative singular-value threshold defining range(|T|).
inline constexpr double kRangeThreshold = 1e-10;

/// From T = W S V*: modulus V S V*, isometry W P V* where P keeps the singular
/// values above kRangeThreshold * sigma_max.
PolarFactors polar_decompose(const ComplexMatrix& t);

/// |T|^{1/2} U |T|^{1/2}. Same code path as aluthge_general(t, 0.5).
ComplexMatrix aluthge(const ComplexMatrix& t);

/// |T|^alpha U |T|^{1 - alpha}, with 0^0 := 0 so |T|^0 is the range projection.
/// Throws AlphaOutOfRange unless 0 <= alpha <= 1.
ComplexMatrix aluthge_general(const ComplexMatrix& t, double alpha);

/// (A^alpha X B^{1-alpha} + A^{1-alpha} X B^alpha) / 2 for PSD A, B.
/// Throws NotPositive, DimensionMismatch, AlphaOutOfRange.
ComplexMatrix heinz_mean(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& b, double alpha);

/// Nonnegative maps on [0, inf) with f(t) g(t) = t.
struct FunctionPair {
  ScalarMap f;
  ScalarMap g;
  std::string description;
};

/// f(t) = t^s, g(t) = t^{1-s}, both with 0^0 := 0. Throws OutOfRange unless
/// 0 <= s <= 1.
FunctionPair power_pair(double s);

/// Checks f g = id within 1e-10 max(1, t) and f, g >= 0 on 64 points of [0, 1e3].
bool satisfies_pair_identity(const FunctionPair& pair);

/// min over unit x of ||A^2 x|| - ||A x||^2, sampled over the standard basis
/// and `samples` seeded random unit vectors. A negative value refutes
/// paranormality; a nonnegative one is only evidence for it.
/// Throws OutOfRange when samples == 0.
double paranormal_evidence(const ComplexMatrix& a, std::size_t samples, std::uint64_t seed);

}  // namespace numrad
