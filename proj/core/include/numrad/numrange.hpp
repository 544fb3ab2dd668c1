#pragma once

#include <cstdint>
#include <vector>

#include "numrad/matrix.hpp"

namespace numrad {

/// Certified numerical radius: w(A) lies in [value, value + certified_error].
struct RadiusEstimate {
  double value = 0.0;
  double certified_error = 0.0;
  double theta_star = 0.0;  ///< maximising angle of lambda_max(Re(e^{i theta} A)), in [0, 2 pi)
  Vector witness;           ///< unit vector with |<A w, w>| >= value - 1e-12 * max(1, ||A||)
  std::size_t evaluations = 0;
};

/// w(A) = max_theta lambda_max(Re(e^{i theta} A)).
///
/// The angle axis is swept by best-first branch and bound. Every cell carries a
/// rigorous upper bound on the profile: the Lipschitz bound (constant ||A||,
/// from Weyl's inequality) and the supporting-line bound (the numerical range
/// lies in the wedge cut out by the supporting lines at the cell endpoints).
/// Cells are bisected until the largest bound is within tol of the best value.
///
/// Throws NonFinite, ToleranceTooSmall (tol < 1e-12 * max(1, ||A||), or the
/// evaluation budget would be exceeded).
RadiusEstimate numerical_radius(const ComplexMatrix& a, double tol = 1e-8);

/// Brute-force lower bound: max over N uniformly spaced angles of
/// lambda_max(Re(e^{i theta} A)). Each angle is screened with an LDL* inertia
/// count against the running maximum and only improving angles are solved with
/// the Jacobi eigensolver, so no code is shared with numerical_radius's profile.
/// Gap to w(A) is at most pi ||A|| / N. Requires N >= 4.
double radius_dense_oracle(const ComplexMatrix& a, std::size_t n_angles);

/// <A x, x>; throws NotUnit unless | ||x|| - 1 | <= 1e-12.
Complex rayleigh(const ComplexMatrix& a, std::span<const Complex> x);

/// Max of |<A x, x>| over k seeded random unit vectors together with the top
/// eigenvector of Re(e^{i theta*} A) from the grid maximiser. A valid lower
/// bound on w(A).
double radius_lower_bound_sampling(const ComplexMatrix& a, std::size_t k, std::uint64_t seed);

struct BoundaryPoint {
  double theta = 0.0;
  Complex point;
};

/// Supporting-line trace of the numerical range: for m equally spaced angles,
/// the point <A x, x> of the top eigenvector x of Re(e^{i theta} A).
std::vector<BoundaryPoint> numerical_range_boundary(const ComplexMatrix& a, std::size_t m);

}  // namespace numrad
