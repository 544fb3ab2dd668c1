#include "numrad/random.hpp"

#include <cmath>
#include <numbers>

namespace numrad {

double RngStream::gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex RngStream::complex_gaussian() noexcept {
  const double re = gaussian();
  const double im = gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Vector RngStream::gaussian_vector(std::size_t n) {
  Vector v(n);
  for (auto& z : v) z = complex_gaussian();
  return v;
}

Vector RngStream::unit_vector(std::size_t n) {
  for (;;) {
    Vector v = gaussian_vector(n);
    if (norm(v) > 1e-8) return normalized(v);
  }
}

}  // namespace numrad
