#include "oceansrc/special_functions.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "oceansrc/error.hpp"
#include "oceansrc/waveguide.hpp"

namespace oceansrc {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesRadius = 12.0;

// Power series for J0 and the regular part of Y0.
void small_argument(cplx z, cplx& j0, cplx* y0) {
  const cplx w = 0.25 * z * z;
  cplx term = 1.0;
  cplx sum_j = 1.0;
  cplx sum_y = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -w / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    sum_j += term;
    sum_y -= harmonic * term;
    if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::abs(sum_j) + 1e-300) break;
  }
  j0 = sum_j;
  if (y0) *y0 = (2.0 / kPi) * ((std::log(0.5 * z) + kEulerGamma) * sum_j + sum_y);
}

// Hankel large-argument expansion; returns P and Q so that
// H0^(1,2)(z) = sqrt(2 / (pi z)) exp(+-i (z - pi/4)) (P +- i Q).
void large_argument(cplx z, cplx& p, cplx& q) {
  p = 1.0;
  q = 0.0;
  cplx term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double a = (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= a / (8.0 * k) / z;
    const double mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    // a_k / z^k with alternating sign pattern: P takes even k, Q odd k.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (mag < 1e-17) break;
  }
  q = -q;
}

}  // namespace

cplx bessel_j0(cplx z) {
  if (z.imag() == 0.0) return boost::math::cyl_bessel_j(0, z.real());
  if (std::abs(z) <= kSeriesRadius) {
    cplx j;
    small_argument(z, j, nullptr);
    return j;
  }
  // J0 is even; fold into the right half-plane.
  if (z.real() < 0.0) z = -z;
  cplx p, q;
  large_argument(z, p, q);
  const cplx pref = std::sqrt(2.0 / (kPi * z));
  const cplx phase = z - 0.25 * kPi;
  const cplx i(0.0, 1.0);
  const cplx h1 = pref * std::exp(i * phase) * (p + i * q);
  const cplx h2 = pref * std::exp(-i * phase) * (p - i * q);
  return 0.5 * (h1 + h2);
}

cplx bessel_y0(cplx z) {
  if (z.imag() == 0.0 && z.real() > 0.0) return boost::math::cyl_neumann(0, z.real());
  if (z == cplx(0.0)) throw DomainError("Y0 is singular at the origin");
  if (std::abs(z) <= kSeriesRadius || z.real() < 0.0) {
    cplx j, y;
    small_argument(z, j, &y);
    return y;
  }
  cplx p, q;
  large_argument(z, p, q);
  const cplx pref = std::sqrt(2.0 / (kPi * z));
  const cplx phase = z - 0.25 * kPi;
  const cplx i(0.0, 1.0);
  const cplx h1 = pref * std::exp(i * phase) * (p + i * q);
  const cplx h2 = pref * std::exp(-i * phase) * (p - i * q);
  return (h1 - h2) / (2.0 * i);
}

cplx hankel_h1_0(cplx z) {
  if (z == cplx(0.0)) throw DomainError("H0^(1) is singular at the origin");
  if (z.real() < 0.0) throw DomainError("H0^(1) requires Re z >= 0");
  if (z.imag() == 0.0) {
    const double x = z.real();
    return {boost::math::cyl_bessel_j(0, x), boost::math::cyl_neumann(0, x)};
  }
  if (z.real() == 0.0 && z.imag() > 0.0) {
    return cplx(0.0, -2.0 / kPi) * boost::math::cyl_bessel_k(0, z.imag());
  }
  if (std::abs(z) <= kSeriesRadius) {
    cplx j, y;
    small_argument(z, j, &y);
    return j + cplx(0.0, 1.0) * y;
  }
  cplx p, q;
  large_argument(z, p, q);
  const cplx i(0.0, 1.0);
  return std::sqrt(2.0 / (kPi * z)) * std::exp(i * (z - 0.25 * kPi)) * (p + i * q);
}

}  // namespace oceansrc
