#include "extree/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "extree/error.hpp"

namespace extree {

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(Errc::InvalidParameter, "trigamma requires a finite positive argument");
  }
  double shifted = 0.0;
  while (x < 10.0) {
    shifted += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // B2/x^3 + B4/x^5 + ... + B14/x^15, Horner in 1/x^2.
  double tail = 7.0 / 6.0;
  tail = tail * inv2 - 691.0 / 2730.0;
  tail = tail * inv2 + 5.0 / 66.0;
  tail = tail * inv2 - 1.0 / 30.0;
  tail = tail * inv2 + 1.0 / 42.0;
  tail = tail * inv2 - 1.0 / 30.0;
  tail = tail * inv2 + 1.0 / 6.0;
  const double series = inv + 0.5 * inv2 + tail * inv2 * inv;
  return series + shifted;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace extree
