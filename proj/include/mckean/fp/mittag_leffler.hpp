#pragma once

#include <cmath>
#include <limits>

#include "mckean/errors.hpp"

namespace mckean::fp {

inline constexpr double kMittagLefflerMaxArg = 30.0;

/// E_η(z) = Σ_k z^k / Γ(ηk + 1) by direct summation.
///
/// Throws RangeError when |z| > 30, when a term overflows a double, or when
/// the alternating series for z < 0 cancels so badly that roundoff of its
/// largest term would exceed 1e-12 absolute.
inline double mittag_leffler(double eta, double z) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("Mittag-Leffler index η must be > 0");
  if (!std::isfinite(z) || std::abs(z) > kMittagLefflerMaxArg)
    throw RangeError("Mittag-Leffler argument outside |z| <= 30");
  if (z == 0.0) return 1.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double logz = std::log(std::abs(z));
  double sum = 1.0, biggest = 1.0, prev = 1.0;
  bool past_peak = false;
  for (long k = 1;; ++k) {
    const double arg = eta * static_cast<double>(k) + 1.0;
    const double logmag = static_cast<double>(k) * logz - std::lgamma(arg);
    if (logmag > 700.0) throw RangeError("Mittag-Leffler series overflows a double");
    double mag;
    if (arg < 170.0 && k < 300)
      mag = std::pow(std::abs(z), static_cast<double>(k)) / std::tgamma(arg);
    else
      mag = std::exp(logmag);
    const double term = (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
    sum += term;
    biggest = std::max(biggest, mag);
    if (mag < prev) past_peak = true;
    prev = mag;
    if (past_peak && mag <= 1e-17 * std::abs(sum)) break;
    if (past_peak && mag == 0.0) break;
  }
  if (z < 0.0 && biggest * eps * 8.0 > 1e-12) throw RangeError("Mittag-Leffler series for negative z loses precision");
  return sum;
}

} // namespace mckean::fp
