#pragma once

// Standard normal density, CDF, quantile, and moments of Z given Z > -delta.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "randlv/error.hpp"

namespace randlv {

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Phi^-1(p). Acklam's rational approximation followed by one Halley step
/// against the erfc-based CDF.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1), got " + std::to_string(p));

  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                           1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                           6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                           -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                           3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement. In the upper tail work with the complement to keep digits.
  const double e = x > 0.0 ? (1.0 - p) - std_normal_cdf(-x) : std_normal_cdf(x) - p;
  const double u = e / std_normal_pdf(x);
  return x - u / (1.0 + 0.5 * x * u);
}

/// Moments of a standard normal conditioned on Z > -delta.
struct TruncatedMoments {
  double delta = 0.0;
  double mean = 0.0;       // E[Z | Z > -delta]   = phi(delta) / Phi(delta)
  double second = 0.0;     // E[Z^2 | Z > -delta] = 1 - delta phi(delta) / Phi(delta)
  double tail_prob = 0.0;  // P(Z > -delta)       = Phi(delta)
};

inline TruncatedMoments truncated_moments(double delta) {
  const double tail = std_normal_cdf(delta);
  if (!(tail > 1e-300)) {
    throw DomainError("truncated_moments: Phi(delta) underflows for delta = " + std::to_string(delta));
  }
  const double ratio = std_normal_pdf(delta) / tail;
  return {delta, ratio, 1.0 - delta * ratio, tail};
}

}  // namespace randlv
