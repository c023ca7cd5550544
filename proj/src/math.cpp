#include "privsched/math.hpp"

#include <cmath>
#include <stdexcept>

namespace privsched {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872421;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481;

// Acklam's rational approximation to the normal quantile. Relative error
// below 1.15e-9 on its own; one Halley step against erfc pushes it to
// machine precision.
double acklam_quantile(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  if (p < kLow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_normal_sf(double t) {
  if (t < 30.0) {
    // erfc(30/sqrt2) ~ 5e-198, still normal; the direct log is exact enough.
    return std::log(0.5 * std::erfc(t / kSqrt2));
  }
  // Mills asymptotic: Q(t) = phi(t)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + ...).
  double t2 = t * t;
  double series = -1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2);
  return -0.5 * t2 - std::log(t * kSqrt2Pi) + std::log1p(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  }
  double x = acklam_quantile(p);
  // Halley refinement: e is the CDF error, u the Newton step.
  double e = 0.5 * std::erfc(-x / kSqrt2) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

namespace {

// Modified Lentz evaluation of e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))).
// Machine precision for x >= 1; convergence degrades toward x = 0, where
// the std::expint series route takes over. The library's own std::expint
// drifts to ~1e-2 relative error past x ~ 100, so it is only trusted below
// the switch.
double exp_e1_scaled_cf(double x) {
  double b = x + 1.0;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double exp_e1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("exp_e1: x must be > 0");
  }
  if (x < 1.0) return -std::expint(-x);
  return std::exp(-x) * exp_e1_scaled_cf(x);
}

double exp_e1_scaled(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("exp_e1_scaled: x must be > 0");
  }
  if (x < 1.0) return std::exp(x) * -std::expint(-x);
  return exp_e1_scaled_cf(x);
}

double mean_rate_exponential(double P, double mu) {
  if (!(P > 0.0) || !(mu > 0.0)) {
    throw std::domain_error("mean_rate_exponential: P and mu must be > 0");
  }
  return exp_e1_scaled(1.0 / (P * mu)) / kLn2;
}

double mean_privacy_rate_exponential(double P, double mu1, double mu2) {
  if (!(P > 0.0) || !(mu1 > 0.0) || !(mu2 > 0.0)) {
    throw std::domain_error("mean_privacy_rate_exponential: P, mu1, mu2 must be > 0");
  }
  double a = 1.0 / (P * mu1);
  double b = 1.0 / (P * mu2);
  return (exp_e1_scaled(a) - exp_e1_scaled(a + b)) / kLn2;
}

double TruncatedNormal::survival(double x) const {
  if (x <= 0.0) return 1.0;
  double z = (x - loc) / scale;
  double a = -loc / scale;
  // Q(z)/Q(a) in log space; z >= a, so the exponent is <= 0 and cannot
  // overflow even when both tails underflow individually.
  return std::exp(log_normal_sf(z) - log_normal_sf(a));
}

double TruncatedNormal::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  double z = (x - loc) / scale;
  double a = -loc / scale;
  return -std::expm1(log_normal_sf(z) - log_normal_sf(a));
}

double TruncatedNormal::mean() const {
  // E = loc + scale * R(a) with R = phi/Q, the inverse Mills ratio.
  double a = -loc / scale;
  if (a < 35.0) {
    // erfc stays normal up to a ~ 38; below that the direct ratio is exact.
    double phi = std::exp(-0.5 * a * a) / kSqrt2Pi;
    return loc + scale * (phi / (0.5 * std::erfc(a / kSqrt2)));
  }
  // loc sits far below the support. loc + scale*R cancels to ulp noise of
  // the huge a, so return scale*(R - a) from the Mills expansion
  // R(a) = a + 1/a - 2/a^3 + 10/a^5 - 74/a^7 + 706/a^9 - ... directly.
  double v = 1.0 / (a * a);
  return (scale / a) *
         (1.0 + v * (-2.0 + v * (10.0 + v * (-74.0 + v * 706.0))));
}

double TruncatedNormal::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("TruncatedNormal::quantile: p must lie in (0,1)");
  }
  double a = -loc / scale;
  if (a < 8.0) {
    double lo_mass = normal_cdf(a);
    return loc + scale * normal_quantile(lo_mass + p * (1.0 - lo_mass));
  }
  // Nearly all prior mass sits below 0: work with upper-tail probabilities.
  double log_s = std::log1p(-p) + log_normal_sf(a);
  if (log_s > -700.0) {
    return loc + scale * (-normal_quantile(std::exp(log_s)));
  }
  // Solve -z^2/2 - log(z sqrt(2 pi)) = log_s by Newton on the Mills form.
  double z = std::sqrt(-2.0 * log_s);
  for (int it = 0; it < 4; ++it) {
    double f = log_normal_sf(z) - log_s;
    double dfdz = -z - 1.0 / z;  // d/dz log Q(z), Mills approximation
    z -= f / dfdz;
  }
  return loc + scale * z;
}

}  // namespace privsched
