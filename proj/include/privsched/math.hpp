#pragma once

// Scalar numerics shared across the library: standard-normal CDF/quantile,
// the exponential integral E1, closed-form fading-rate means, and the
// zero-truncated normal distribution used for cross-gain posteriors.

namespace privsched {

inline constexpr double kLn2 = 0.693147180559945309417232121458;

// Lower-tail standard normal CDF, Phi(x) = erfc(-x/sqrt(2))/2.
double normal_cdf(double x);

// log of the upper-tail standard normal probability, log P{N(0,1) > t}.
// Stable for any t (switches to the Mills asymptotic once erfc underflows).
double log_normal_sf(double t);

// Inverse of normal_cdf on (0,1). Accurate to ~1e-15 over the full range.
double normal_quantile(double p);

// E1(x) = integral_x^inf e^-t / t dt, for x > 0.
double exp_e1(double x);

// e^x * E1(x), computed without overflow for large x.
double exp_e1_scaled(double x);

// E[log2(1 + P h)] for h ~ Exponential(mean mu).
//
// Integrating the exponential survival function against d/dt log(1+Pt):
//
//   E[ln(1+Ph)] = int_0^inf e^{-t/mu} P/(1+Pt) dt = e^a E1(a),  a = 1/(P mu).
double mean_rate_exponential(double P, double mu);

// E[(log2(1+P h1) - log2(1+P h2))^+] for independent h1 ~ Exp(mu1),
// h2 ~ Exp(mu2).
//
// Conditioning on h2 and integrating the tail of h1 gives
//   P{R1 > R2 + t} = e^{-(2^t - 1) a} / (1 + 2^t mu2/mu1),
// and integrating over t >= 0 (substitute s = 2^t, split by partial
// fractions) collapses to
//   ln2 * E[(R1 - R2)^+] = e^a E1(a) - e^{a+b} E1(a+b),
// with a = 1/(P mu1), b = 1/(P mu2).
double mean_privacy_rate_exponential(double P, double mu1, double mu2);

// Normal(loc, scale^2) conditioned on being >= 0. scale must be > 0; the
// degenerate scale = 0 case (a point mass at max(loc, 0)) is handled by
// callers, not here.
struct TruncatedNormal {
  double loc = 0.0;
  double scale = 1.0;

  double cdf(double x) const;
  double survival(double x) const;
  double mean() const;
  double quantile(double p) const;  // p in (0,1)
};

}  // namespace privsched
