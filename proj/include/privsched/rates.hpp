#pragma once

#include <vector>

#include "privsched/channel.hpp"

// Gains to rates, pairwise privacy rates, and the imperfect-CSI outage
// margin computed from the Bayesian posterior of each cross gain.

namespace privsched {

// log2(1 + P*h) bits per channel use.
double rate_of_gain(double h, double P);

// Securable rate against one eavesdropper: max(0, r_up - r_cross).
double privacy_rate_pair(double r_up, double r_cross);

struct RateView {
  std::vector<double> r_up;         // n uplink rates
  std::vector<double> r_cross;      // n*(n-1) cross rates, same layout as gains
  std::vector<double> r_priv_pair;  // n*(n-1) pairwise privacy rates
  std::vector<double> r_priv;       // n worst-case privacy rates, min over i
  std::vector<double> r_cross_max;  // n, max over i of r_cross (0 when n = 1)
};

// Rates of the TRUE gains of one block. A single-node network has no
// eavesdropper: the min over the empty set is the uplink rate itself.
RateView rate_view(const ChannelBlock& blk, int n, double P);

// Conditional law of a true cross gain given its noisy estimate. The
// exponential prior (mean mu) times the Gaussian likelihood is, after
// completing the square, a Normal(est - sigma^2/mu, sigma^2) restricted to
// h >= 0.
struct PosteriorParams {
  double loc = 0.0;
  double scale = 0.0;
};

// sigma must be > 0 here; sigma = 0 is the degenerate case where the
// posterior is a point mass at max(est, 0) and callers bypass this type.
PosteriorParams posterior_of_gain(double est, double sigma, double prior_mean);

// P{ max_i R_i > rho | estimates } = 1 - prod_i F_i(g(rho)), with
// g(rho) = (2^rho - 1)/P the gain a cross rate rho corresponds to. Entries
// with scale = 0 are point masses at max(loc, 0). Non-increasing in rho.
double outage_probability(const std::vector<PosteriorParams>& posteriors,
                          double rho, double P);

// Smallest rho >= 0 with outage_probability(rho) <= gamma, by bisection to
// absolute tolerance 1e-9 in rho. gamma = 1 gives 0; gamma = 0 has no finite
// answer (the posteriors have unbounded support) and throws.
double outage_margin(const std::vector<PosteriorParams>& posteriors,
                     double gamma, double P);

// Margin when only the prior means of the cross gains are known: same
// quantile construction with the exponential priors in place of posteriors,
// i.e. smallest rho with 1 - prod_i (1 - e^{-g(rho)/mu_i}) <= gamma.
double outage_margin_prior(const std::vector<double>& cross_means,
                           double gamma, double P);

}  // namespace privsched
