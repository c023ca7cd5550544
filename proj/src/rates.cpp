#include "privsched/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privsched/math.hpp"

namespace privsched {

double rate_of_gain(double h, double P) {
  if (!(h >= 0.0)) throw std::domain_error("rate_of_gain: gain must be >= 0");
  if (!(P > 0.0)) throw std::domain_error("rate_of_gain: P must be > 0");
  return std::log1p(P * h) / kLn2;
}

double privacy_rate_pair(double r_up, double r_cross) {
  return std::max(0.0, r_up - r_cross);
}

RateView rate_view(const ChannelBlock& blk, int n, double P) {
  RateView v;
  v.r_up.resize(n);
  v.r_cross.resize(static_cast<std::size_t>(n) * (n - 1));
  v.r_priv_pair.resize(v.r_cross.size());
  v.r_priv.resize(n);
  v.r_cross_max.resize(n);

  for (int j = 0; j < n; ++j) {
    v.r_up[j] = rate_of_gain(blk.h_up[j], P);
  }
  for (int j = 0; j < n; ++j) {
    double worst = 0.0;  // largest cross rate seen by any listener
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      std::size_t idx = cross_index(n, j, i);
      v.r_cross[idx] = rate_of_gain(blk.h_cross[idx], P);
      v.r_priv_pair[idx] = privacy_rate_pair(v.r_up[j], v.r_cross[idx]);
      worst = std::max(worst, v.r_cross[idx]);
    }
    v.r_cross_max[j] = (n == 1) ? 0.0 : worst;
    v.r_priv[j] = privacy_rate_pair(v.r_up[j], v.r_cross_max[j]);
  }
  return v;
}

PosteriorParams posterior_of_gain(double est, double sigma, double prior_mean) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("posterior_of_gain: sigma = 0 is a point mass at max(est,0)");
  }
  if (!(prior_mean > 0.0)) {
    throw std::domain_error("posterior_of_gain: prior_mean must be > 0");
  }
  return {est - sigma * sigma / prior_mean, sigma};
}

namespace {

// Gain threshold a cross rate rho corresponds to.
double gain_of_rate(double rho, double P) { return std::expm1(rho * kLn2) / P; }

// prod_i F_i(g) with per-posterior constants precomputed once; the margin
// bisection below calls this ~35 times per node per block, so the inner
// loop stays lean: one log_normal_sf per live entry, early exit once the
// product cannot recover above the target.
struct CdfProduct {
  struct Entry {
    double loc, scale;
    double log_sf_at_zero;  // log Q(-loc/scale); 0 for point masses
  };
  std::vector<Entry> entries;

  explicit CdfProduct(const std::vector<PosteriorParams>& ps) {
    entries.reserve(ps.size());
    for (const auto& p : ps) {
      Entry e{p.loc, p.scale, 0.0};
      if (p.scale > 0.0) e.log_sf_at_zero = log_normal_sf(-p.loc / p.scale);
      entries.push_back(e);
    }
  }

  double eval(double g, double floor_product) const {
    double prod = 1.0;
    for (const auto& e : entries) {
      double f;
      if (e.scale == 0.0) {
        f = (g >= std::max(e.loc, 0.0)) ? 1.0 : 0.0;
      } else {
        f = -std::expm1(log_normal_sf((g - e.loc) / e.scale) - e.log_sf_at_zero);
      }
      prod *= f;
      if (prod < floor_product) return prod;
    }
    return prod;
  }
};

// Shared bisection: smallest rho with survival-product(g(rho)) >= 1-gamma.
template <class ProductFn>
double margin_bisect(ProductFn&& product_at_gain, double gamma, double P,
                     double hi_start) {
  constexpr double kTol = 1e-9;
  double target = 1.0 - gamma;

  double hi = std::max(hi_start, 1e-6);
  int guard = 0;
  while (product_at_gain(gain_of_rate(hi, P)) < target) {
    hi *= 2.0;
    if (++guard > 200) {
      throw std::runtime_error("outage_margin: bracket expansion failed");
    }
  }
  double lo = 0.0;
  while (hi - lo > kTol) {
    double mid = 0.5 * (lo + hi);
    if (product_at_gain(gain_of_rate(mid, P)) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double outage_probability(const std::vector<PosteriorParams>& posteriors,
                          double rho, double P) {
  if (!(rho >= 0.0)) throw std::domain_error("outage_probability: rho must be >= 0");
  if (posteriors.empty()) return 0.0;
  CdfProduct prod(posteriors);
  return 1.0 - prod.eval(gain_of_rate(rho, P), 0.0);
}

double outage_margin(const std::vector<PosteriorParams>& posteriors,
                     double gamma, double P) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::domain_error("outage_margin: gamma must lie in [0,1]");
  }
  if (gamma == 1.0 || posteriors.empty()) return 0.0;

  bool degenerate = std::all_of(posteriors.begin(), posteriors.end(),
                                [](const PosteriorParams& p) { return p.scale == 0.0; });
  if (degenerate) {
    // Point masses: the margin is the worst cross rate itself, at any gamma.
    double h_worst = 0.0;
    for (const auto& p : posteriors) h_worst = std::max(h_worst, std::max(p.loc, 0.0));
    return rate_of_gain(h_worst, P);
  }
  if (gamma == 0.0) {
    throw std::domain_error("outage_margin: gamma = 0 has no finite margin");
  }

  CdfProduct prod(posteriors);
  double target = 1.0 - gamma;
  double reach = 0.0;  // loc + 10 scale covers the posterior's upper tail
  for (const auto& p : posteriors) {
    reach = std::max(reach, p.loc + 10.0 * p.scale);
  }
  return margin_bisect(
      [&](double g) { return prod.eval(g, target); }, gamma, P,
      rate_of_gain(std::max(reach, 0.0), P));
}

double outage_margin_prior(const std::vector<double>& cross_means,
                           double gamma, double P) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::domain_error("outage_margin_prior: gamma must lie in [0,1]");
  }
  if (gamma == 1.0 || cross_means.empty()) return 0.0;
  if (gamma == 0.0) {
    throw std::domain_error("outage_margin_prior: gamma = 0 has no finite margin");
  }
  for (double m : cross_means) {
    if (!(m > 0.0)) throw std::domain_error("outage_margin_prior: means must be > 0");
  }

  double mu_max = *std::max_element(cross_means.begin(), cross_means.end());
  auto product = [&](double g) {
    double prod = 1.0;
    for (double mu : cross_means) prod *= -std::expm1(-g / mu);
    return prod;
  };
  return margin_bisect(product, gamma, P,
                       rate_of_gain(mu_max * std::log(1.0 / gamma) + 10.0 * mu_max, P));
}

}  // namespace privsched
