#include "privsched/single_user.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privsched/channel.hpp"
#include "privsched/rates.hpp"

namespace privsched {

bool separate_decide(const RatePair& r, const ThresholdPolicy& policy, Rng* rng) {
  double lhs = r.priv;
  double rhs = policy.lambda * r.up;
  if (lhs > rhs) return true;
  if (lhs < rhs) return false;
  switch (policy.tie_rule) {
    case TieRule::kPreferPrivate:
      return true;
    case TieRule::kPreferOpen:
      return false;
    case TieRule::kRandomize:
      if (rng == nullptr) {
        throw std::invalid_argument("separate_decide: kRandomize needs an rng");
      }
      return rng->uniform() < 0.5;
  }
  return false;
}

double threshold_open_rate(std::span<const RatePair> path,
                           const ThresholdPolicy& policy) {
  if (policy.tie_rule == TieRule::kRandomize) {
    throw std::invalid_argument("threshold_open_rate: deterministic tie rules only");
  }
  double sum = 0.0;
  for (const RatePair& r : path) {
    if (!separate_decide(r, policy)) sum += r.up;
  }
  return sum / static_cast<double>(path.size());
}

double solve_lambda_star(std::span<const RatePair> path, double alpha,
                         TieRule tie_rule) {
  if (path.empty()) throw std::invalid_argument("solve_lambda_star: empty path");
  if (tie_rule == TieRule::kRandomize) {
    throw std::invalid_argument("solve_lambda_star: deterministic tie rules only");
  }
  if (!(alpha >= 0.0)) throw std::domain_error("solve_lambda_star: alpha must be >= 0");

  auto open_at = [&](double lambda) {
    return threshold_open_rate(path, {lambda, tie_rule});
  };
  if (open_at(0.0) >= alpha) return 0.0;
  if (open_at(1.0) < alpha) {
    throw std::domain_error("solve_lambda_star: alpha exceeds the all-open rate");
  }
  // open_at is a non-decreasing step function of lambda; keep the invariant
  // open_at(hi) >= alpha > open_at(lo) and return the hi end.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (open_at(mid) >= alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

RegionPoint separate_region_point(std::span<const RatePair> path, double alpha,
                                  TieRule tie_rule) {
  double lambda = solve_lambda_star(path, alpha, tie_rule);
  ThresholdPolicy policy{lambda, tie_rule};
  double open_sum = 0.0, priv_sum = 0.0;
  for (const RatePair& r : path) {
    if (separate_decide(r, policy)) {
      priv_sum += r.priv;
    } else {
      open_sum += r.up;
    }
  }
  double inv = 1.0 / static_cast<double>(path.size());
  return {alpha, open_sum * inv, priv_sum * inv, lambda, EncodingMode::kSeparate};
}

RegionPoint joint_region_point(double mean_up, double mean_priv, double alpha) {
  if (!(alpha >= 0.0) || alpha > mean_up) {
    throw std::domain_error("joint_region_point: alpha must lie in [0, mean_up]");
  }
  double priv = std::clamp(mean_up - alpha, 0.0, mean_priv);
  double frac = (mean_priv > 0.0) ? priv / mean_priv : 0.0;
  return {alpha, alpha, priv, frac, EncodingMode::kJoint};
}

std::vector<RegionPoint> sweep_region(std::span<const RatePair> path,
                                      int n_alpha, EncodingMode mode,
                                      TieRule tie_rule) {
  if (n_alpha < 2) throw std::invalid_argument("sweep_region: need n_alpha >= 2");
  double mean_up = 0.0, mean_priv = 0.0;
  for (const RatePair& r : path) {
    mean_up += r.up;
    mean_priv += r.priv;
  }
  mean_up /= static_cast<double>(path.size());
  mean_priv /= static_cast<double>(path.size());

  std::vector<RegionPoint> points;
  points.reserve(n_alpha);
  for (int m = 0; m < n_alpha; ++m) {
    double alpha = mean_up * static_cast<double>(m) / (n_alpha - 1);
    if (mode == EncodingMode::kSeparate) {
      points.push_back(separate_region_point(path, alpha, tie_rule));
    } else {
      points.push_back(joint_region_point(mean_up, mean_priv, alpha));
    }
  }
  return points;
}

std::vector<RatePair> sample_rate_path(double mu_up, double mu_cross, double P,
                                       std::uint64_t seed, long long n_blocks) {
  ChannelConfig cfg;
  cfg.n = 2;
  cfg.P = P;
  cfg.uplink_means = {mu_up, mu_up};
  // Only the (0 -> 1) cross gain is read; its mirror gets the same mean.
  cfg.cross_means = {mu_cross, mu_cross};
  cfg.seed = seed;
  validate(cfg);

  std::vector<RatePair> path(n_blocks);
  for (long long k = 0; k < n_blocks; ++k) {
    ChannelBlock blk = sample_block(cfg, static_cast<std::uint64_t>(k));
    double r_up = rate_of_gain(blk.h_up[0], P);
    double r_cross = rate_of_gain(blk.h_cross[cross_index(2, 0, 1)], P);
    path[k] = {r_up, privacy_rate_pair(r_up, r_cross)};
  }
  return path;
}

}  // namespace privsched
