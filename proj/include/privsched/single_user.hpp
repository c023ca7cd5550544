#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "privsched/rng.hpp"

// Single-node private/open rate regions over one eavesdropper: the threshold
// policy that optimally labels blocks private or open under separate
// encoding, and the time-sharing boundary of joint encoding. Both boundaries
// are evaluated on one fixed sample path so their comparison is noise-free.

namespace privsched {

enum class TieRule { kRandomize, kPreferPrivate, kPreferOpen };

// Label a block private iff its privacy-to-uplink rate ratio exceeds lambda.
// lambda = 0 keeps everything private (up to ties); lambda = 1 sends
// everything open, since the ratio never exceeds 1.
struct ThresholdPolicy {
  double lambda = 0.0;
  TieRule tie_rule = TieRule::kPreferOpen;
};

// Per-block rates of the single uplink: up = R(k) toward the base station,
// priv = securable rate against the eavesdropper, in [0, up].
struct RatePair {
  double up = 0.0;
  double priv = 0.0;
};

enum class EncodingMode { kSeparate, kJoint };

struct RegionPoint {
  double alpha = 0.0;      // required open rate
  double open_rate = 0.0;  // open rate actually delivered
  double priv_rate = 0.0;
  double param = 0.0;      // lambda* (separate) or private-slot fraction (joint)
  EncodingMode mode = EncodingMode::kSeparate;
};

// True iff the block is labeled private: priv > lambda * up, ties by rule.
// kRandomize requires an rng; the exact tie priv == lambda * up has measure
// zero on continuous fading but decides entire atoms on discrete grids.
bool separate_decide(const RatePair& r, const ThresholdPolicy& policy,
                     Rng* rng = nullptr);

// Mean open rate delivered by the threshold policy on the path,
// avg over blocks of (1 - I(k)) * up(k). Non-decreasing in lambda.
double threshold_open_rate(std::span<const RatePair> path,
                           const ThresholdPolicy& policy);

// Smallest lambda in [0,1] whose open rate reaches alpha on this path, by
// bisection to interval width 1e-12 (the open-rate step at each block is far
// coarser, so the returned lambda pins the optimal labeling). Deterministic
// tie rules only. Throws if alpha exceeds the all-open rate.
double solve_lambda_star(std::span<const RatePair> path, double alpha,
                         TieRule tie_rule);

// Boundary point of the separate-encoding region at open demand alpha.
RegionPoint separate_region_point(std::span<const RatePair> path, double alpha,
                                  TieRule tie_rule);

// Boundary point of the joint-encoding region from the path means: private
// rate min(mean_up - alpha, mean_priv), delivered by carrying private bits
// in a fraction param of blocks. alpha may not exceed mean_up.
RegionPoint joint_region_point(double mean_up, double mean_priv, double alpha);

// n_alpha boundary points on the shared grid alpha = linspace(0, mean_up).
std::vector<RegionPoint> sweep_region(std::span<const RatePair> path,
                                      int n_alpha, EncodingMode mode,
                                      TieRule tie_rule);

// Sample path for a one-transmitter, one-eavesdropper channel with mean
// gains (mu_up, mu_cross). Uses the standard channel streams of the seed.
std::vector<RatePair> sample_rate_path(double mu_up, double mu_cross, double P,
                                       std::uint64_t seed, long long n_blocks);

}  // namespace privsched
