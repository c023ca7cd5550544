#pragma once

#include <span>
#include <vector>

#include "privsched/channel.hpp"
#include "privsched/rng.hpp"

// Private opportunistic scheduling: transmit from the node whose
// instantaneous uplink rate clears its best eavesdropper's mean cross rate
// by the most, idle if nobody clears it. Encoding over many such blocks
// secures p_j * (Rbar_M_j - Rbar_m_j) private bits per use for node j.

namespace privsched {

struct EavesdropperProfile {
  std::vector<int> best;          // argmax_i of mean cross rate; -1 when n == 1
  std::vector<double> mean_rate;  // that eavesdropper's mean cross rate, 0 when n == 1
};

// Best eavesdropper of each node from the configured means (closed form;
// the mean of log2(1+Ph) is monotone in the exponential mean).
EavesdropperProfile best_eavesdroppers(const ChannelConfig& cfg);

// Node with the largest positive score r_up[j] - r_bar_m[j], ties uniform
// at random; -1 (idle) when no score is positive.
int pos_schedule(std::span<const double> r_up, std::span<const double> r_bar_m,
                 Rng& tie_rng);

enum class Scheduler { kPos, kRoundRobin, kMaxUplink };

// Block decision of any of the three schedulers. Round-robin and max-uplink
// never idle; they exist as comparison baselines for the sum-rate optimality
// check and are scored with the same private-rate functional as POS.
int schedule_block(Scheduler s, std::span<const double> r_up,
                   std::span<const double> r_bar_m, std::uint64_t k, Rng& tie_rng);

struct PosProfile {
  std::vector<int> best_eav;
  std::vector<double> r_bar_m;
  std::vector<double> p_sched;    // fraction of blocks each node transmitted
  std::vector<double> r_bar_M;    // mean uplink rate given scheduled (0 if never)
  std::vector<double> priv_rate;  // max(0, p_sched * (r_bar_M - r_bar_m))
  double sum_priv = 0.0;          // sum of priv_rate over nodes
  double sum_priv_se = 0.0;       // standard error of sum_priv (per-block increments)
  double open_at_corner = 0.0;    // sum of p_sched * r_bar_m: open rate carried
                                  // by the randomization slots at the POS point
  double r_opp = 0.0;             // E[max_j r_up], the sum-rate outer bound
  double idle_frac = 0.0;
};

// Empirical profile over n_blocks fading blocks (true gains only; this
// scheduler never looks at estimates).
PosProfile pos_rates(const ChannelConfig& cfg, long long n_blocks,
                     Scheduler scheduler = Scheduler::kPos);

// E[max_j r_up] over the same sample path the profiles use.
double sum_rate_outer_bound(const ChannelConfig& cfg, long long n_blocks);

}  // namespace privsched
