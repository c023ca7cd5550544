#include "privsched/pos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privsched/math.hpp"
#include "privsched/rates.hpp"

namespace privsched {

EavesdropperProfile best_eavesdroppers(const ChannelConfig& cfg) {
  EavesdropperProfile prof;
  prof.best.assign(cfg.n, -1);
  prof.mean_rate.assign(cfg.n, 0.0);
  for (int j = 0; j < cfg.n; ++j) {
    for (int i = 0; i < cfg.n; ++i) {
      if (i == j) continue;
      double r = mean_rate_exponential(cfg.P, cfg.cross_means[cross_index(cfg.n, j, i)]);
      if (r > prof.mean_rate[j] || prof.best[j] < 0) {
        prof.mean_rate[j] = r;
        prof.best[j] = i;
      }
    }
  }
  return prof;
}

namespace {

// Argmax with uniform tie-breaking in one pass: the m-th tied candidate
// replaces the incumbent with probability 1/m.
int argmax_random_ties(std::span<const double> x, Rng& tie_rng) {
  int best = 0;
  std::uint64_t ties = 1;
  for (int j = 1; j < static_cast<int>(x.size()); ++j) {
    if (x[j] > x[best]) {
      best = j;
      ties = 1;
    } else if (x[j] == x[best]) {
      ++ties;
      if (tie_rng.below(ties) == 0) best = j;
    }
  }
  return best;
}

}  // namespace

int pos_schedule(std::span<const double> r_up, std::span<const double> r_bar_m,
                 Rng& tie_rng) {
  std::vector<double> score(r_up.size());
  for (std::size_t j = 0; j < r_up.size(); ++j) score[j] = r_up[j] - r_bar_m[j];
  int best = argmax_random_ties(score, tie_rng);
  return score[best] > 0.0 ? best : -1;
}

int schedule_block(Scheduler s, std::span<const double> r_up,
                   std::span<const double> r_bar_m, std::uint64_t k, Rng& tie_rng) {
  switch (s) {
    case Scheduler::kPos:
      return pos_schedule(r_up, r_bar_m, tie_rng);
    case Scheduler::kRoundRobin:
      return static_cast<int>(k % r_up.size());
    case Scheduler::kMaxUplink:
      return argmax_random_ties(r_up, tie_rng);
  }
  return -1;
}

PosProfile pos_rates(const ChannelConfig& cfg, long long n_blocks, Scheduler scheduler) {
  validate(cfg);
  if (n_blocks < 1) throw std::invalid_argument("pos_rates: n_blocks must be >= 1");

  EavesdropperProfile eav = best_eavesdroppers(cfg);
  int n = cfg.n;

  std::vector<long long> count(n, 0);
  std::vector<double> sum_up_sched(n, 0.0);
  std::vector<double> r_up(n);
  double ropp_sum = 0.0;
  long long idle = 0;
  // Welford accumulation of the per-block private increment, for the
  // standard error of the sum rate.
  double inc_mean = 0.0, inc_m2 = 0.0;

  for (long long k = 0; k < n_blocks; ++k) {
    std::vector<double> h = sample_uplink_gains(cfg, static_cast<std::uint64_t>(k));
    for (int j = 0; j < n; ++j) r_up[j] = rate_of_gain(h[j], cfg.P);

    Rng tie_rng = Rng::stream(cfg.seed, kStreamTieBreak, static_cast<std::uint64_t>(k));
    int s = schedule_block(scheduler, r_up, eav.mean_rate,
                           static_cast<std::uint64_t>(k), tie_rng);
    double inc = 0.0;
    if (s >= 0) {
      ++count[s];
      sum_up_sched[s] += r_up[s];
      inc = r_up[s] - eav.mean_rate[s];
    } else {
      ++idle;
    }
    double delta = inc - inc_mean;
    inc_mean += delta / static_cast<double>(k + 1);
    inc_m2 += delta * (inc - inc_mean);

    ropp_sum += *std::max_element(r_up.begin(), r_up.end());
  }

  PosProfile prof;
  prof.best_eav = std::move(eav.best);
  prof.r_bar_m = std::move(eav.mean_rate);
  prof.p_sched.resize(n);
  prof.r_bar_M.resize(n);
  prof.priv_rate.resize(n);
  double inv = 1.0 / static_cast<double>(n_blocks);
  for (int j = 0; j < n; ++j) {
    prof.p_sched[j] = static_cast<double>(count[j]) * inv;
    prof.r_bar_M[j] = count[j] > 0 ? sum_up_sched[j] / static_cast<double>(count[j]) : 0.0;
    prof.priv_rate[j] =
        std::max(0.0, prof.p_sched[j] * (prof.r_bar_M[j] - prof.r_bar_m[j]));
    prof.sum_priv += prof.priv_rate[j];
    prof.open_at_corner += prof.p_sched[j] * prof.r_bar_m[j];
  }
  double inc_var = n_blocks > 1 ? inc_m2 / static_cast<double>(n_blocks - 1) : 0.0;
  prof.sum_priv_se = std::sqrt(inc_var * inv);
  prof.r_opp = ropp_sum * inv;
  prof.idle_frac = static_cast<double>(idle) * inv;
  return prof;
}

double sum_rate_outer_bound(const ChannelConfig& cfg, long long n_blocks) {
  validate(cfg);
  if (n_blocks < 1) throw std::invalid_argument("sum_rate_outer_bound: n_blocks must be >= 1");
  double sum = 0.0;
  std::vector<double> r_up(cfg.n);
  for (long long k = 0; k < n_blocks; ++k) {
    std::vector<double> h = sample_uplink_gains(cfg, static_cast<std::uint64_t>(k));
    for (int j = 0; j < cfg.n; ++j) r_up[j] = rate_of_gain(h[j], cfg.P);
    sum += *std::max_element(r_up.begin(), r_up.end());
  }
  return sum / static_cast<double>(n_blocks);
}

}  // namespace privsched
