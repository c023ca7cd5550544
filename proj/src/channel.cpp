#include "privsched/channel.hpp"

#include <stdexcept>
#include <string>

#include "privsched/rng.hpp"

namespace privsched {

namespace {

// Element ids for pack_index: nodes use their index, pairs get an id built
// from (j, i) alone. Ids must not depend on n, or the pair (j, i) would see
// different draws in a 5-node and a 10-node network with the same seed.
constexpr std::uint64_t kPairBase = 1u << 20;

constexpr std::uint64_t pair_id(int j, int i) {
  return kPairBase + (static_cast<std::uint64_t>(j) << 10) + i;
}

}  // namespace

void validate(const ChannelConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("channel config: n must be >= 1");
  if (cfg.n > 1024) throw std::invalid_argument("channel config: n must be <= 1024");
  if (!(cfg.P > 0.0)) throw std::invalid_argument("channel config: P must be > 0");
  if (!(cfg.sigma >= 0.0)) throw std::invalid_argument("channel config: sigma must be >= 0");
  if (cfg.uplink_means.size() != static_cast<std::size_t>(cfg.n)) {
    throw std::invalid_argument("channel config: uplink_means must have n entries, got " +
                                std::to_string(cfg.uplink_means.size()));
  }
  std::size_t pairs = static_cast<std::size_t>(cfg.n) * (cfg.n - 1);
  if (cfg.cross_means.size() != pairs) {
    throw std::invalid_argument("channel config: cross_means must have n*(n-1) entries, got " +
                                std::to_string(cfg.cross_means.size()));
  }
  for (double m : cfg.uplink_means) {
    if (!(m > 0.0)) throw std::invalid_argument("channel config: uplink_means must be > 0");
  }
  for (double m : cfg.cross_means) {
    if (!(m > 0.0)) throw std::invalid_argument("channel config: cross_means must be > 0");
  }
}

std::vector<double> sample_uplink_gains(const ChannelConfig& cfg, std::uint64_t k) {
  std::vector<double> h(cfg.n);
  for (int j = 0; j < cfg.n; ++j) {
    h[j] = Rng::stream(cfg.seed, kStreamUplinkGain, pack_index(j, k))
               .exponential(cfg.uplink_means[j]);
  }
  return h;
}

ChannelBlock sample_block(const ChannelConfig& cfg, std::uint64_t k) {
  int n = cfg.n;
  ChannelBlock blk;
  blk.k = k;
  blk.h_up = sample_uplink_gains(cfg, k);
  blk.h_cross.resize(static_cast<std::size_t>(n) * (n - 1));
  blk.h_cross_est.resize(blk.h_cross.size());

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      std::size_t idx = cross_index(n, j, i);
      std::uint64_t id = pair_id(j, i);
      blk.h_cross[idx] = Rng::stream(cfg.seed, kStreamCrossGain, pack_index(id, k))
                             .exponential(cfg.cross_means[idx]);
      blk.h_cross_est[idx] = blk.h_cross[idx];
      if (cfg.sigma > 0.0) {
        blk.h_cross_est[idx] +=
            cfg.sigma * Rng::stream(cfg.seed, kStreamEstimateNoise, pack_index(id, k)).normal();
      }
    }
  }
  return blk;
}

ChannelConfig sample_priors_uniform(int n, double up_lo, double up_hi,
                                    double cross_lo, double cross_hi,
                                    std::uint64_t seed) {
  if (n < 1 || n > 1024) {
    throw std::invalid_argument("sample_priors_uniform: n must be in [1, 1024]");
  }
  if (!(up_lo >= 0.0) || up_lo > up_hi || !(up_hi > 0.0)) {
    throw std::invalid_argument("sample_priors_uniform: bad uplink interval");
  }
  if (!(cross_lo >= 0.0) || cross_lo > cross_hi || !(cross_hi > 0.0)) {
    throw std::invalid_argument("sample_priors_uniform: bad cross interval");
  }

  ChannelConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.uplink_means.resize(n);
  cfg.cross_means.resize(static_cast<std::size_t>(n) * (n - 1));

  for (int j = 0; j < n; ++j) {
    Rng r = Rng::stream(seed, kStreamPriorUplink, j);
    double m = 0.0;
    do {
      m = up_lo + (up_hi - up_lo) * r.uniform();
    } while (m <= 0.0);
    cfg.uplink_means[j] = m;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      Rng r = Rng::stream(seed, kStreamPriorCross, pair_id(j, i));
      double m = 0.0;
      do {
        m = cross_lo + (cross_hi - cross_lo) * r.uniform();
      } while (m <= 0.0);
      cfg.cross_means[cross_index(n, j, i)] = m;
    }
  }
  return cfg;
}

}  // namespace privsched
