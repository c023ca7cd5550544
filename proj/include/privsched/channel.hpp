#pragma once

#include <cstdint>
#include <vector>

// Block-fading uplink channel: n nodes, one base station, Rayleigh fading.
//
// Power gains are exponential and iid across blocks. h_up[j] is node j's
// gain to the base station; h_cross[cross_index(n,j,i)] is the gain from
// transmitter j to listening node i. Within a block all gains are constant.

namespace privsched {

struct ChannelConfig {
  int n = 1;
  double P = 1.0;
  std::vector<double> uplink_means;  // n entries, all > 0
  std::vector<double> cross_means;   // n*(n-1) entries, ordered pairs (j,i)
  double sigma = 0.0;                // stddev of cross-gain estimate noise
  std::uint64_t seed = 0;
};

// Flat position of ordered pair (j -> i), i != j, in a cross-gain array.
// Row j holds the n-1 listeners of transmitter j in increasing i.
constexpr std::size_t cross_index(int n, int j, int i) {
  return static_cast<std::size_t>(j) * (n - 1) + (i < j ? i : i - 1);
}

// Throws std::invalid_argument naming the offending field.
void validate(const ChannelConfig& cfg);

struct ChannelBlock {
  std::uint64_t k = 0;
  std::vector<double> h_up;
  std::vector<double> h_cross;
  std::vector<double> h_cross_est;  // h_cross + sigma*N(0,1); may be negative
};

// Gains of block k are pure functions of (seed, element, k): uplink gains,
// cross gains and estimate noise live on disjoint streams, and every element
// has its own substream. Toggling sigma, changing n, or sampling blocks out
// of order therefore never perturbs any other draw.
ChannelBlock sample_block(const ChannelConfig& cfg, std::uint64_t k);

// Just the uplink gains of block k, bit-identical to sample_block's h_up.
// Schedulers that never look at cross gains skip the n*(n-1) cross draws.
std::vector<double> sample_uplink_gains(const ChannelConfig& cfg, std::uint64_t k);

// Per-node / per-pair mean gains drawn uniformly from the given intervals.
// Each mean has its own substream keyed by node (or pair) id, so the first m
// nodes of an n-node config share means with an m-node config of equal seed.
// A cross mean drawn exactly 0 is redrawn (its exponential is degenerate);
// P and sigma are left at their defaults for the caller to fill.
ChannelConfig sample_priors_uniform(int n, double up_lo, double up_hi,
                                    double cross_lo, double cross_hi,
                                    std::uint64_t seed);

}  // namespace privsched
