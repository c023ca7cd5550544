#pragma once

#include <array>
#include <cstdint>

// Deterministic random streams.
//
// Every random draw in the project comes from a named substream keyed by
// (master seed, stream label, element index). Distinct keys give streams
// that are independent for all practical purposes, so adding or removing a
// consumer of one stream never shifts the draws seen by another. This is
// what makes common-random-number sweeps work: runs at different sigma, n,
// or V see byte-identical true gain sequences wherever dimensions overlap.

namespace privsched {

// Stream labels. Keep these stable: changing one silently changes every
// sample path derived from a given seed.
enum StreamLabel : std::uint64_t {
  kStreamUplinkGain = 1,   // index packs (node, block)
  kStreamCrossGain = 2,    // index packs (pair, block)
  kStreamEstimateNoise = 3,
  kStreamPriorUplink = 4,  // index = node
  kStreamPriorCross = 5,   // index = pair
  kStreamTieBreak = 6,     // index = block
};

// Packs a per-element id with a block index into one stream index. Horizons
// stay far below 2^40 blocks and element ids below 2^24.
constexpr std::uint64_t pack_index(std::uint64_t element, std::uint64_t block) {
  return (element << 40) | block;
}

class Rng {
 public:
  // Direct construction from a 64-bit key (already mixed).
  explicit Rng(std::uint64_t key);

  // Substream addressed by (seed, label, index).
  static Rng stream(std::uint64_t seed, std::uint64_t label, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1): never 0, never 1, so inverse-CDF
  // transforms below are safe without special cases.
  double uniform();

  // Inverse-CDF exponential: h = -mean * ln(1 - U).
  double exponential(double mean);

  // Standard normal via the quantile applied to one uniform draw, so noise
  // consumes exactly one stream element per variate.
  double normal();

  // Uniform integer in [0, bound), bound >= 1. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace privsched
