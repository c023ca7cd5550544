#include "privsched/rng.hpp"

#include <cmath>

#include "privsched/math.hpp"

namespace privsched {

namespace {

// splitmix64 finalizer: a bijective avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One splitmix64 step, used to expand a key into generator state.
std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  return mix64(state);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t key) {
  std::uint64_t st = key;
  for (auto& word : s_) word = splitmix_next(st);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t label, std::uint64_t index) {
  // Fold label and index into the seed through full avalanche rounds; the
  // golden-ratio increments keep (seed, 0, 0) distinct from plain seed.
  std::uint64_t key = mix64(seed + 0x9e3779b97f4a7c15ULL);
  key = mix64(key ^ (label + 0x9e3779b97f4a7c15ULL));
  key = mix64(key ^ (index + 0x9e3779b97f4a7c15ULL));
  return Rng(key);
}

// xoshiro256++
std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53-bit mantissa, offset by half an ulp: values lie strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential(double mean) {
  return -mean * std::log1p(-uniform());
}

double Rng::normal() { return normal_quantile(uniform()); }

std::uint64_t Rng::below(std::uint64_t bound) {
  std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t x = next_u64();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace privsched
