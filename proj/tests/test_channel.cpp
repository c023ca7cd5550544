#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "privsched/channel.hpp"
#include "privsched/rng.hpp"

using namespace privsched;

namespace {

ChannelConfig symmetric_config(int n, double mu_up, double mu_cross,
                               double sigma = 0.0, std::uint64_t seed = 7) {
  ChannelConfig cfg;
  cfg.n = n;
  cfg.P = 1.0;
  cfg.uplink_means.assign(n, mu_up);
  cfg.cross_means.assign(static_cast<std::size_t>(n) * (n - 1), mu_cross);
  cfg.sigma = sigma;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("stream draws are reproducible and label-disjoint") {
  Rng a = Rng::stream(42, kStreamUplinkGain, pack_index(3, 1000));
  Rng b = Rng::stream(42, kStreamUplinkGain, pack_index(3, 1000));
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c = Rng::stream(42, kStreamCrossGain, pack_index(3, 1000));
  Rng d = Rng::stream(42, kStreamUplinkGain, pack_index(3, 1001));
  CHECK(a.next_u64() != c.next_u64());
  CHECK(a.next_u64() != d.next_u64());
}

TEST_CASE("uniform stays inside the open interval with the right moments") {
  Rng rng = Rng::stream(1, kStreamTieBreak, 0);
  const int N = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < N; ++i) {
    double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  double mean = sum / N;
  double var = sumsq / N - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(5e-3));
}

TEST_CASE("exponential and normal variates pass KS at the 1% level") {
  const std::size_t N = 100000;
  std::vector<double> xs(N);

  Rng rng = Rng::stream(9, kStreamUplinkGain, 0);
  for (auto& x : xs) x = rng.exponential(2.0);
  std::sort(xs.begin(), xs.end());
  double d_exp = oracles::ks_statistic(
      xs, [](double x) { return 1.0 - std::exp(-x / 2.0); });
  CHECK(d_exp < oracles::ks_critical_1pct(N));

  Rng nrng = Rng::stream(9, kStreamEstimateNoise, 0);
  for (auto& x : xs) x = nrng.normal();
  std::sort(xs.begin(), xs.end());
  double d_norm = oracles::ks_statistic(
      xs, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
  CHECK(d_norm < oracles::ks_critical_1pct(N));
}

TEST_CASE("below is unbiased over a small range") {
  Rng rng = Rng::stream(4, kStreamTieBreak, 99);
  int counts[5] = {0, 0, 0, 0, 0};
  const int N = 250000;
  for (int i = 0; i < N; ++i) ++counts[rng.below(5)];
  for (int c : counts) CHECK(std::abs(c - N / 5) < 1500);
}

TEST_CASE("cross_index enumerates ordered pairs bijectively") {
  const int n = 4;
  std::vector<int> seen(static_cast<std::size_t>(n) * (n - 1), 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      ++seen[cross_index(n, j, i)];
    }
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(cross_index(4, 0, 1) == 0);
  CHECK(cross_index(4, 1, 0) == 3);
  CHECK(cross_index(4, 3, 2) == 11);
}

TEST_CASE("sample_block is deterministic and respects sigma = 0") {
  ChannelConfig cfg = symmetric_config(3, 2.0, 1.0, 0.0);
  ChannelBlock a = sample_block(cfg, 17);
  ChannelBlock b = sample_block(cfg, 17);
  CHECK(a.h_up == b.h_up);
  CHECK(a.h_cross == b.h_cross);
  CHECK(a.h_cross_est == a.h_cross);

  // Out-of-order sampling sees the same draws.
  ChannelBlock late = sample_block(cfg, 40);
  sample_block(cfg, 3);
  ChannelBlock late2 = sample_block(cfg, 40);
  CHECK(late.h_up == late2.h_up);
  CHECK(late.h_cross == late2.h_cross);
}

TEST_CASE("toggling sigma never perturbs the true gains") {
  ChannelConfig clean = symmetric_config(4, 3.0, 0.7, 0.0);
  ChannelConfig noisy = symmetric_config(4, 3.0, 0.7, 0.5);
  for (std::uint64_t k : {0ull, 5ull, 123456ull}) {
    ChannelBlock a = sample_block(clean, k);
    ChannelBlock b = sample_block(noisy, k);
    CHECK(a.h_up == b.h_up);
    CHECK(a.h_cross == b.h_cross);
    CHECK(b.h_cross_est != b.h_cross);
  }
}

TEST_CASE("estimation noise has the configured scale") {
  const double sigma = 0.5;
  ChannelConfig cfg = symmetric_config(2, 2.0, 1.0, sigma);
  const int N = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < N / 2; ++k) {
    ChannelBlock blk = sample_block(cfg, k);
    for (std::size_t e = 0; e < blk.h_cross.size(); ++e) {
      double err = blk.h_cross_est[e] - blk.h_cross[e];
      sum += err;
      sumsq += err * err;
    }
  }
  double mean = sum / N;
  double var = sumsq / N - mean * mean;
  CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(double(N)));
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("per-node gain marginals match their exponentials") {
  ChannelConfig cfg = symmetric_config(2, 2.0, 1.0);
  cfg.uplink_means = {2.0, 4.0};
  const std::size_t N = 100000;
  std::vector<double> up0(N), cross01(N);
  double mean0 = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    ChannelBlock blk = sample_block(cfg, k);
    up0[k] = blk.h_up[0];
    cross01[k] = blk.h_cross[cross_index(2, 0, 1)];
    mean0 += blk.h_up[0];
  }
  std::sort(up0.begin(), up0.end());
  std::sort(cross01.begin(), cross01.end());
  CHECK(oracles::ks_statistic(
            up0, [](double x) { return 1.0 - std::exp(-x / 2.0); }) <
        oracles::ks_critical_1pct(N));
  CHECK(oracles::ks_statistic(
            cross01, [](double x) { return 1.0 - std::exp(-x); }) <
        oracles::ks_critical_1pct(N));
  CHECK(mean0 / N == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("sample mean over a million draws pins the configured mean") {
  ChannelConfig cfg = symmetric_config(1, 2.0, 1.0);
  cfg.cross_means.clear();
  double sum = 0.0;
  const int N = 1000000;
  for (int k = 0; k < N; ++k) sum += sample_block(cfg, k).h_up[0];
  double m = sum / N;
  CHECK(m > 1.99);
  CHECK(m < 2.01);
}

TEST_CASE("gain sequences are prefix-stable in n") {
  ChannelConfig small = symmetric_config(3, 2.0, 1.0);
  ChannelConfig big = symmetric_config(5, 2.0, 1.0);
  for (std::uint64_t k : {0ull, 9ull, 777ull}) {
    ChannelBlock a = sample_block(small, k);
    ChannelBlock b = sample_block(big, k);
    for (int j = 0; j < 3; ++j) CHECK(a.h_up[j] == b.h_up[j]);
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        if (i == j) continue;
        CHECK(a.h_cross[cross_index(3, j, i)] == b.h_cross[cross_index(5, j, i)]);
      }
    }
  }
}

TEST_CASE("sample_uplink_gains equals the block's uplink gains") {
  ChannelConfig cfg = symmetric_config(6, 2.5, 0.4, 0.5);
  for (std::uint64_t k : {0ull, 31ull, 4096ull}) {
    CHECK(sample_uplink_gains(cfg, k) == sample_block(cfg, k).h_up);
  }
}

TEST_CASE("sample_priors_uniform draws means inside the intervals") {
  ChannelConfig cfg = sample_priors_uniform(10, 2.0, 8.0, 0.0, 1.0, 13);
  REQUIRE(cfg.uplink_means.size() == 10);
  REQUIRE(cfg.cross_means.size() == 90);
  for (double m : cfg.uplink_means) {
    CHECK(m >= 2.0);
    CHECK(m <= 8.0);
  }
  for (double m : cfg.cross_means) {
    CHECK(m > 0.0);
    CHECK(m <= 1.0);
  }

  ChannelConfig again = sample_priors_uniform(10, 2.0, 8.0, 0.0, 1.0, 13);
  CHECK(cfg.uplink_means == again.uplink_means);
  CHECK(cfg.cross_means == again.cross_means);

  ChannelConfig degen = sample_priors_uniform(4, 2.0, 2.0, 0.5, 0.5, 13);
  for (double m : degen.uplink_means) CHECK(m == 2.0);
  for (double m : degen.cross_means) CHECK(m == 0.5);
}

TEST_CASE("drawn priors are prefix-stable in n") {
  ChannelConfig small = sample_priors_uniform(4, 2.0, 8.0, 0.0, 1.0, 21);
  ChannelConfig big = sample_priors_uniform(8, 2.0, 8.0, 0.0, 1.0, 21);
  for (int j = 0; j < 4; ++j) CHECK(small.uplink_means[j] == big.uplink_means[j]);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      if (i == j) continue;
      CHECK(small.cross_means[cross_index(4, j, i)] ==
            big.cross_means[cross_index(8, j, i)]);
    }
  }
}

TEST_CASE("config validation names the offending field") {
  ChannelConfig cfg = symmetric_config(3, 2.0, 1.0);
  CHECK_NOTHROW(validate(cfg));

  ChannelConfig bad = cfg;
  bad.n = 0;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("n"),
                       std::invalid_argument);
  bad = cfg;
  bad.P = 0.0;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("P"),
                       std::invalid_argument);
  bad = cfg;
  bad.uplink_means.pop_back();
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("uplink_means"),
                       std::invalid_argument);
  bad = cfg;
  bad.cross_means.push_back(1.0);
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("cross_means"),
                       std::invalid_argument);
  bad = cfg;
  bad.uplink_means[1] = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = cfg;
  bad.sigma = -0.1;
  CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("sigma"),
                       std::invalid_argument);
  CHECK_THROWS_AS(sample_priors_uniform(3, 8.0, 2.0, 0.0, 1.0, 1),
                  std::invalid_argument);
}
