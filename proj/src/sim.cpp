#include "privsched/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "privsched/rates.hpp"

namespace privsched {

void validate(const RunConfig& cfg) {
  validate(cfg.channel);
  if (!(cfg.V > 0.0)) throw std::invalid_argument("run config: V must be > 0");
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) {
    throw std::invalid_argument("run config: gamma must lie in [0,1)");
  }
  if (cfg.gamma == 0.0 && cfg.channel.n > 1 &&
      (cfg.csi == CsiMode::kMeanOnly ||
       (cfg.csi == CsiMode::kImperfect && cfg.channel.sigma > 0.0))) {
    // Unbounded cross-gain posteriors leak at any finite margin, so a zero
    // outage target is only meaningful with exact cross knowledge.
    throw std::invalid_argument(
        "run config: gamma = 0 needs perfect csi or noise-free estimates");
  }
  if (!(cfg.util.kappa > 0.0)) throw std::invalid_argument("run config: kappa must be > 0");
  if (!(cfg.util.a_max > 0.0)) throw std::invalid_argument("run config: a_max must be > 0");
  if (cfg.horizon < 1) throw std::invalid_argument("run config: horizon must be >= 1");
  long long warmup = resolved_warmup(cfg);
  if (warmup < 0 || warmup >= cfg.horizon) {
    throw std::invalid_argument("run config: need horizon > warmup >= 0");
  }
}

long long resolved_warmup(const RunConfig& cfg) {
  return cfg.warmup < 0 ? cfg.horizon / 10 : cfg.warmup;
}

RunMetrics run(const RunConfig& cfg, std::vector<StepRecord>* trace) {
  validate(cfg);
  int n = cfg.channel.n;
  long long warmup = resolved_warmup(cfg);

  // Perfect and mean-only control never reads estimates; dropping sigma
  // skips the noise draws without touching the true-gain streams.
  ChannelConfig chan = cfg.channel;
  if (cfg.csi != CsiMode::kImperfect) chan.sigma = 0.0;

  // Flow control under perfect CSI is the gamma = 0 objective.
  double gamma_flow = (cfg.csi == CsiMode::kPerfect) ? 0.0 : cfg.gamma;

  // Mean-only margins depend on the priors alone: one bisection per node.
  std::vector<double> rho(n, 0.0);
  std::vector<double> rho_prior;
  if (cfg.csi == CsiMode::kMeanOnly) {
    rho_prior.resize(n);
    std::vector<double> row;
    for (int j = 0; j < n; ++j) {
      row.clear();
      for (int i = 0; i < n; ++i) {
        if (i != j) row.push_back(chan.cross_means[cross_index(n, j, i)]);
      }
      rho_prior[j] = row.empty() ? 0.0 : outage_margin_prior(row, cfg.gamma, chan.P);
    }
  }

  NodeQueues q(n);
  RunMetrics m;
  double qp_sum = 0.0, qo_sum = 0.0, ap_sum = 0.0, ao_sum = 0.0;
  double dep_p_sum = 0.0, dep_o_sum = 0.0, good_p_sum = 0.0, good_o_sum = 0.0;
  double util_exp_sum = 0.0, util_real_sum = 0.0;
  long long private_blocks = 0, outage_blocks = 0;

  std::vector<PosteriorParams> posteriors;
  posteriors.reserve(n > 1 ? n - 1 : 0);

  for (long long k = 0; k < cfg.horizon; ++k) {
    ChannelBlock blk = sample_block(chan, static_cast<std::uint64_t>(k));
    RateView view = rate_view(blk, n, chan.P);

    switch (cfg.csi) {
      case CsiMode::kPerfect:
        rho = view.r_cross_max;
        break;
      case CsiMode::kMeanOnly:
        rho = rho_prior;
        break;
      case CsiMode::kImperfect:
        for (int j = 0; j < n; ++j) {
          posteriors.clear();
          for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            std::size_t idx = cross_index(n, j, i);
            if (chan.sigma > 0.0) {
              posteriors.push_back(
                  posterior_of_gain(blk.h_cross_est[idx], chan.sigma,
                                    chan.cross_means[idx]));
            } else {
              posteriors.push_back({std::max(blk.h_cross_est[idx], 0.0), 0.0});
            }
          }
          rho[j] = posteriors.empty() ? 0.0
                                      : outage_margin(posteriors, cfg.gamma, chan.P);
        }
        break;
    }

    PolicyDecision dec = schedule_max_weight(q, view.r_up, rho);
    double cross_true = dec.node >= 0 ? view.r_cross_max[dec.node] : 0.0;

    if (k >= warmup) {
      for (int j = 0; j < n; ++j) {
        qp_sum += q.qp[j];
        qo_sum += q.qo[j];
      }
    }

    StepRecord rec = step(q, dec, cross_true, cfg.V, gamma_flow, cfg.util);

    if (k >= warmup) {
      for (int j = 0; j < n; ++j) {
        ap_sum += rec.ap[j];
        ao_sum += rec.ao[j];
      }
      dep_p_sum += rec.dep_p;
      dep_o_sum += rec.dep_o;
      if (rec.decision.outage) {
        good_o_sum += rec.dep_p;
        ++outage_blocks;
      } else {
        good_p_sum += rec.dep_p;
      }
      good_o_sum += rec.dep_o;
      if (rec.decision.mode == TxMode::kPrivateJoint) ++private_blocks;
      util_exp_sum += rec.util_expected;
      util_real_sum += rec.util_realized;
    }
    if (trace) trace->push_back(std::move(rec));
  }

  long long blocks = cfg.horizon - warmup;
  double inv_t = 1.0 / static_cast<double>(blocks);
  double inv_tn = inv_t / static_cast<double>(n);
  m.blocks = blocks;
  m.util_avg = util_exp_sum * inv_t;
  m.util_realized = util_real_sum * inv_t;
  m.qp_avg = qp_sum * inv_tn;
  m.qo_avg = qo_sum * inv_tn;
  m.lambda_p = ap_sum * inv_tn;
  m.lambda_o = ao_sum * inv_tn;
  m.serv_p = dep_p_sum * inv_tn;
  m.serv_o = dep_o_sum * inv_tn;
  m.goodput_p = good_p_sum * inv_tn;
  m.goodput_o = good_o_sum * inv_tn;
  m.outage_freq = private_blocks > 0
                      ? static_cast<double>(outage_blocks) /
                            static_cast<double>(private_blocks)
                      : 0.0;
  return m;
}

std::vector<RunMetrics> sweep(const RunConfig& base, SweepParam param,
                              const std::vector<double>& values,
                              const PriorIntervals& priors, int workers) {
  if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");

  std::vector<RunConfig> configs;
  configs.reserve(values.size());
  for (double v : values) {
    RunConfig cfg = base;
    switch (param) {
      case SweepParam::kV:
        cfg.V = v;
        break;
      case SweepParam::kN: {
        int n = static_cast<int>(v);
        if (n < 1 || static_cast<double>(n) != v) {
          throw std::invalid_argument("sweep: n values must be positive integers");
        }
        ChannelConfig chan = sample_priors_uniform(
            n, priors.up_lo, priors.up_hi, priors.cross_lo, priors.cross_hi,
            base.channel.seed);
        chan.P = base.channel.P;
        chan.sigma = base.channel.sigma;
        cfg.channel = std::move(chan);
        break;
      }
      case SweepParam::kKappa:
        cfg.util.kappa = v;
        break;
      case SweepParam::kGamma:
        cfg.gamma = v;
        break;
      case SweepParam::kSigma:
        cfg.channel.sigma = v;
        break;
    }
    validate(cfg);
    configs.push_back(std::move(cfg));
  }

  std::vector<RunMetrics> results(configs.size());
  int usable = std::max(1, std::min<int>(workers, static_cast<int>(configs.size())));
  if (usable == 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) results[i] = run(configs[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(usable);
  for (int w = 0; w < usable; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= configs.size()) return;
        results[i] = run(configs[i]);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

PosComparison compare_pos(const RunConfig& cfg, long long pos_blocks) {
  validate(cfg);
  PosComparison cmp;
  PosProfile prof = pos_rates(cfg.channel, pos_blocks, Scheduler::kPos);
  cmp.pos_priv = prof.sum_priv / static_cast<double>(cfg.channel.n);
  cmp.dyn_priv = run(cfg).serv_p;
  return cmp;
}

}  // namespace privsched
