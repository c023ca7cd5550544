#pragma once

#include <vector>

#include "privsched/channel.hpp"
#include "privsched/control.hpp"
#include "privsched/pos.hpp"

// Monte Carlo engine: executes the dynamic control loop block by block,
// accumulates time-averaged metrics, and runs the parameter sweeps. All
// rates reported per node (network totals divided by n); utility is the
// network aggregate.

namespace privsched {

enum class CsiMode { kPerfect, kImperfect, kMeanOnly };

struct RunConfig {
  ChannelConfig channel;
  UtilitySpec util;
  double V = 10.0;
  double gamma = 0.1;          // ignored under perfect CSI
  CsiMode csi = CsiMode::kPerfect;
  long long horizon = 200000;
  long long warmup = -1;       // -1 resolves to horizon/10
};

void validate(const RunConfig& cfg);
long long resolved_warmup(const RunConfig& cfg);

struct RunMetrics {
  double util_avg = 0.0;       // expected-utility objective, aggregate per block
  double util_realized = 0.0;  // outage-resolved utility tally
  double qp_avg = 0.0;         // time-avg backlog per node
  double qo_avg = 0.0;
  double lambda_p = 0.0;       // admission rate per node
  double lambda_o = 0.0;
  double serv_p = 0.0;         // queue departure rate per node
  double serv_o = 0.0;
  double goodput_p = 0.0;      // private departures that kept their secrecy
  double goodput_o = 0.0;      // open departures plus outage-credited private
  double outage_freq = 0.0;    // outage fraction of private-mode blocks
  long long blocks = 0;        // post-warmup blocks averaged
};

// One dynamic-control run. If trace is non-null every block's StepRecord is
// appended, warmup included (memory: ~4n doubles per block). Metrics average
// over post-warmup blocks only; backlogs sample queues at block start.
RunMetrics run(const RunConfig& cfg, std::vector<StepRecord>* trace = nullptr);

enum class SweepParam { kV, kN, kKappa, kGamma, kSigma };

// Mean-gain intervals used to re-draw priors when a sweep changes n.
struct PriorIntervals {
  double up_lo = 2.0, up_hi = 8.0;
  double cross_lo = 0.0, cross_hi = 1.0;
};

// One run per value, base unchanged otherwise. Runs share the master seed,
// and the per-element substreams keep fading paths common across values
// wherever dimensions overlap. workers > 1 runs points in parallel; the
// result order is the value order regardless.
std::vector<RunMetrics> sweep(const RunConfig& base, SweepParam param,
                              const std::vector<double>& values,
                              const PriorIntervals& priors, int workers = 1);

struct PosComparison {
  double pos_priv = 0.0;  // POS sum private rate / n
  double dyn_priv = 0.0;  // dynamic-control private service rate per node
};

// POS profile and a dynamic run over the same channel config and seed.
PosComparison compare_pos(const RunConfig& cfg, long long pos_blocks);

}  // namespace privsched
