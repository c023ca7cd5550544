// Acceptance suite: end-to-end checks of the published working points and
// qualitative relations the library is built to reproduce. One line per
// criterion; a criterion fails if any of its sub-checks miss the stated
// tolerance. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "privsched/channel.hpp"
#include "privsched/config.hpp"
#include "privsched/control.hpp"
#include "privsched/math.hpp"
#include "privsched/pos.hpp"
#include "privsched/sim.hpp"
#include "privsched/single_user.hpp"

using namespace privsched;

namespace {

int g_failed = 0;
std::vector<std::string> g_lines;

void detail(const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  g_lines.emplace_back(buf);
}

void finish(int idx, const char* name, bool ok) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", idx, name);
  for (const std::string& l : g_lines) std::printf("            %s\n", l.c_str());
  g_lines.clear();
  if (!ok) ++g_failed;
  std::fflush(stdout);
}

bool near(double x, double target, double tol) {
  return std::fabs(x - target) <= tol;
}

ChannelConfig symmetric_config(int n, double up_mean, double cross_mean,
                               std::uint64_t seed) {
  ChannelConfig c;
  c.n = n;
  c.P = 1.0;
  c.uplink_means.assign(n, up_mean);
  c.cross_means.assign(static_cast<std::size_t>(n) * (n - 1), cross_mean);
  c.seed = seed;
  return c;
}

// The experiment defaults: n nodes, uplink means ~ U[2,8], cross means
// ~ U[0,1], P = 1, kappa = 5, V = 50, gamma = 0.1, sigma = 0.5, seed 1.
RunConfig experiment_config(int n, CsiMode csi, long long horizon) {
  AppConfig app;
  app.n = {static_cast<double>(n)};
  app.csi = csi;
  app.horizon = horizon;
  return resolve_run_config(app);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---- criterion 1: POS rate working points ---------------------------------

void criterion_pos_points() {
  struct Point {
    int n;
    double cross, target, tol;
  };
  const Point pts[4] = {{5, 1.0, 0.31, 0.02},
                        {10, 1.0, 0.19, 0.02},
                        {5, 2.5, 0.20, 0.02},
                        {10, 2.5, 0.13, 0.02}};
  const long long blocks = 200000;
  bool ok = true;
  for (const Point& p : pts) {
    auto t0 = std::chrono::steady_clock::now();
    PosProfile prof = pos_rates(symmetric_config(p.n, 2.0, p.cross, 1), blocks);
    double secs = seconds_since(t0);
    double per_node = prof.sum_priv / p.n;
    bool hit = near(per_node, p.target, p.tol) && secs < 60.0;
    ok = ok && hit;
    detail("n=%d cross=%.1f: priv/node %.4f (target %.2f +- %.2f), %.1fs %s",
           p.n, p.cross, per_node, p.target, p.tol, secs, hit ? "ok" : "MISS");
    if (p.cross == 1.0) {
      // Corner of the outer bound: all blocks open, E[max uplink rate]/n.
      double corner = prof.r_opp / p.n;
      double target = p.n == 5 ? 0.47 : 0.27;
      bool corner_hit = near(corner, target, 0.03);
      ok = ok && corner_hit;
      detail("n=%d corner open/node %.4f (target %.2f +- 0.03) %s", p.n,
             corner, target, corner_hit ? "ok" : "MISS");
    }
  }
  finish(1, "POS private-rate and corner working points", ok);
}

// ---- criterion 2: POS dominance over baseline schedulers ------------------

void criterion_pos_dominance() {
  const long long blocks = 200000;
  bool ok = true;
  for (int n : {5, 10}) {
    for (double cross : {1.0, 2.5}) {
      ChannelConfig cfg = symmetric_config(n, 2.0, cross, 1);
      PosProfile pos = pos_rates(cfg, blocks, Scheduler::kPos);
      for (Scheduler s : {Scheduler::kRoundRobin, Scheduler::kMaxUplink}) {
        PosProfile base = pos_rates(cfg, blocks, s);
        // The sum-rate optimality is a >=; the empirical check tolerates
        // sampling error in the baseline's favor.
        double slack =
            3.0 * std::hypot(pos.sum_priv_se, base.sum_priv_se);
        bool hit = base.sum_priv <= pos.sum_priv + slack;
        ok = ok && hit;
        detail("n=%d cross=%.1f %s: %.4f vs POS %.4f (3se slack %.4f) %s", n,
               cross, s == Scheduler::kRoundRobin ? "round-robin" : "max-uplink",
               base.sum_priv, pos.sum_priv, slack, hit ? "ok" : "MISS");
      }
    }
  }
  finish(2, "POS sum private rate dominates baseline schedulers", ok);
}

// ---- criterion 3: single-user joint vs separate regions -------------------

void criterion_single_user_regions() {
  // Quadrature references for E[(R_up - R_cross)+] at mean uplink gain 2.
  const double flat_top_ref[2] = {0.6847809188356038, 0.4082270169747296};
  const double crosses[2] = {1.0, 2.5};
  const long long blocks = 200000;
  bool ok = true;
  for (int c = 0; c < 2; ++c) {
    auto path = sample_rate_path(2.0, crosses[c], 1.0, 11, blocks);
    auto sep = sweep_region(path, 33, EncodingMode::kSeparate,
                            TieRule::kPreferOpen);
    auto joint = sweep_region(path, 33, EncodingMode::kJoint,
                              TieRule::kPreferOpen);
    bool dominates = sep.size() == joint.size();
    for (std::size_t i = 0; dominates && i < sep.size(); ++i) {
      dominates = joint[i].priv_rate >= sep[i].priv_rate - 1e-12;
    }
    double flat_top = joint.front().priv_rate;
    bool flat_hit = near(flat_top, flat_top_ref[c], 1e-2);
    bool positive = flat_top > 0.0;
    ok = ok && dominates && flat_hit && positive;
    detail("cross=%.1f: joint dominates %s, flat top %.4f (ref %.4f) %s%s",
           crosses[c], dominates ? "ok" : "MISS", flat_top, flat_top_ref[c],
           flat_hit ? "ok" : "MISS",
           positive ? "" : ", flat top not positive MISS");
  }
  finish(3, "joint encoding dominates separate, flat tops match quadrature",
         ok);
}

// ---- criterion 4: threshold optimality against exhaustive search ----------

void criterion_threshold_exhaustive() {
  // 4x4 gain grid with atom frequencies in tenths; a 40-block path realizes
  // the joint law exactly, so the exhaustive labeling search is noise-free.
  const double up_gain[4] = {0.5, 1.0, 2.0, 4.0};
  const int up_tenths[4] = {1, 2, 3, 4};
  const double cross_gain[4] = {0.2, 0.8, 1.5, 3.0};
  std::vector<RatePair> path;
  std::vector<double> atom_prob;
  std::vector<RatePair> atom;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double up = std::log2(1.0 + up_gain[a]);
      double cross = std::log2(1.0 + cross_gain[b]);
      RatePair r{up, std::max(0.0, up - cross)};
      atom.push_back(r);
      atom_prob.push_back(up_tenths[a] * 0.1 * 0.25);
      for (int rep = 0; rep < up_tenths[a]; ++rep) path.push_back(r);
    }
  }
  double mean_up = 0.0;
  for (std::size_t i = 0; i < atom.size(); ++i)
    mean_up += atom_prob[i] * atom[i].up;

  bool ok = true;
  double worst_gap = 0.0;
  for (double frac : {0.0, 0.15, 0.35, 0.55, 0.75, 0.95}) {
    double alpha = frac * mean_up;
    RegionPoint pt = separate_region_point(path, alpha, TieRule::kPreferOpen);
    double best_priv = -1.0;
    for (unsigned mask = 0; mask < (1u << 16); ++mask) {
      double open = 0.0, priv = 0.0;
      for (int i = 0; i < 16; ++i) {
        if (mask & (1u << i)) {
          priv += atom_prob[i] * atom[i].priv;
        } else {
          open += atom_prob[i] * atom[i].up;
        }
      }
      if (open >= pt.open_rate - 1e-9) best_priv = std::max(best_priv, priv);
    }
    worst_gap = std::max(worst_gap, std::fabs(pt.priv_rate - best_priv));
    ok = ok && std::fabs(pt.priv_rate - best_priv) <= 1e-6;
  }
  detail("worst |threshold - exhaustive| private rate gap %.2e", worst_gap);
  finish(4, "threshold labeling matches exhaustive search within 1e-6", ok);
}

// ---- criterion 5: utility convergence and backlog growth in V -------------

void criterion_v_tradeoff() {
  RunConfig base = experiment_config(10, CsiMode::kPerfect, 100000);
  std::vector<double> values = {1, 4, 8, 16, 50};
  auto runs = sweep(base, SweepParam::kV, values, PriorIntervals{});
  double u8 = runs[2].util_avg, u50 = runs[4].util_avg;
  bool util_ok = std::fabs(u8 - u50) <= 0.05 * std::fabs(u50);
  detail("utility V=8 %.3f vs V=50 %.3f (within 5%%) %s", u8, u50,
         util_ok ? "ok" : "MISS");
  bool backlog_ok = true;
  double prev = -1.0;
  for (int i : {0, 1, 3, 4}) {
    double backlog = runs[i].qp_avg + runs[i].qo_avg;
    backlog_ok = backlog_ok && backlog > prev;
    detail("V=%-2.0f backlog/node %.2f", values[i], backlog);
    prev = backlog;
  }
  finish(5, "utility converges in V while backlog grows", util_ok && backlog_ok);
}

// ---- criterion 6: dynamic control vs POS private rate ---------------------

void criterion_dynamic_vs_pos() {
  RunConfig c5 = experiment_config(5, CsiMode::kPerfect, 100000);
  RunConfig c10 = experiment_config(10, CsiMode::kPerfect, 100000);
  PosComparison r5 = compare_pos(c5, 200000);
  PosComparison r10 = compare_pos(c10, 200000);

  bool positive = r5.pos_priv > 0 && r5.dyn_priv > 0 && r10.pos_priv > 0 &&
                  r10.dyn_priv > 0;
  bool decreasing =
      r5.pos_priv > r10.pos_priv && r5.dyn_priv > r10.dyn_priv;
  bool ratio_ok = r10.dyn_priv <= 0.75 * r10.pos_priv;
  detail("n=5:  POS %.4f dyn %.4f ratio %.3f", r5.pos_priv, r5.dyn_priv,
         r5.dyn_priv / r5.pos_priv);
  detail("n=10: POS %.4f dyn %.4f ratio %.3f (need <= 0.75) %s", r10.pos_priv,
         r10.dyn_priv, r10.dyn_priv / r10.pos_priv, ratio_ok ? "ok" : "MISS");
  detail("rates positive %s, both decreasing 5->10 %s",
         positive ? "ok" : "MISS", decreasing ? "ok" : "MISS");
  finish(6, "dynamic-control private rate at most 0.75x POS",
         positive && decreasing && ratio_ok);
}

// ---- criteria 7 and 9 share the estimate-noise runs -----------------------

struct NoiseRuns {
  std::vector<double> sigmas = {0.0, 0.25, 0.5, 0.7};
  std::vector<RunMetrics> by_sigma;
  RunMetrics mean_only;
};

NoiseRuns noise_runs() {
  NoiseRuns r;
  RunConfig base = experiment_config(10, CsiMode::kImperfect, 100000);
  r.by_sigma = sweep(base, SweepParam::kSigma, r.sigmas, PriorIntervals{});
  r.mean_only = run(experiment_config(10, CsiMode::kMeanOnly, 100000));
  return r;
}

void criterion_outage_calibration(const NoiseRuns& r) {
  const RunMetrics& m = r.by_sigma[2];  // sigma = 0.5, gamma = 0.1
  bool freq_ok = near(m.outage_freq, 0.10, 0.02);
  double gap = std::fabs(m.goodput_p - 0.9 * m.serv_p);
  bool goodput_ok = gap <= 0.02;
  detail("outage frequency %.4f (target 0.10 +- 0.02) %s", m.outage_freq,
         freq_ok ? "ok" : "MISS");
  detail("|goodput - 0.9*service| = %.4f (<= 0.02) %s", gap,
         goodput_ok ? "ok" : "MISS");
  finish(7, "outage frequency matches the configured margin level",
         freq_ok && goodput_ok);
}

void criterion_gamma_peak() {
  RunConfig base = experiment_config(10, CsiMode::kImperfect, 100000);
  std::vector<double> gammas = {0.02, 0.05, 0.1, 0.2, 0.4};
  auto runs = sweep(base, SweepParam::kGamma, gammas, PriorIntervals{});
  int argmax = 0;
  for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
    detail("gamma %.2f: private goodput/node %.4f", gammas[i],
           runs[i].goodput_p);
    if (runs[i].goodput_p > runs[argmax].goodput_p) argmax = i;
  }
  bool interior = argmax > 0 && argmax + 1 < static_cast<int>(runs.size());
  bool near_tenth = std::abs(argmax - 2) <= 1;  // within one grid step of 0.1
  detail("peak at gamma %.2f: interior %s, within one step of 0.1 %s",
         gammas[argmax], interior ? "ok" : "MISS", near_tenth ? "ok" : "MISS");
  finish(8, "private goodput peaks at an interior margin level",
         interior && near_tenth);
}

void criterion_noise_degradation(const NoiseRuns& r) {
  bool decreasing = true;
  for (std::size_t i = 0; i < r.by_sigma.size(); ++i) {
    detail("sigma %.2f: private goodput/node %.4f", r.sigmas[i],
           r.by_sigma[i].goodput_p);
    if (i > 0 &&
        r.by_sigma[i].goodput_p >= r.by_sigma[i - 1].goodput_p) {
      decreasing = false;
    }
  }
  bool mean_only_ok = near(r.mean_only.goodput_p, 0.16, 0.03);
  double gap = std::fabs(r.by_sigma.back().goodput_p - r.mean_only.goodput_p);
  bool saturates = gap <= 0.03;
  detail("mean-only goodput/node %.4f (target 0.16 +- 0.03) %s",
         r.mean_only.goodput_p, mean_only_ok ? "ok" : "MISS");
  detail("|sigma=0.7 - mean-only| = %.4f (<= 0.03) %s", gap,
         saturates ? "ok" : "MISS");
  finish(9, "goodput degrades with estimate noise toward the mean-only floor",
         decreasing && mean_only_ok && saturates);
}

// ---- criterion 10: drift bound audit ---------------------------------------

void criterion_drift_audit() {
  bool ok = true;
  for (CsiMode csi : {CsiMode::kPerfect, CsiMode::kImperfect}) {
    RunConfig cfg = experiment_config(10, csi, 10000);
    std::vector<StepRecord> trace;
    run(cfg, &trace);
    DriftAudit audit = drift_audit(trace);
    bool hit = audit.violations == 0;
    ok = ok && hit;
    detail("%s csi: %lld blocks, %lld violations, min slack %.3f %s",
           csi == CsiMode::kPerfect ? "perfect" : "imperfect", audit.blocks,
           audit.violations, audit.min_slack, hit ? "ok" : "MISS");
  }
  finish(10, "per-block drift bound never violated", ok);
}

// ---- criterion 11: control-policy property checks --------------------------

void criterion_properties() {
  oracles::TestRand rnd(2026);
  UtilitySpec util;
  bool flow_1d = true, flow_2d = true, clamped = true;
  for (int i = 0; i < 200; ++i) {
    util.kappa = rnd.uniform(0.5, 8.0);
    double V = rnd.uniform(0.5, 60.0);
    double qp = rnd.uniform() < 0.1 ? 0.0 : rnd.uniform(0.0, 150.0);
    double qo = rnd.uniform() < 0.1 ? 0.0 : rnd.uniform(0.0, 150.0);

    Admissions a = flow_control_perfect(qp, qo, V, util);
    clamped = clamped && a.ap >= 0.0 && a.ap <= util.a_max && a.ao >= 0.0 &&
              a.ao <= util.a_max;
    auto obj_p = [&](double x) {
      return V * util.kappa * std::log1p(x) / kLn2 - qp * x;
    };
    double best = obj_p(oracles::grid_max_1d(obj_p, 0.0, util.a_max));
    if (obj_p(a.ap) < best - 1e-6) flow_1d = false;

    double gamma = rnd.uniform(0.02, 0.95);
    Admissions b = flow_control_outage(qp, qo, V, gamma, util);
    auto obj = [&](double x, double y) {
      return V * ((1.0 - gamma) * util.kappa * std::log1p(x) / kLn2 +
                  (1.0 - gamma) * std::log1p(y) / kLn2 +
                  gamma * std::log1p(x + y) / kLn2) -
             qp * x - qo * y;
    };
    double best2 = oracles::grid_max_2d(obj, 0.0, util.a_max).value;
    if (obj(b.ap, b.ao) < best2 - 1e-6) flow_2d = false;
  }
  detail("flow control vs grid oracle: 1-d %s, 2-d %s, admissions clamped %s",
         flow_1d ? "ok" : "MISS", flow_2d ? "ok" : "MISS",
         clamped ? "ok" : "MISS");

  RunConfig cfg = experiment_config(10, CsiMode::kImperfect, 20000);
  RunMetrics m1 = run(cfg), m2 = run(cfg);
  bool deterministic =
      m1.util_avg == m2.util_avg && m1.util_realized == m2.util_realized &&
      m1.qp_avg == m2.qp_avg && m1.qo_avg == m2.qo_avg &&
      m1.lambda_p == m2.lambda_p && m1.lambda_o == m2.lambda_o &&
      m1.serv_p == m2.serv_p && m1.serv_o == m2.serv_o &&
      m1.goodput_p == m2.goodput_p && m1.goodput_o == m2.goodput_o &&
      m1.outage_freq == m2.outage_freq && m1.blocks == m2.blocks;
  detail("repeated run bitwise identical %s", deterministic ? "ok" : "MISS");

  TruncatedNormal tn{0.7, 0.4};
  bool round_trip = true;
  for (double x : {0.2, 0.7, 1.5}) {
    round_trip =
        round_trip && std::fabs(tn.quantile(tn.cdf(x)) - x) <= 1e-9;
  }
  detail("posterior quantile/cdf round trip %s", round_trip ? "ok" : "MISS");

  finish(11, "flow-control oracle agreement and module invariants",
         flow_1d && flow_2d && clamped && deterministic && round_trip);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();

  criterion_pos_points();
  criterion_pos_dominance();
  criterion_single_user_regions();
  criterion_threshold_exhaustive();
  criterion_v_tradeoff();
  criterion_dynamic_vs_pos();

  NoiseRuns noise = noise_runs();
  criterion_outage_calibration(noise);
  criterion_gamma_peak();
  criterion_noise_degradation(noise);
  criterion_drift_audit();
  criterion_properties();

  std::printf("%d of 11 criteria failed (%.0fs)\n", g_failed,
              seconds_since(t0));
  return g_failed;
}
