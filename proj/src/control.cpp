#include "privsched/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privsched/math.hpp"

namespace privsched {

double utility_private(double x, const UtilitySpec& util) {
  return util.kappa * std::log1p(x) / kLn2;
}

double utility_open(double x) { return std::log1p(x) / kLn2; }

Admissions flow_control_perfect(double qp, double qo, double V,
                                const UtilitySpec& util) {
  if (!(V > 0.0)) throw std::domain_error("flow_control_perfect: V must be > 0");
  auto coordinate = [&](double q, double kappa) {
    if (q <= 0.0) return util.a_max;
    return std::clamp(V * kappa / (q * kLn2) - 1.0, 0.0, util.a_max);
  };
  return {coordinate(qp, util.kappa), coordinate(qo, 1.0)};
}

namespace {

double outage_objective(double ap, double ao, double qp, double qo, double V,
                        double gamma, const UtilitySpec& util) {
  return V * ((1.0 - gamma) * utility_private(ap, util) +
              (1.0 - gamma) * utility_open(ao) + gamma * utility_open(ao + ap)) -
         qp * ap - qo * ao;
}

// Stationary point of the outage objective in one coordinate, other fixed.
// Zeroing the derivative and clearing denominators leaves a quadratic in
// x = 1 + coordinate whose positive root is the unconstrained optimum:
//   q*ln2 * x^2 + (q*ln2*other - V*(w_own + gamma)) * x - V*w_own*other = 0,
// where w_own is the (1-gamma)-weighted own-utility slope factor.
double coordinate_root(double q, double other, double V, double gamma,
                       double w_own, double a_max) {
  if (q <= 0.0) return a_max;  // no queue cost, push to the cap
  double a = q * kLn2;
  double b = a * other - V * (w_own + gamma);
  double d = -V * w_own * other;
  double x = (-b + std::sqrt(b * b - 4.0 * a * d)) / (2.0 * a);
  return std::clamp(x - 1.0, 0.0, a_max);
}

}  // namespace

Admissions flow_control_outage(double qp, double qo, double V, double gamma,
                               const UtilitySpec& util) {
  if (!(V > 0.0)) throw std::domain_error("flow_control_outage: V must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::domain_error("flow_control_outage: gamma must lie in [0,1)");
  }
  if (gamma == 0.0) return flow_control_perfect(qp, qo, V, util);

  Admissions adm{0.0, 0.0};
  double prev = outage_objective(adm.ap, adm.ao, qp, qo, V, gamma, util);
  for (int it = 0; it < 500; ++it) {
    adm.ap = coordinate_root(qp, adm.ao, V, gamma, (1.0 - gamma) * util.kappa,
                             util.a_max);
    adm.ao = coordinate_root(qo, adm.ap, V, gamma, 1.0 - gamma, util.a_max);
    double obj = outage_objective(adm.ap, adm.ao, qp, qo, V, gamma, util);
    if (obj - prev <= 1e-9) break;
    prev = obj;
  }
  return adm;
}

PolicyDecision schedule_max_weight(const NodeQueues& q,
                                   std::span<const double> r_up,
                                   std::span<const double> rho) {
  int n = static_cast<int>(r_up.size());
  PolicyDecision best;  // idle, weight 0
  double best_w = 0.0;
  // Ties: private beats open, then the lowest index; strict > with this
  // enumeration order implements exactly that.
  for (int j = 0; j < n; ++j) {
    double rp = std::max(0.0, r_up[j] - rho[j]);
    double w_priv = q.qp[j] * rp + q.qo[j] * (r_up[j] - rp);
    if (w_priv > best_w) {
      best_w = w_priv;
      best = {j, TxMode::kPrivateJoint, r_up[j], rp, r_up[j] - rp, rho[j], false};
    }
  }
  for (int j = 0; j < n; ++j) {
    double w_open = q.qo[j] * r_up[j];
    if (w_open > best_w) {
      best_w = w_open;
      best = {j, TxMode::kOpenOnly, r_up[j], 0.0, r_up[j], 0.0, false};
    }
  }
  return best;
}

StepRecord step(NodeQueues& q, const PolicyDecision& decision,
                double true_cross_max, double V, double gamma,
                const UtilitySpec& util) {
  int n = static_cast<int>(q.qp.size());
  StepRecord rec;
  rec.decision = decision;
  rec.qp_before = q.qp;
  rec.qo_before = q.qo;
  rec.ap.resize(n);
  rec.ao.resize(n);

  if (rec.decision.mode == TxMode::kPrivateJoint) {
    rec.decision.outage = rec.decision.rho < true_cross_max;
  }

  for (int j = 0; j < n; ++j) {
    Admissions adm = flow_control_outage(q.qp[j], q.qo[j], V, gamma, util);
    rec.ap[j] = adm.ap;
    rec.ao[j] = adm.ao;
    rec.util_expected += (1.0 - gamma) * utility_private(adm.ap, util) +
                         (1.0 - gamma) * utility_open(adm.ao) +
                         gamma * utility_open(adm.ao + adm.ap);
    if (j == rec.decision.node && rec.decision.outage) {
      rec.util_realized += utility_open(adm.ap + adm.ao);
    } else {
      rec.util_realized += utility_private(adm.ap, util) + utility_open(adm.ao);
    }
  }

  if (rec.decision.node >= 0) {
    int s = rec.decision.node;
    rec.dep_p = std::min(q.qp[s], rec.decision.rp);
    rec.dep_o = std::min(q.qo[s], rec.decision.ro);
    q.qp[s] -= rec.dep_p;
    q.qo[s] -= rec.dep_o;
  }
  for (int j = 0; j < n; ++j) {
    q.qp[j] += rec.ap[j];
    q.qo[j] += rec.ao[j];
  }
  return rec;
}

DriftAudit drift_audit(std::span<const StepRecord> history) {
  DriftAudit audit;
  if (history.empty()) return audit;
  int n = static_cast<int>(history.front().qp_before.size());

  double rp_max = 0.0, ro_max = 0.0, ap_max = 0.0, ao_max = 0.0;
  for (const StepRecord& rec : history) {
    rp_max = std::max(rp_max, rec.decision.rp);
    ro_max = std::max(ro_max, rec.decision.ro);
    for (int j = 0; j < n; ++j) {
      ap_max = std::max(ap_max, rec.ap[j]);
      ao_max = std::max(ao_max, rec.ao[j]);
    }
  }
  double b1 = rp_max * rp_max + ap_max * ap_max;
  double b2 = ro_max * ro_max + ao_max * ao_max;
  audit.b_constant = 0.5 * n * (b1 + b2);
  audit.blocks = static_cast<long long>(history.size());
  audit.min_slack = audit.b_constant;

  for (const StepRecord& rec : history) {
    double l_before = 0.0, l_after = 0.0, penalty = 0.0;
    for (int j = 0; j < n; ++j) {
      double rp = (j == rec.decision.node) ? rec.decision.rp : 0.0;
      double ro = (j == rec.decision.node) ? rec.decision.ro : 0.0;
      double qp2 = std::max(rec.qp_before[j] - rp, 0.0) + rec.ap[j];
      double qo2 = std::max(rec.qo_before[j] - ro, 0.0) + rec.ao[j];
      l_before += rec.qp_before[j] * rec.qp_before[j] +
                  rec.qo_before[j] * rec.qo_before[j];
      l_after += qp2 * qp2 + qo2 * qo2;
      penalty += rec.qp_before[j] * (rp - rec.ap[j]) +
                 rec.qo_before[j] * (ro - rec.ao[j]);
    }
    double drift = 0.5 * (l_after - l_before);
    double bound = audit.b_constant - penalty;
    double slack = bound - drift;
    audit.min_slack = std::min(audit.min_slack, slack);
    if (slack < -1e-9 * std::max(1.0, std::abs(bound))) ++audit.violations;
  }
  return audit;
}

}  // namespace privsched
