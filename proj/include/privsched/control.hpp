#pragma once

#include <span>
#include <vector>

// Drift-plus-penalty dynamic control: queue-driven flow control, max-weight
// scheduling over (node, mode) candidates, depart-then-arrive queue updates
// with outage accounting, and the quadratic-Lyapunov drift audit.

namespace privsched {

struct NodeQueues {
  std::vector<double> qp;  // private backlogs, bits/channel-use units
  std::vector<double> qo;  // open backlogs

  explicit NodeQueues(int n = 0) : qp(n, 0.0), qo(n, 0.0) {}
};

// U_p(x) = kappa * log2(1+x), U_o(x) = log2(1+x). a_max caps per-block
// admissions; it must stay above the unconstrained optima at the V, kappa
// in play or it distorts the utility tradeoff (5 is ample for V <= 50,
// kappa <= 8: the private optimum V*kappa/(Q ln2) - 1 only reaches it while
// queues are still short).
struct UtilitySpec {
  double kappa = 5.0;
  double a_max = 5.0;
};

double utility_private(double x, const UtilitySpec& util);
double utility_open(double x);

struct Admissions {
  double ap = 0.0;
  double ao = 0.0;
};

// argmax of V[U_p(ap) + U_o(ao)] - qp*ap - qo*ao over [0, a_max]^2. The
// objective separates; each coordinate has the closed form
// clamp(V*kappa/(q ln2) - 1, 0, a_max), with a_max at q = 0.
Admissions flow_control_perfect(double qp, double qo, double V,
                                const UtilitySpec& util);

// argmax of V[(1-g)U_p(ap) + (1-g)U_o(ao) + g*U_o(ao+ap)] - qp*ap - qo*ao
// over the box: private bits survive with probability 1-gamma and degrade
// to open otherwise. Jointly concave; solved by exact coordinate ascent
// (each coordinate update is the root of a quadratic) to objective
// tolerance 1e-9. gamma = 0 returns flow_control_perfect exactly.
Admissions flow_control_outage(double qp, double qo, double V, double gamma,
                               const UtilitySpec& util);

enum class TxMode { kIdle, kPrivateJoint, kOpenOnly };

struct PolicyDecision {
  int node = -1;
  TxMode mode = TxMode::kIdle;
  double r_up = 0.0;  // uplink rate of the scheduled node
  double rp = 0.0;    // private stream rate
  double ro = 0.0;    // open stream rate (r_up - rp when private_joint)
  double rho = 0.0;   // margin the private rate was backed off by
  bool outage = false;
};

// Weights: private_joint w = qp*rp + qo*(r_up - rp) with rp = [r_up - rho]+;
// open_only w = qo*r_up. Global argmax over 2n+1 candidates (idle at weight
// 0); ties prefer private over open, then the lowest node index.
PolicyDecision schedule_max_weight(const NodeQueues& q,
                                   std::span<const double> r_up,
                                   std::span<const double> rho);

// One block: flow control for every node, the given scheduling decision
// applied depart-then-arrive, outage resolved against the true worst cross
// rate. Returns everything the metrics and the drift audit need.
struct StepRecord {
  PolicyDecision decision;
  std::vector<double> qp_before, qo_before;
  std::vector<double> ap, ao;
  double dep_p = 0.0;      // min(backlog, offered rate), what actually left
  double dep_o = 0.0;
  double util_expected = 0.0;  // gamma-weighted objective value of arrivals
  double util_realized = 0.0;  // same, but the scheduled node's outage resolved
};

StepRecord step(NodeQueues& q, const PolicyDecision& decision,
                double true_cross_max, double V, double gamma,
                const UtilitySpec& util);

struct DriftAudit {
  long long blocks = 0;
  long long violations = 0;  // must be 0: the bound is algebraic
  double b_constant = 0.0;   // n(B1+B2)/2 from the run's observed maxima
  double min_slack = 0.0;    // tightest bound-minus-drift seen
};

// Checks every recorded block against
//   L(k+1) - L(k) <= B - sum_j qp_j (rp_j - ap_j) - sum_j qo_j (ro_j - ao_j)
// with L = (1/2) sum (qp^2 + qo^2) and B built from the observed maxima of
// offered rates and admissions.
DriftAudit drift_audit(std::span<const StepRecord> history);

}  // namespace privsched
