#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "privsched/sim.hpp"

// Flat key=value configuration. Every experiment is one parameter set; the
// recognized keys are
//
//   n, P, uplink_means, uplink_interval, cross_means, cross_interval,
//   sigma, V, kappa, gamma, horizon, warmup, seed, csi, preset
//
// Numeric keys that parameter sweeps iterate over (n, V, kappa, gamma,
// sigma) accept comma lists; non-sweep commands require them to be single
// values. uplink_means and cross_means accept a single value as shorthand
// for "every node" / "every ordered pair". Unset keys resolve to the
// defaults below.

namespace privsched {

struct AppConfig {
  std::vector<double> n = {10};
  double P = 1.0;
  std::vector<double> uplink_means;         // explicit per-node means, or empty
  std::vector<double> uplink_interval = {2.0, 8.0};
  std::vector<double> cross_means;          // explicit per-pair means, or empty
  std::vector<double> cross_interval = {0.0, 1.0};
  std::vector<double> sigma = {0.5};
  std::vector<double> V = {50.0};
  std::vector<double> kappa = {5.0};
  std::vector<double> gamma = {0.1};
  long long horizon = 200000;
  long long warmup = -1;
  std::uint64_t seed = 1;
  CsiMode csi = CsiMode::kPerfect;
  std::string preset;

  // Explicit means and an explicit interval for the same side conflict;
  // these record whether the interval keys were actually written.
  bool uplink_interval_given = false;
  bool cross_interval_given = false;
};

// Parses "key=value" lines; '#' starts a comment, blank lines are skipped.
// Throws std::invalid_argument naming the offending key on unknown keys,
// malformed values, or constraint violations.
AppConfig parse_config_file(const std::string& path);

// Applies one "key=value" assignment (command-line override form).
void apply_assignment(AppConfig& cfg, const std::string& assignment);

// Validates cross-key constraints (intervals well-formed, means vs n, ...).
void validate(const AppConfig& cfg);

// The scalar value of a sweepable key; throws naming the key if a list was
// configured where a single value is needed.
double single_value(const std::vector<double>& values, const std::string& key);

// Resolves the full RunConfig: explicit means are taken as given, otherwise
// per-node/per-pair means are drawn from the configured intervals and seed.
RunConfig resolve_run_config(const AppConfig& cfg);

// The key=value image of a resolved config, for manifests: iteration order
// is fixed, values are formatted the same way every run.
std::map<std::string, std::string> resolved_entries(const AppConfig& cfg);

}  // namespace privsched
