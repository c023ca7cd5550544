#pragma once

#include <string>
#include <vector>

#include "privsched/config.hpp"
#include "privsched/control.hpp"
#include "privsched/sim.hpp"
#include "privsched/single_user.hpp"

// Experiment presets. Each writes one experiment family's data as CSVs plus a
// gnuplot script into an output directory, and a manifest recording the
// resolved configuration, seed, and a content hash per file, which is
// enough to regenerate every byte.

namespace privsched {

struct OutputBundle {
  std::vector<std::string> csv_paths;
  std::string plot_path;
  std::string manifest_path;
};

inline const std::vector<std::string> kPresetNames = {
    "region-single", "region-pos", "sweep-V",    "sweep-n",
    "sweep-kappa",   "sweep-gamma", "sweep-sigma"};

// name must be one of kPresetNames; throws std::invalid_argument otherwise.
OutputBundle run_preset(const std::string& name, const AppConfig& cfg,
                        const std::string& out_dir, int workers);

// Column names shared by every metrics CSV: the sweep parameter first, then
// the RunMetrics fields in declaration order.
std::vector<std::string> metrics_columns(const std::string& param_name);
std::vector<double> metrics_values(double param, const RunMetrics& m);

// Writers reused by the plain CLI verbs. Each returns the path written.
std::string write_metrics_csv(const std::string& path, const std::string& param_name,
                              const std::vector<double>& values,
                              const std::vector<RunMetrics>& table);
std::string write_region_csv(const std::string& path,
                             const std::vector<RegionPoint>& separate,
                             const std::vector<RegionPoint>& joint);
std::string write_pos_profile_csv(const std::string& path, const PosProfile& prof);
std::string write_trace_csv(const std::string& path,
                            const std::vector<StepRecord>& trace, int n);

// Manifest for a finished command: resolved config, seed, per-file hashes.
std::string write_manifest(const std::string& out_dir, const std::string& command,
                           const AppConfig& cfg,
                           const std::vector<std::string>& csv_paths,
                           const std::string& plot_path);

}  // namespace privsched
