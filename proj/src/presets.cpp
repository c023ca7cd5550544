#include "privsched/presets.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "privsched/io.hpp"
#include "privsched/math.hpp"
#include "privsched/rates.hpp"

namespace privsched {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Compact value for filenames: 2 -> "2", 2.5 -> "2.5".
std::string tag(double v) {
  std::string s = format_g9(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

std::string mode_name(EncodingMode m) {
  return m == EncodingMode::kSeparate ? "separate" : "joint";
}

std::string tx_mode_name(TxMode m) {
  switch (m) {
    case TxMode::kIdle: return "idle";
    case TxMode::kPrivateJoint: return "private_joint";
    case TxMode::kOpenOnly: return "open_only";
  }
  return "idle";
}

void write_plot_script(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "set datafile separator ','\n"
      << "set grid\n"
      << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// The swept values: the config list when the user gave one, else the
// preset's own grid.
std::vector<double> values_or(const std::vector<double>& configured,
                              std::vector<double> preset_default) {
  return configured.size() >= 2 ? configured : std::move(preset_default);
}

AppConfig with_single(const AppConfig& cfg, SweepParam param, double value) {
  AppConfig out = cfg;
  switch (param) {
    case SweepParam::kV: out.V = {value}; break;
    case SweepParam::kN: out.n = {value}; break;
    case SweepParam::kKappa: out.kappa = {value}; break;
    case SweepParam::kGamma: out.gamma = {value}; break;
    case SweepParam::kSigma: out.sigma = {value}; break;
  }
  return out;
}

// One metrics CSV per CSI mode over the same swept values.
struct SweepOutputs {
  std::vector<std::string> paths;
};

SweepOutputs run_metric_sweep(const AppConfig& cfg, SweepParam param,
                              const std::string& param_name,
                              const std::vector<double>& values,
                              const std::vector<CsiMode>& modes,
                              const std::string& out_dir, int workers) {
  PriorIntervals priors{cfg.uplink_interval[0], cfg.uplink_interval[1],
                        cfg.cross_interval[0], cfg.cross_interval[1]};
  SweepOutputs outs;
  for (CsiMode mode : modes) {
    AppConfig base_cfg = with_single(cfg, param, values.front());
    base_cfg.csi = mode;
    RunConfig base = resolve_run_config(base_cfg);
    std::vector<RunMetrics> table = sweep(base, param, values, priors, workers);
    std::string suffix = mode == CsiMode::kPerfect     ? "perfect"
                         : mode == CsiMode::kImperfect ? "imperfect"
                                                       : "mean_only";
    std::string path =
        join_path(out_dir, "sweep_" + param_name + "_" + suffix + ".csv");
    outs.paths.push_back(write_metrics_csv(path, param_name, values, table));
  }
  return outs;
}

OutputBundle region_single_preset(const AppConfig& cfg, const std::string& out_dir) {
  std::vector<std::pair<double, double>> pairs;
  if (cfg.uplink_means.size() == 1 && cfg.cross_means.size() == 1) {
    pairs = {{cfg.uplink_means[0], cfg.cross_means[0]}};
  } else {
    pairs = {{2.0, 1.0}, {2.0, 2.5}};
  }

  OutputBundle bundle;
  std::string plot_body;
  for (auto [mu_up, mu_cross] : pairs) {
    std::vector<RatePair> path =
        sample_rate_path(mu_up, mu_cross, cfg.P, cfg.seed, cfg.horizon);
    auto separate = sweep_region(path, 33, EncodingMode::kSeparate, TieRule::kPreferOpen);
    auto joint = sweep_region(path, 33, EncodingMode::kJoint, TieRule::kPreferOpen);
    std::string name =
        "region_single_up" + tag(mu_up) + "_cross" + tag(mu_cross) + ".csv";
    bundle.csv_paths.push_back(
        write_region_csv(join_path(out_dir, name), separate, joint));
    for (const char* mode : {"separate", "joint"}) {
      plot_body += plot_body.empty() ? "plot " : ",\\\n     ";
      plot_body += "'" + name + "' skip 1 using (strcol(5) eq \"" + mode +
                   "\" ? $2 : 1/0):3 with linespoints title '" + mode + " (" +
                   format_g9(mu_up) + "," + format_g9(mu_cross) + ")'";
    }
  }
  bundle.plot_path = join_path(out_dir, "plot_region_single.gp");
  write_plot_script(bundle.plot_path,
                    "set xlabel 'open rate (bits/use)'\n"
                    "set ylabel 'private rate (bits/use)'\n" +
                        plot_body + "\n");
  return bundle;
}

OutputBundle region_pos_preset(const AppConfig& cfg, const std::string& out_dir) {
  OutputBundle bundle;
  std::string plot_body;
  for (int n : {5, 10}) {
    for (double mu_cross : {1.0, 2.5}) {
      ChannelConfig chan;
      chan.n = n;
      chan.P = cfg.P;
      chan.seed = cfg.seed;
      chan.uplink_means.assign(n, 2.0);
      chan.cross_means.assign(static_cast<std::size_t>(n) * (n - 1), mu_cross);
      PosProfile prof = pos_rates(chan, cfg.horizon);

      std::string base = "n" + std::to_string(n) + "_cross" + tag(mu_cross);
      bundle.csv_paths.push_back(write_pos_profile_csv(
          join_path(out_dir, "pos_profile_" + base + ".csv"), prof));

      // Sum-rate region per node. Achievable: private capped by the
      // schedule's rate, open filling the randomization slots, then a 1:1
      // trade of private for open. Outer: private capped by the same value
      // (sum optimality), total by E[max uplink rate].
      double s = prof.sum_priv / n;
      double o = prof.open_at_corner / n;
      double ropp = prof.r_opp / n;
      std::string region_name = "pos_region_" + base + ".csv";
      CsvWriter w(join_path(out_dir, region_name), {"bound", "open_rate", "priv_rate"});
      auto point = [&](const char* b, double x, double y) {
        w.row({b, format_g9(x), format_g9(y)});
      };
      point("achievable", 0.0, s);
      point("achievable", o, s);
      point("achievable", o + s, 0.0);
      point("outer", 0.0, s);
      point("outer", ropp - s, s);
      point("outer", ropp, 0.0);
      w.close();
      bundle.csv_paths.push_back(join_path(out_dir, region_name));

      for (const char* b : {"achievable", "outer"}) {
        plot_body += plot_body.empty() ? "plot " : ",\\\n     ";
        plot_body += "'" + region_name + "' skip 1 using (strcol(1) eq \"" +
                     b + "\" ? $2 : 1/0):3 with linespoints title '" +
                     std::string(b) + " " + base + "'";
      }
    }
  }
  bundle.plot_path = join_path(out_dir, "plot_region_pos.gp");
  write_plot_script(bundle.plot_path,
                    "set xlabel 'open rate (bits/use/node)'\n"
                    "set ylabel 'private rate (bits/use/node)'\n" +
                        plot_body + "\n");
  return bundle;
}

std::string sweep_plot(const std::string& param, const std::vector<std::string>& files,
                       const std::string& ycol_title) {
  std::string body = "set xlabel '" + param + "'\nset ylabel '" + ycol_title +
                     "'\nset key autotitle columnhead\n";
  body += "plot ";
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (i) body += ",\\\n     ";
    std::string base = fs::path(files[i]).filename().string();
    body += "'" + base + "' using 1:8 with linespoints title '" + base + " serv_p'";
  }
  body += "\n";
  return body;
}

OutputBundle sweep_n_preset(const AppConfig& cfg, const std::string& out_dir,
                            int workers) {
  std::vector<double> values = values_or(cfg.n, {2, 4, 6, 8, 10});
  OutputBundle bundle;
  SweepOutputs dyn = run_metric_sweep(cfg, SweepParam::kN, "n", values,
                                      {CsiMode::kPerfect, CsiMode::kImperfect},
                                      out_dir, workers);
  bundle.csv_paths = dyn.paths;

  // POS reference at each n, on the same drawn priors.
  std::string pos_path = join_path(out_dir, "sweep_n_pos.csv");
  CsvWriter w(pos_path, {"n", "pos_priv_per_node", "open_at_corner_per_node",
                         "r_opp_per_node", "idle_frac"});
  for (double v : values) {
    int n = static_cast<int>(v);
    ChannelConfig chan = sample_priors_uniform(
        n, cfg.uplink_interval[0], cfg.uplink_interval[1], cfg.cross_interval[0],
        cfg.cross_interval[1], cfg.seed);
    chan.P = cfg.P;
    PosProfile prof = pos_rates(chan, cfg.horizon);
    w.numeric_row({static_cast<double>(n), prof.sum_priv / n,
                   prof.open_at_corner / n, prof.r_opp / n, prof.idle_frac});
  }
  w.close();
  bundle.csv_paths.push_back(pos_path);

  bundle.plot_path = join_path(out_dir, "plot_sweep_n.gp");
  write_plot_script(bundle.plot_path, sweep_plot("n", bundle.csv_paths,
                                                 "rate (bits/use/node)"));
  return bundle;
}

}  // namespace

std::vector<std::string> metrics_columns(const std::string& param_name) {
  return {param_name, "util_avg", "util_realized", "qp_avg",     "qo_avg",
          "lambda_p",  "lambda_o", "serv_p",       "serv_o",     "goodput_p",
          "goodput_o", "outage_freq", "blocks"};
}

std::vector<double> metrics_values(double param, const RunMetrics& m) {
  return {param,      m.util_avg, m.util_realized, m.qp_avg,    m.qo_avg,
          m.lambda_p, m.lambda_o, m.serv_p,        m.serv_o,    m.goodput_p,
          m.goodput_o, m.outage_freq, static_cast<double>(m.blocks)};
}

std::string write_metrics_csv(const std::string& path, const std::string& param_name,
                              const std::vector<double>& values,
                              const std::vector<RunMetrics>& table) {
  CsvWriter w(path, metrics_columns(param_name));
  for (std::size_t i = 0; i < table.size(); ++i) {
    w.numeric_row(metrics_values(values[i], table[i]));
  }
  w.close();
  return path;
}

std::string write_region_csv(const std::string& path,
                             const std::vector<RegionPoint>& separate,
                             const std::vector<RegionPoint>& joint) {
  CsvWriter w(path, {"alpha", "open_rate", "priv_rate", "lambda_or_pp", "mode"});
  auto rows = [&](const std::vector<RegionPoint>& points) {
    for (const RegionPoint& p : points) {
      w.row({format_g9(p.alpha), format_g9(p.open_rate), format_g9(p.priv_rate),
             format_g9(p.param), mode_name(p.mode)});
    }
  };
  rows(separate);
  rows(joint);
  w.close();
  return path;
}

std::string write_pos_profile_csv(const std::string& path, const PosProfile& prof) {
  CsvWriter w(path, {"node", "p_M", "Rbar_M", "Rbar_m", "priv_rate"});
  for (std::size_t j = 0; j < prof.p_sched.size(); ++j) {
    w.numeric_row({static_cast<double>(j), prof.p_sched[j], prof.r_bar_M[j],
                   prof.r_bar_m[j], prof.priv_rate[j]});
  }
  w.close();
  return path;
}

std::string write_trace_csv(const std::string& path,
                            const std::vector<StepRecord>& trace, int n) {
  std::vector<std::string> cols = {"block", "scheduled", "mode", "Rp",
                                   "Ro",    "rho",       "outage"};
  for (int j = 0; j < n; ++j) cols.push_back("qp_" + std::to_string(j));
  for (int j = 0; j < n; ++j) cols.push_back("qo_" + std::to_string(j));
  CsvWriter w(path, cols);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const StepRecord& rec = trace[k];
    std::vector<std::string> cells = {
        std::to_string(k),
        std::to_string(rec.decision.node),
        tx_mode_name(rec.decision.mode),
        format_g9(rec.decision.rp),
        format_g9(rec.decision.ro),
        format_g9(rec.decision.rho),
        rec.decision.outage ? "1" : "0"};
    for (int j = 0; j < n; ++j) cells.push_back(format_g9(rec.qp_before[j]));
    for (int j = 0; j < n; ++j) cells.push_back(format_g9(rec.qo_before[j]));
    w.row(cells);
  }
  w.close();
  return path;
}

std::string write_manifest(const std::string& out_dir, const std::string& command,
                           const AppConfig& cfg,
                           const std::vector<std::string>& csv_paths,
                           const std::string& plot_path) {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["config"] = resolved_entries(cfg);
  j["outputs"] = nlohmann::json::array();
  for (const std::string& p : csv_paths) {
    j["outputs"].push_back({{"file", fs::path(p).filename().string()},
                            {"fnv1a64", content_hash(p)}});
  }
  if (!plot_path.empty()) {
    j["plot"] = fs::path(plot_path).filename().string();
  }
  std::string path = join_path(out_dir, "manifest.json");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
  return path;
}

OutputBundle run_preset(const std::string& name, const AppConfig& cfg,
                        const std::string& out_dir, int workers) {
  if (std::find(kPresetNames.begin(), kPresetNames.end(), name) ==
      kPresetNames.end()) {
    std::string known;
    for (const auto& p : kPresetNames) known += (known.empty() ? "" : ", ") + p;
    throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
  }
  fs::create_directories(out_dir);

  OutputBundle bundle;
  if (name == "region-single") {
    bundle = region_single_preset(cfg, out_dir);
  } else if (name == "region-pos") {
    bundle = region_pos_preset(cfg, out_dir);
  } else if (name == "sweep-n") {
    bundle = sweep_n_preset(cfg, out_dir, workers);
  } else if (name == "sweep-V") {
    SweepOutputs outs = run_metric_sweep(
        cfg, SweepParam::kV, "V", values_or(cfg.V, {1, 2, 4, 8, 16, 32, 50}),
        {CsiMode::kPerfect, CsiMode::kImperfect}, out_dir, workers);
    bundle.csv_paths = outs.paths;
    bundle.plot_path = join_path(out_dir, "plot_sweep_V.gp");
    write_plot_script(bundle.plot_path,
                      sweep_plot("V", bundle.csv_paths, "rate (bits/use/node)"));
  } else if (name == "sweep-kappa") {
    SweepOutputs outs = run_metric_sweep(
        cfg, SweepParam::kKappa, "kappa", values_or(cfg.kappa, {1, 2, 3, 5, 8}),
        {CsiMode::kPerfect, CsiMode::kImperfect}, out_dir, workers);
    bundle.csv_paths = outs.paths;
    bundle.plot_path = join_path(out_dir, "plot_sweep_kappa.gp");
    write_plot_script(bundle.plot_path,
                      sweep_plot("kappa", bundle.csv_paths, "rate (bits/use/node)"));
  } else if (name == "sweep-gamma") {
    SweepOutputs outs = run_metric_sweep(
        cfg, SweepParam::kGamma, "gamma",
        values_or(cfg.gamma, {0.02, 0.05, 0.1, 0.2, 0.4}), {CsiMode::kImperfect},
        out_dir, workers);
    bundle.csv_paths = outs.paths;
    bundle.plot_path = join_path(out_dir, "plot_sweep_gamma.gp");
    write_plot_script(bundle.plot_path,
                      sweep_plot("gamma", bundle.csv_paths, "rate (bits/use/node)"));
  } else {  // sweep-sigma
    SweepOutputs outs = run_metric_sweep(
        cfg, SweepParam::kSigma, "sigma", values_or(cfg.sigma, {0, 0.25, 0.5, 0.7}),
        {CsiMode::kImperfect}, out_dir, workers);
    bundle.csv_paths = outs.paths;

    // Mean-only reference alongside the sigma curve.
    AppConfig mo_cfg = with_single(cfg, SweepParam::kSigma, 0.0);
    mo_cfg.csi = CsiMode::kMeanOnly;
    RunConfig mo = resolve_run_config(mo_cfg);
    std::string mo_path = join_path(out_dir, "sweep_sigma_mean_only.csv");
    bundle.csv_paths.push_back(
        write_metrics_csv(mo_path, "sigma", {0.0}, {run(mo)}));

    bundle.plot_path = join_path(out_dir, "plot_sweep_sigma.gp");
    write_plot_script(bundle.plot_path,
                      sweep_plot("sigma", bundle.csv_paths, "rate (bits/use/node)"));
  }

  bundle.manifest_path =
      write_manifest(out_dir, "preset " + name, cfg, bundle.csv_paths, bundle.plot_path);
  return bundle;
}

}  // namespace privsched
