// privsched: simulate private/open-rate scheduling on a fading uplink.
//
//   privsched run     [key=value ...]   one dynamic-control run, metrics to stdout
//   privsched preset  NAME [key=value]  regenerate one experiment family into --out
//   privsched region  [key=value ...]   single-user rate-region boundary
//   privsched pos     [key=value ...]   opportunistic-scheduling profile
//   privsched compare [key=value ...]   dynamic control vs. the scheduling bound
//
// Configuration precedence: defaults, then --config file, then key=value
// positionals, then --seed. Exit 0 on success, 1 on a configuration error,
// 2 on a runtime failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "privsched/config.hpp"
#include "privsched/io.hpp"
#include "privsched/pos.hpp"
#include "privsched/presets.hpp"
#include "privsched/sim.hpp"
#include "privsched/single_user.hpp"

namespace {

namespace fs = std::filesystem;
using namespace privsched;

struct Args {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  bool trace = false;
  std::string preset_name;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--config", a.config_path, "key=value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "override the seed")
      ->each([&a](const std::string&) { a.seed_given = true; });
  cmd->add_option("--out", a.out_dir, "directory for CSVs and the manifest");
  cmd->add_option("--workers", a.workers, "parallel sweep points")
      ->check(CLI::PositiveNumber);
  cmd->add_option("overrides", a.overrides, "key=value overrides");
}

AppConfig load(const Args& a) {
  AppConfig cfg;
  if (!a.config_path.empty()) cfg = parse_config_file(a.config_path);
  for (const std::string& kv : a.overrides) apply_assignment(cfg, kv);
  if (a.seed_given) cfg.seed = a.seed;
  validate(cfg);
  return cfg;
}

void print_metric(const char* name, double value) {
  std::cout << name << " = " << format_g9(value) << '\n';
}

void print_metrics(const RunMetrics& m) {
  print_metric("util_avg", m.util_avg);
  print_metric("util_realized", m.util_realized);
  print_metric("qp_avg", m.qp_avg);
  print_metric("qo_avg", m.qo_avg);
  print_metric("lambda_p", m.lambda_p);
  print_metric("lambda_o", m.lambda_o);
  print_metric("serv_p", m.serv_p);
  print_metric("serv_o", m.serv_o);
  print_metric("goodput_p", m.goodput_p);
  print_metric("goodput_o", m.goodput_o);
  print_metric("outage_freq", m.outage_freq);
  print_metric("blocks", static_cast<double>(m.blocks));
}

int cmd_run(const Args& a) {
  if (a.trace && a.out_dir.empty()) {
    throw std::invalid_argument("--trace needs --out to receive trace.csv");
  }
  AppConfig cfg = load(a);
  RunConfig rc = resolve_run_config(cfg);
  std::vector<StepRecord> trace;
  RunMetrics m = run(rc, a.trace ? &trace : nullptr);
  print_metrics(m);
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    std::vector<std::string> paths;
    paths.push_back(write_metrics_csv((fs::path(a.out_dir) / "run_metrics.csv").string(),
                                      "V", {rc.V}, {m}));
    if (a.trace) {
      paths.push_back(write_trace_csv((fs::path(a.out_dir) / "trace.csv").string(),
                                      trace, rc.channel.n));
    }
    write_manifest(a.out_dir, "run", cfg, paths, "");
  }
  return 0;
}

int cmd_preset(const Args& a) {
  AppConfig cfg = load(a);
  std::string name = a.preset_name.empty() ? cfg.preset : a.preset_name;
  if (name.empty()) {
    throw std::invalid_argument("preset: pass a name or set preset= in the config");
  }
  std::string out = a.out_dir.empty() ? name : a.out_dir;
  OutputBundle bundle = run_preset(name, cfg, out, a.workers);
  for (const std::string& p : bundle.csv_paths) std::cout << p << '\n';
  if (!bundle.plot_path.empty()) std::cout << bundle.plot_path << '\n';
  std::cout << bundle.manifest_path << '\n';
  return 0;
}

int cmd_region(const Args& a) {
  AppConfig cfg = load(a);
  double mu_up = cfg.uplink_means.empty() ? 2.0 : cfg.uplink_means[0];
  double mu_cross = cfg.cross_means.empty() ? 1.0 : cfg.cross_means[0];
  std::vector<RatePair> path =
      sample_rate_path(mu_up, mu_cross, cfg.P, cfg.seed, cfg.horizon);
  auto separate = sweep_region(path, 33, EncodingMode::kSeparate, TieRule::kPreferOpen);
  auto joint = sweep_region(path, 33, EncodingMode::kJoint, TieRule::kPreferOpen);
  if (a.out_dir.empty()) {
    std::cout << "alpha,open_rate,priv_rate,lambda_or_pp,mode\n";
    auto dump = [](const std::vector<RegionPoint>& pts, const char* mode) {
      for (const RegionPoint& p : pts) {
        std::cout << format_g9(p.alpha) << ',' << format_g9(p.open_rate) << ','
                  << format_g9(p.priv_rate) << ',' << format_g9(p.param) << ','
                  << mode << '\n';
      }
    };
    dump(separate, "separate");
    dump(joint, "joint");
  } else {
    fs::create_directories(a.out_dir);
    std::string p = write_region_csv((fs::path(a.out_dir) / "region.csv").string(),
                                     separate, joint);
    write_manifest(a.out_dir, "region", cfg, {p}, "");
    std::cout << p << '\n';
  }
  return 0;
}

int cmd_pos(const Args& a) {
  AppConfig cfg = load(a);
  ChannelConfig chan = resolve_run_config(cfg).channel;
  PosProfile prof = pos_rates(chan, cfg.horizon);
  print_metric("sum_priv", prof.sum_priv);
  print_metric("sum_priv_se", prof.sum_priv_se);
  print_metric("open_at_corner", prof.open_at_corner);
  print_metric("r_opp", prof.r_opp);
  print_metric("idle_frac", prof.idle_frac);
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    std::string p = write_pos_profile_csv(
        (fs::path(a.out_dir) / "pos_profile.csv").string(), prof);
    write_manifest(a.out_dir, "pos", cfg, {p}, "");
  }
  return 0;
}

int cmd_compare(const Args& a) {
  AppConfig cfg = load(a);
  RunConfig rc = resolve_run_config(cfg);
  PosComparison c = compare_pos(rc, cfg.horizon);
  print_metric("pos_priv", c.pos_priv);
  print_metric("dyn_priv", c.dyn_priv);
  print_metric("dyn_over_pos", c.pos_priv > 0 ? c.dyn_priv / c.pos_priv : 0.0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"private/open-rate scheduling simulator"};
  app.require_subcommand(1);
  Args args;

  CLI::App* c_run = app.add_subcommand("run", "one dynamic-control run");
  c_run->add_flag("--trace", args.trace, "write per-block trace.csv (needs --out)");
  CLI::App* c_preset = app.add_subcommand("preset", "regenerate an experiment family");
  c_preset->add_option("name", args.preset_name, "preset name");
  CLI::App* c_region = app.add_subcommand("region", "single-user region boundary");
  CLI::App* c_pos = app.add_subcommand("pos", "opportunistic-scheduling profile");
  CLI::App* c_compare = app.add_subcommand("compare", "dynamic control vs. bound");
  for (CLI::App* c : {c_run, c_preset, c_region, c_pos, c_compare}) {
    add_common(c, args);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_run->parsed()) return cmd_run(args);
    if (c_preset->parsed()) return cmd_preset(args);
    if (c_region->parsed()) return cmd_region(args);
    if (c_pos->parsed()) return cmd_pos(args);
    return cmd_compare(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
