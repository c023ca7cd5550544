#include "privsched/config.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace privsched {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE ||
      std::isnan(v)) {
    bad_key(key, "expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = trim(text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (item.empty()) bad_key(key, "empty list element");
    out.push_back(parse_double(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) bad_key(key, "expected at least one value");
  return out;
}

long long parse_int(const std::string& key, const std::string& text) {
  double v = parse_double(key, text);
  long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v) bad_key(key, "expected an integer");
  return i;
}

// Shortest decimal that round-trips the double, so manifests read naturally
// (0.1 stays "0.1") while still pinning the value exactly.
std::string format_exact(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string join_exact(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_exact(xs[i]);
  }
  return s;
}

}  // namespace

void apply_assignment(AppConfig& cfg, const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("expected key=value, got '" + assignment + "'");
  }
  std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw std::invalid_argument("empty config key");
  if (value.empty()) bad_key(key, "empty value");

  if (key == "n") {
    cfg.n = parse_list(key, value);
  } else if (key == "P") {
    cfg.P = parse_double(key, value);
  } else if (key == "uplink_means") {
    cfg.uplink_means = parse_list(key, value);
  } else if (key == "uplink_interval") {
    cfg.uplink_interval = parse_list(key, value);
    cfg.uplink_interval_given = true;
  } else if (key == "cross_means") {
    cfg.cross_means = parse_list(key, value);
  } else if (key == "cross_interval") {
    cfg.cross_interval = parse_list(key, value);
    cfg.cross_interval_given = true;
  } else if (key == "sigma") {
    cfg.sigma = parse_list(key, value);
  } else if (key == "V") {
    cfg.V = parse_list(key, value);
  } else if (key == "kappa") {
    cfg.kappa = parse_list(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_list(key, value);
  } else if (key == "horizon") {
    cfg.horizon = parse_int(key, value);
  } else if (key == "warmup") {
    cfg.warmup = parse_int(key, value);
  } else if (key == "seed") {
    long long s = parse_int(key, value);
    if (s < 0) bad_key(key, "seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "csi") {
    if (value == "perfect") {
      cfg.csi = CsiMode::kPerfect;
    } else if (value == "imperfect") {
      cfg.csi = CsiMode::kImperfect;
    } else if (value == "mean_only") {
      cfg.csi = CsiMode::kMeanOnly;
    } else {
      bad_key(key, "expected perfect, imperfect or mean_only, got '" + value + "'");
    }
  } else if (key == "preset") {
    cfg.preset = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

AppConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  AppConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_assignment(cfg, line);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " +
                                  e.what());
    }
  }
  return cfg;
}

void validate(const AppConfig& cfg) {
  for (double v : cfg.n) {
    if (v < 1 || v != std::floor(v)) bad_key("n", "must be a positive integer");
  }
  if (!(cfg.P > 0.0)) bad_key("P", "must be > 0");
  for (double v : cfg.sigma) {
    if (!(v >= 0.0)) bad_key("sigma", "must be >= 0");
  }
  for (double v : cfg.V) {
    if (!(v > 0.0)) bad_key("V", "must be > 0");
  }
  for (double v : cfg.kappa) {
    if (!(v > 0.0)) bad_key("kappa", "must be > 0");
  }
  for (double v : cfg.gamma) {
    if (!(v >= 0.0 && v < 1.0)) bad_key("gamma", "must lie in [0,1)");
  }
  if (cfg.horizon < 1) bad_key("horizon", "must be >= 1");
  if (cfg.warmup >= cfg.horizon) bad_key("warmup", "must be < horizon");
  auto check_interval = [](const std::vector<double>& iv, const char* key) {
    if (iv.size() != 2) bad_key(key, "expected lo,hi");
    if (!(iv[0] >= 0.0) || iv[0] > iv[1] || !(iv[1] > 0.0)) {
      bad_key(key, "need 0 <= lo <= hi, hi > 0");
    }
  };
  check_interval(cfg.uplink_interval, "uplink_interval");
  check_interval(cfg.cross_interval, "cross_interval");
  if (!cfg.uplink_means.empty() && cfg.uplink_interval_given) {
    bad_key("uplink_means", "give uplink_means or uplink_interval, not both");
  }
  if (!cfg.cross_means.empty() && cfg.cross_interval_given) {
    bad_key("cross_means", "give cross_means or cross_interval, not both");
  }
  for (double v : cfg.uplink_means) {
    if (!(v > 0.0)) bad_key("uplink_means", "must be > 0");
  }
  for (double v : cfg.cross_means) {
    if (!(v > 0.0)) bad_key("cross_means", "must be > 0");
  }
}

double single_value(const std::vector<double>& values, const std::string& key) {
  if (values.size() != 1) {
    bad_key(key, "a single value is required here, got a list of " +
                     std::to_string(values.size()));
  }
  return values[0];
}

RunConfig resolve_run_config(const AppConfig& cfg) {
  validate(cfg);
  int n = static_cast<int>(single_value(cfg.n, "n"));

  ChannelConfig chan;
  if (cfg.uplink_means.empty() || cfg.cross_means.empty()) {
    chan = sample_priors_uniform(n, cfg.uplink_interval[0], cfg.uplink_interval[1],
                                 cfg.cross_interval[0], cfg.cross_interval[1],
                                 cfg.seed);
  } else {
    chan.n = n;
    chan.seed = cfg.seed;
    chan.uplink_means.resize(n);
    chan.cross_means.resize(static_cast<std::size_t>(n) * (n - 1));
  }
  chan.P = cfg.P;
  chan.sigma = single_value(cfg.sigma, "sigma");
  chan.seed = cfg.seed;

  if (!cfg.uplink_means.empty()) {
    if (cfg.uplink_means.size() == 1) {
      chan.uplink_means.assign(n, cfg.uplink_means[0]);
    } else if (cfg.uplink_means.size() == static_cast<std::size_t>(n)) {
      chan.uplink_means = cfg.uplink_means;
    } else {
      bad_key("uplink_means", "expected 1 or n = " + std::to_string(n) +
                                  " values, got " +
                                  std::to_string(cfg.uplink_means.size()));
    }
  }
  if (!cfg.cross_means.empty()) {
    std::size_t pairs = static_cast<std::size_t>(n) * (n - 1);
    if (cfg.cross_means.size() == 1) {
      // One value fans out to every ordered pair (symmetric eavesdroppers).
      chan.cross_means.assign(pairs, cfg.cross_means[0]);
    } else if (cfg.cross_means.size() == pairs) {
      chan.cross_means = cfg.cross_means;
    } else {
      bad_key("cross_means", "expected 1 or n*(n-1) = " + std::to_string(pairs) +
                                 " values, got " + std::to_string(cfg.cross_means.size()));
    }
  }
  validate(chan);

  RunConfig run;
  run.channel = std::move(chan);
  run.util.kappa = single_value(cfg.kappa, "kappa");
  run.V = single_value(cfg.V, "V");
  run.gamma = single_value(cfg.gamma, "gamma");
  run.csi = cfg.csi;
  run.horizon = cfg.horizon;
  run.warmup = cfg.warmup;
  validate(run);
  return run;
}

std::map<std::string, std::string> resolved_entries(const AppConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["n"] = join_exact(cfg.n);
  kv["P"] = format_exact(cfg.P);
  if (!cfg.uplink_means.empty()) kv["uplink_means"] = join_exact(cfg.uplink_means);
  kv["uplink_interval"] = join_exact(cfg.uplink_interval);
  if (!cfg.cross_means.empty()) kv["cross_means"] = join_exact(cfg.cross_means);
  kv["cross_interval"] = join_exact(cfg.cross_interval);
  kv["sigma"] = join_exact(cfg.sigma);
  kv["V"] = join_exact(cfg.V);
  kv["kappa"] = join_exact(cfg.kappa);
  kv["gamma"] = join_exact(cfg.gamma);
  kv["horizon"] = std::to_string(cfg.horizon);
  kv["warmup"] = std::to_string(cfg.warmup);
  kv["seed"] = std::to_string(cfg.seed);
  switch (cfg.csi) {
    case CsiMode::kPerfect: kv["csi"] = "perfect"; break;
    case CsiMode::kImperfect: kv["csi"] = "imperfect"; break;
    case CsiMode::kMeanOnly: kv["csi"] = "mean_only"; break;
  }
  if (!cfg.preset.empty()) kv["preset"] = cfg.preset;
  return kv;
}

}  // namespace privsched
