#include "kdvlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace kdvlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return static_cast<int>(x);
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

using Setter = std::function<void(Config&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.L", [](Config& c, const std::string& k, const std::string& v) { c.L = parse_double(k, v); }},
      {"grid.nx", [](Config& c, const std::string& k, const std::string& v) { c.nx = parse_int(k, v); }},
      {"grid.nrho", [](Config& c, const std::string& k, const std::string& v) { c.nrho = parse_int(k, v); }},
      {"time.dt", [](Config& c, const std::string& k, const std::string& v) { c.dt = parse_double(k, v); }},
      {"time.horizon", [](Config& c, const std::string& k, const std::string& v) { c.horizon = parse_double(k, v); }},
      {"time.record_stride", [](Config& c, const std::string& k, const std::string& v) { c.record_stride = parse_int(k, v); }},
      {"time.snapshot_stride", [](Config& c, const std::string& k, const std::string& v) { c.snapshot_stride = parse_int(k, v); }},
      {"gains.alpha", [](Config& c, const std::string& k, const std::string& v) { c.alpha = parse_double(k, v); }},
      {"gains.beta", [](Config& c, const std::string& k, const std::string& v) { c.beta = parse_double(k, v); }},
      {"delay.kind", [](Config& c, const std::string&, const std::string& v) { c.delay_kind = v; }},
      {"delay.tau0", [](Config& c, const std::string& k, const std::string& v) { c.delay_tau0 = parse_double(k, v); }},
      {"delay.mean", [](Config& c, const std::string& k, const std::string& v) { c.delay_mean = parse_double(k, v); }},
      {"delay.amplitude", [](Config& c, const std::string& k, const std::string& v) { c.delay_amplitude = parse_double(k, v); }},
      {"delay.frequency", [](Config& c, const std::string& k, const std::string& v) { c.delay_frequency = parse_double(k, v); }},
      {"delay.file", [](Config& c, const std::string&, const std::string& v) { c.delay_file = v; }},
      {"delay.M", [](Config& c, const std::string& k, const std::string& v) { c.delay_M = parse_double(k, v); }},
      {"delay.d", [](Config& c, const std::string& k, const std::string& v) { c.delay_d = parse_double(k, v); }},
      {"scheme.theta", [](Config& c, const std::string& k, const std::string& v) { c.theta = parse_double(k, v); }},
      {"scheme.theta_bias", [](Config& c, const std::string& k, const std::string& v) { c.theta_bias = parse_double(k, v); }},
      {"scheme.delay_channel", [](Config& c, const std::string&, const std::string& v) { c.delay_channel = v; }},
      {"scheme.nonlinear", [](Config& c, const std::string& k, const std::string& v) { c.nonlinear = parse_bool(k, v); }},
      {"scheme.picard_tol", [](Config& c, const std::string& k, const std::string& v) { c.picard_tol = parse_double(k, v); }},
      {"scheme.picard_max_iters", [](Config& c, const std::string& k, const std::string& v) { c.picard_max_iters = parse_int(k, v); }},
      {"scheme.smoothing", [](Config& c, const std::string& k, const std::string& v) { c.smoothing = parse_double(k, v); }},
      {"scheme.coupling_passes", [](Config& c, const std::string& k, const std::string& v) { c.coupling_passes = parse_int(k, v); }},
      {"ic.kind", [](Config& c, const std::string&, const std::string& v) { c.ic_kind = v; }},
      {"ic.amplitude", [](Config& c, const std::string& k, const std::string& v) { c.ic_amplitude = parse_double(k, v); }},
      {"ic.z0_kind", [](Config& c, const std::string&, const std::string& v) { c.z0_kind = v; }},
      {"ic.z0_value", [](Config& c, const std::string& k, const std::string& v) { c.z0_value = parse_double(k, v); }},
      {"cert.mu1", [](Config& c, const std::string& k, const std::string& v) { c.cert_mu1 = parse_double(k, v); }},
      {"cert.mu2", [](Config& c, const std::string& k, const std::string& v) { c.cert_mu2 = parse_double(k, v); }},
      {"cert.variant", [](Config& c, const std::string&, const std::string& v) { c.cert_variant = v; }},
      {"optimize.tol", [](Config& c, const std::string& k, const std::string& v) { c.optimize_tol = parse_double(k, v); }},
      {"optimize.points", [](Config& c, const std::string& k, const std::string& v) { c.optimize_points = parse_int(k, v); }},
      {"fit.window_fraction", [](Config& c, const std::string& k, const std::string& v) { c.fit_window_fraction = parse_double(k, v); }},
      {"bound.slack", [](Config& c, const std::string& k, const std::string& v) { c.bound_slack = parse_double(k, v); }},
      {"kato.T", [](Config& c, const std::string& k, const std::string& v) { c.kato_T = parse_double(k, v); }},
      {"sweep.max_points", [](Config& c, const std::string& k, const std::string& v) { c.sweep_max_points = parse_int(k, v); }},
      {"sweep.simulate_horizon", [](Config& c, const std::string& k, const std::string& v) { c.sweep_simulate_horizon = parse_double(k, v); }},
  };
  return table;
}

void set_key(Config& cfg, const std::string& key, const std::string& value,
             const std::string& where) {
  const auto it = setters().find(key);
  if (it == setters().end())
    throw ConfigError("config: unknown key '" + key + "' (" + where + ")");
  it->second(cfg, key, value);
}

}  // namespace

Config parse_config_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at " + origin + ":" +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    set_key(cfg, key, value, origin + ":" + std::to_string(lineno));
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_override(Config& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override: expected key=value, got '" + assignment + "'");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--override");
}

void apply_resolution_preset(Config& cfg, const std::string& preset) {
  int n = 0;
  if (preset == "coarse") n = 128;
  else if (preset == "reference") n = 256;
  else if (preset == "double") n = 512;
  else throw ConfigError("unknown resolution preset '" + preset +
                         "' (coarse | reference | double)");
  cfg.nx = n;
  cfg.nrho = n;
  cfg.dt = 0.0;
}

void validate_config(const Config& cfg) {
  if (!(cfg.L > 0.0)) throw ConfigError("domain.L must be positive");
  if (cfg.nx < 8) throw ConfigError("grid.nx must be >= 8");
  if (cfg.nrho < 4) throw ConfigError("grid.nrho must be >= 4");
  if (cfg.dt < 0.0) throw ConfigError("time.dt must be >= 0 (0 = auto)");
  if (!(cfg.horizon > 0.0)) throw ConfigError("time.horizon must be positive");
  if (cfg.record_stride < 1) throw ConfigError("time.record_stride must be >= 1");
  if (cfg.snapshot_stride < 0) throw ConfigError("time.snapshot_stride must be >= 0");
  if (cfg.alpha < 0.0) throw ConfigError("gains.alpha must be >= 0");
  if (cfg.alpha == 0.0 && cfg.beta != 0.0)
    throw ConfigError("gains.alpha = 0 requires gains.beta = 0");
  if (cfg.delay_kind != "constant" && cfg.delay_kind != "sinusoidal" &&
      cfg.delay_kind != "tabulated")
    throw ConfigError("delay.kind must be constant | sinusoidal | tabulated");
  if (!(cfg.theta >= 0.5 && cfg.theta <= 1.0)) throw ConfigError("scheme.theta must lie in [0.5, 1]");
  if (cfg.theta_bias < 0.0) throw ConfigError("scheme.theta_bias must be >= 0");
  if (cfg.delay_channel != "transport" && cfg.delay_channel != "history")
    throw ConfigError("scheme.delay_channel must be transport | history");
  if (!(cfg.picard_tol > 0.0)) throw ConfigError("scheme.picard_tol must be positive");
  if (cfg.picard_max_iters < 1) throw ConfigError("scheme.picard_max_iters must be >= 1");
  if (cfg.smoothing < 0.0) throw ConfigError("scheme.smoothing must be >= 0");
  if (cfg.coupling_passes < 1) throw ConfigError("scheme.coupling_passes must be >= 1");
  if (cfg.ic_kind != "zero" && cfg.ic_kind != "sine")
    throw ConfigError("ic.kind must be zero | sine");
  if (cfg.z0_kind != "zero" && cfg.z0_kind != "constant" && cfg.z0_kind != "match")
    throw ConfigError("ic.z0_kind must be zero | constant | match");
  if (cfg.cert_variant != "theorem" && cfg.cert_variant != "proposition" &&
      cfg.cert_variant != "min")
    throw ConfigError("cert.variant must be theorem | proposition | min");
  if (!(cfg.optimize_tol > 0.0)) throw ConfigError("optimize.tol must be positive");
  if (cfg.optimize_points < 2) throw ConfigError("optimize.points must be >= 2");
  if (!(cfg.fit_window_fraction > 0.0 && cfg.fit_window_fraction <= 1.0))
    throw ConfigError("fit.window_fraction must lie in (0, 1]");
  if (cfg.bound_slack < 0.0) throw ConfigError("bound.slack must be >= 0");
  if (!(cfg.kato_T > 0.0)) throw ConfigError("kato.T must be positive");
  if (cfg.sweep_max_points < 1) throw ConfigError("sweep.max_points must be >= 1");
  if (cfg.sweep_simulate_horizon < 0.0) throw ConfigError("sweep.simulate_horizon must be >= 0");
}

std::string dump_config(const Config& c) {
  std::map<std::string, std::string> kv;
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  kv["domain.L"] = num(c.L);
  kv["grid.nx"] = std::to_string(c.nx);
  kv["grid.nrho"] = std::to_string(c.nrho);
  kv["time.dt"] = num(c.dt);
  kv["time.horizon"] = num(c.horizon);
  kv["time.record_stride"] = std::to_string(c.record_stride);
  kv["time.snapshot_stride"] = std::to_string(c.snapshot_stride);
  kv["gains.alpha"] = num(c.alpha);
  kv["gains.beta"] = num(c.beta);
  kv["delay.kind"] = c.delay_kind;
  kv["delay.tau0"] = num(c.delay_tau0);
  kv["delay.mean"] = num(c.delay_mean);
  kv["delay.amplitude"] = num(c.delay_amplitude);
  kv["delay.frequency"] = num(c.delay_frequency);
  kv["delay.file"] = c.delay_file;
  kv["delay.M"] = num(c.delay_M);
  kv["delay.d"] = num(c.delay_d);
  kv["scheme.theta"] = num(c.theta);
  kv["scheme.theta_bias"] = num(c.theta_bias);
  kv["scheme.delay_channel"] = c.delay_channel;
  kv["scheme.nonlinear"] = c.nonlinear ? "true" : "false";
  kv["scheme.picard_tol"] = num(c.picard_tol);
  kv["scheme.picard_max_iters"] = std::to_string(c.picard_max_iters);
  kv["scheme.smoothing"] = num(c.smoothing);
  kv["scheme.coupling_passes"] = std::to_string(c.coupling_passes);
  kv["ic.kind"] = c.ic_kind;
  kv["ic.amplitude"] = num(c.ic_amplitude);
  kv["ic.z0_kind"] = c.z0_kind;
  kv["ic.z0_value"] = num(c.z0_value);
  kv["cert.mu1"] = num(c.cert_mu1);
  kv["cert.mu2"] = num(c.cert_mu2);
  kv["cert.variant"] = c.cert_variant;
  kv["optimize.tol"] = num(c.optimize_tol);
  kv["optimize.points"] = std::to_string(c.optimize_points);
  kv["fit.window_fraction"] = num(c.fit_window_fraction);
  kv["bound.slack"] = num(c.bound_slack);
  kv["kato.T"] = num(c.kato_T);
  kv["sweep.max_points"] = std::to_string(c.sweep_max_points);
  kv["sweep.simulate_horizon"] = num(c.sweep_simulate_horizon);

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

DelayProfile make_delay_profile(const Config& cfg) {
  if (cfg.delay_kind == "constant") {
    const double value = cfg.delay_tau0 > 0.0 ? cfg.delay_tau0 : cfg.delay_mean;
    if (!(value > 0.0)) throw ConfigError("delay.tau0 must be positive for the constant kind");
    const double M = cfg.delay_M > 0.0 ? cfg.delay_M : value;
    const double d = cfg.delay_d >= 0.0 ? cfg.delay_d : 0.0;
    return DelayProfile::constant(value, M, d);
  }
  if (cfg.delay_kind == "sinusoidal") {
    const double M = cfg.delay_M > 0.0 ? cfg.delay_M : cfg.delay_mean + cfg.delay_amplitude;
    const double d = cfg.delay_d >= 0.0 ? cfg.delay_d
                                        : cfg.delay_amplitude * std::abs(cfg.delay_frequency);
    return DelayProfile::sinusoidal(cfg.delay_mean, cfg.delay_amplitude, cfg.delay_frequency, M,
                                    d);
  }
  // tabulated: declared bounds are required, never inferred.
  if (cfg.delay_file.empty()) throw ConfigError("delay.file is required for the tabulated kind");
  if (!(cfg.delay_M > 0.0) || cfg.delay_d < 0.0)
    throw ConfigError("delay.M and delay.d must be declared for the tabulated kind");
  std::ifstream in(cfg.delay_file);
  if (!in) throw ConfigError("cannot open delay.file '" + cfg.delay_file + "'");
  std::vector<double> ts, taus;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double t, tau;
    if (row >> t >> tau) {
      ts.push_back(t);
      taus.push_back(tau);
    }
  }
  try {
    return DelayProfile::tabulated(std::move(ts), std::move(taus), cfg.delay_M, cfg.delay_d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("delay.file: ") + e.what());
  }
}

SchemeConfig make_scheme(const Config& cfg) {
  SchemeConfig s;
  s.theta = cfg.theta;
  s.theta_bias = cfg.theta_bias;
  s.dt = cfg.dt;
  s.horizon = cfg.horizon;
  s.delay_channel = cfg.delay_channel == "history" ? DelayChannelKind::history
                                                   : DelayChannelKind::transport;
  s.nonlinear = cfg.nonlinear;
  s.picard_tol = cfg.picard_tol;
  s.picard_max_iters = cfg.picard_max_iters;
  s.smoothing = cfg.smoothing;
  s.coupling_passes = cfg.coupling_passes;
  s.record_stride = cfg.record_stride;
  s.snapshot_stride = cfg.snapshot_stride;
  return s;
}

InitialCondition make_initial_condition(const Config& cfg) {
  InitialCondition ic;
  ic.kind = cfg.ic_kind == "zero" ? InitialCondition::Kind::zero : InitialCondition::Kind::sine;
  ic.amplitude = cfg.ic_amplitude;
  return ic;
}

InitialHistory make_initial_history(const Config& cfg) {
  InitialHistory h;
  if (cfg.z0_kind == "constant")
    h.kind = InitialHistory::Kind::constant;
  else if (cfg.z0_kind == "match")
    h.kind = InitialHistory::Kind::match;
  else
    h.kind = InitialHistory::Kind::zero;
  h.value = cfg.z0_value;
  return h;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kdvlab
