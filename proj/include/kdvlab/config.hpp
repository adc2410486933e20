#pragma once

#include <stdexcept>
#include <string>

#include "kdvlab/model.hpp"
#include "kdvlab/simulate.hpp"

namespace kdvlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat dotted-key configuration.  The full documented key set lives in the
/// README; unknown keys are rejected.
struct Config {
  // domain.*
  double L = 5.0;
  // grid.*
  int nx = 256;
  int nrho = 256;
  // time.*
  double dt = 0.0;  // 0 = auto: min(0.25*h, 0.01)
  double horizon = 600.0;
  int record_stride = 1;
  int snapshot_stride = 0;
  // gains.*
  double alpha = 1.0;
  double beta = 0.5;
  // delay.*
  std::string delay_kind = "sinusoidal";
  double delay_tau0 = 0.0;  // constant kind: the constant value
  double delay_mean = 2.0;
  double delay_amplitude = 0.5;
  double delay_frequency = 1.0;
  std::string delay_file;
  double delay_M = 0.0;   // 0 = auto (analytic kinds only)
  double delay_d = -1.0;  // < 0 = auto (analytic kinds only)
  // scheme.*
  double theta = 0.5;
  double theta_bias = 0.0;
  std::string delay_channel = "transport";
  bool nonlinear = false;
  double picard_tol = 1e-10;
  int picard_max_iters = 25;
  double smoothing = 1e-5;
  int coupling_passes = 2;
  // ic.*
  std::string ic_kind = "sine";
  double ic_amplitude = 0.1;
  std::string z0_kind = "zero";
  double z0_value = 0.0;
  // cert.*
  double cert_mu1 = 0.0;  // 0 = optimizer crossing (beta != 0) or admissible midpoint
  double cert_mu2 = 0.0;  // 0 = mu2_of_mu1(mu1)
  std::string cert_variant = "min";  // theorem | proposition | min
  // optimize.*
  double optimize_tol = 1e-12;
  int optimize_points = 1000;
  // fit.* / bound.* / kato.*
  double fit_window_fraction = 0.5;
  double bound_slack = 0.05;
  double kato_T = 50.0;
  // sweep.*
  int sweep_max_points = 10000;
  double sweep_simulate_horizon = 0.0;
};

Config parse_config_text(const std::string& text, const std::string& origin = "<text>");
Config parse_config_file(const std::string& path);

/// Applies one "key=value" override (same key set as the file format).
void apply_override(Config& cfg, const std::string& assignment);

/// Resolution presets: coarse (nx=nrho=128), reference (256), double (512);
/// dt reverts to the auto rule.
void apply_resolution_preset(Config& cfg, const std::string& preset);

/// Cross-field validation (ranges, kind names); throws ConfigError.
void validate_config(const Config& cfg);

/// Sorted key=value dump of every key (defaults materialized).
std::string dump_config(const Config& cfg);

DelayProfile make_delay_profile(const Config& cfg);
SchemeConfig make_scheme(const Config& cfg);
InitialCondition make_initial_condition(const Config& cfg);
InitialHistory make_initial_history(const Config& cfg);

/// FNV-1a 64-bit digest used for manifest input digests.
std::string fnv1a_digest(const std::string& bytes);

}  // namespace kdvlab
