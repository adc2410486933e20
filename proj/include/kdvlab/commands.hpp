#pragma once

#include <string>
#include <vector>

#include "kdvlab/certify.hpp"
#include "kdvlab/config.hpp"

namespace kdvlab {

inline constexpr const char* kToolVersion = "kdvlab 0.1.0";

/// Options shared by every subcommand.  Exit-status contract: 0 success,
/// 1 infeasible / failed bound / runtime failure, 2 configuration error.
struct CommandOptions {
  std::string config_path;              // empty = built-in defaults
  std::vector<std::string> overrides;   // repeatable key=value
  std::string resolution;               // coarse | reference | double (optional)
  std::string out_dir = "out";
  std::vector<std::string> ranges;      // sweep: key=lo:hi:count (repeatable)
  bool quiet = false;
};

int cmd_certify(const CommandOptions& opts);
int cmd_optimize(const CommandOptions& opts);
int cmd_simulate(const CommandOptions& opts);
int cmd_compare_channels(const CommandOptions& opts);
int cmd_sweep(const CommandOptions& opts);

/// Default certificate inputs for a configuration: the optimizer crossing when
/// beta != 0 (with clamps keeping mu1*L < 1 and mu2 < 1), the midpoint of the
/// admissible interval when beta = 0.  Explicit cert.mu1 / cert.mu2 win.
struct CertificateInputs {
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::optional<RateVariant> variant;  // nullopt = min of both f formulas
};
CertificateInputs resolve_certificate_inputs(const Config& cfg, const DelayProfile& profile);

/// Loads, applies the resolution preset and overrides, validates.
Config load_config(const CommandOptions& opts, std::string* raw_text = nullptr);

}  // namespace kdvlab
