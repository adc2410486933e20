#include <CLI11.hpp>

#include "kdvlab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kdvlab: decay-rate certification and simulation for a boundary-damped "
               "KdV-KdV system with a time-varying delayed feedback"};
  app.require_subcommand(1);

  kdvlab::CommandOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "configuration file (key = value lines)");
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--override", opts.overrides, "override key=value (repeatable)");
    sub->add_option("--resolution", opts.resolution, "preset: coarse | reference | double");
  };

  auto* certify = app.add_subcommand("certify", "compute a decay certificate");
  add_common(certify);
  auto* optimize = app.add_subcommand("optimize", "optimize the certified decay rate");
  add_common(optimize);
  auto* simulate = app.add_subcommand("simulate", "integrate the system and verify the bound");
  add_common(simulate);
  auto* compare = app.add_subcommand("compare-channels",
                                     "twin runs with transport vs history delay channels");
  add_common(compare);
  auto* sweep = app.add_subcommand("sweep", "parameter sweep (feasibility, lambda, zeta)");
  add_common(sweep);
  sweep->add_option("--range", opts.ranges, "key=lo:hi:count (repeatable, cartesian)");

  CLI11_PARSE(app, argc, argv);

  if (certify->parsed()) return kdvlab::cmd_certify(opts);
  if (optimize->parsed()) return kdvlab::cmd_optimize(opts);
  if (simulate->parsed()) return kdvlab::cmd_simulate(opts);
  if (compare->parsed()) return kdvlab::cmd_compare_channels(opts);
  if (sweep->parsed()) return kdvlab::cmd_sweep(opts);
  return 2;
}
