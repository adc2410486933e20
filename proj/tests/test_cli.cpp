#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdvlab/commands.hpp"
#include "kdvlab/config.hpp"

using namespace kdvlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kdvlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const std::string text =
      "# reference configuration\n"
      "domain.L = 5.0\n"
      "grid.nx = 128\n"
      "gains.alpha = 1\n"
      "gains.beta = 0.5\n"
      "delay.kind = sinusoidal\n"
      "delay.mean = 2.0\n"
      "delay.amplitude = 0.5   # gentle\n"
      "delay.frequency = 1.0\n"
      "delay.M = 3.0\n"
      "delay.d = 0.5\n";
  const Config cfg = parse_config_text(text);
  CHECK(cfg.L == 5.0);
  CHECK(cfg.nx == 128);
  CHECK(cfg.delay_M == 3.0);
  validate_config(cfg);

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config_text("domain.length = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("grid.nx == 12\n"), ConfigError);
  }
  SUBCASE("type errors are rejected") {
    CHECK_THROWS_AS(parse_config_text("grid.nx = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("scheme.nonlinear = maybe\n"), ConfigError);
  }
  SUBCASE("overrides") {
    Config c2 = cfg;
    apply_override(c2, "grid.nx=64");
    CHECK(c2.nx == 64);
    CHECK_THROWS_AS(apply_override(c2, "nonsense"), ConfigError);
    CHECK_THROWS_AS(apply_override(c2, "no.such.key=1"), ConfigError);
  }
  SUBCASE("presets") {
    Config c2 = cfg;
    apply_resolution_preset(c2, "double");
    CHECK(c2.nx == 512);
    CHECK(c2.nrho == 512);
    CHECK_THROWS_AS(apply_resolution_preset(c2, "huge"), ConfigError);
  }
  SUBCASE("validation catches bad ranges") {
    Config c2 = cfg;
    c2.theta = 0.3;
    CHECK_THROWS_AS(validate_config(c2), ConfigError);
    c2 = cfg;
    c2.delay_channel = "psychic";
    CHECK_THROWS_AS(validate_config(c2), ConfigError);
  }
}

TEST_CASE("delay profile from config") {
  Config cfg;
  cfg.delay_kind = "constant";
  cfg.delay_tau0 = 1.5;
  cfg.delay_M = 0.0;
  const DelayProfile p = make_delay_profile(cfg);
  CHECK(p.tau(3.0) == 1.5);
  CHECK(p.M() == 1.5);
  CHECK(p.d() == 0.0);

  cfg.delay_kind = "tabulated";
  CHECK_THROWS_AS(make_delay_profile(cfg), ConfigError);  // file + declared bounds required
}

TEST_CASE("cmd_certify behavior and exit codes") {
  const fs::path out = temp_dir("certify");
  CommandOptions opts;
  opts.out_dir = out.string();
  opts.overrides = {"cert.mu1=0.04"};

  SUBCASE("figure-one parameters are feasible") {
    CHECK(cmd_certify(opts) == 0);
    const std::string kv = slurp(out / "certificate.kv");
    CHECK(kv.find("feasible = true") != std::string::npos);
    CHECK(kv.find("mu1 = 0.04") != std::string::npos);
    CHECK(slurp(out / "run_manifest.txt").find("config_digest") != std::string::npos);
  }
  SUBCASE("L beyond the certified range exits 1 with a message") {
    opts.overrides.push_back("domain.L=6");
    CHECK(cmd_certify(opts) == 1);
  }
  SUBCASE("beta = 0 takes the f-only branch") {
    opts.overrides = {"gains.beta=0", "cert.mu1=0.05"};
    CHECK(cmd_certify(opts) == 0);
    const std::string kv = slurp(out / "certificate.kv");
    CHECK(kv.find("mu2 = 0") != std::string::npos);
  }
  SUBCASE("infeasible gains exit 1") {
    opts.overrides = {"gains.alpha=0.5", "gains.beta=1.0"};
    CHECK(cmd_certify(opts) == 1);
  }
  SUBCASE("config errors exit 2") {
    opts.overrides = {"grid.nx=banana"};
    CHECK(cmd_certify(opts) == 2);
    opts.overrides = {"scheme.theta=0.2"};
    CHECK(cmd_certify(opts) == 2);
  }
}

TEST_CASE("cmd_optimize writes the curve table and crossing") {
  const fs::path out = temp_dir("optimize");
  CommandOptions opts;
  opts.out_dir = out.string();
  opts.overrides = {"optimize.points=10"};
  CHECK(cmd_optimize(opts) == 0);
  const std::string tsv = slurp(out / "rate_curves.tsv");
  CHECK(tsv.find("# kdvlab-curve v1") == 0);
  // 10 points requested -> 11 rows after the two header lines
  int rows = 0;
  std::istringstream ss(tsv);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 11);

  SUBCASE("crossing is independent of the grid resolution") {
    const std::string r1 = slurp(out / "report.txt");
    const fs::path out2 = temp_dir("optimize2");
    CommandOptions o2;
    o2.out_dir = out2.string();
    o2.overrides = {"optimize.points=1000"};
    CHECK(cmd_optimize(o2) == 0);
    const std::string r2 = slurp(out2 / "report.txt");
    auto crossing_line = [](const std::string& rep) {
      const auto pos = rep.find("crossing mu1*");
      return rep.substr(pos, rep.find('\n', pos) - pos);
    };
    CHECK(crossing_line(r1) == crossing_line(r2));
  }
  SUBCASE("beta = 0 is rejected as a configuration error") {
    opts.overrides = {"gains.beta=0"};
    CHECK(cmd_optimize(opts) == 2);
  }
}

TEST_CASE("cmd_simulate produces a record and reports") {
  const fs::path out = temp_dir("simulate");
  CommandOptions opts;
  opts.out_dir = out.string();
  opts.overrides = {"grid.nx=64", "grid.nrho=64", "time.horizon=5", "ic.amplitude=0.1"};
  CHECK(cmd_simulate(opts) == 0);
  const std::string csv = slurp(out / "record.csv");
  CHECK(csv.find("# kdvlab-record v1") == 0);
  CHECK(csv.find("t,E,V,eta_x_L,z1") != std::string::npos);
  CHECK(slurp(out / "bound_report.kv").find("pass = true") != std::string::npos);

  SUBCASE("deterministic: identical config implies byte-identical record") {
    const fs::path out2 = temp_dir("simulate2");
    CommandOptions o2 = opts;
    o2.out_dir = out2.string();
    CHECK(cmd_simulate(o2) == 0);
    CHECK(slurp(out / "record.csv") == slurp(out2 / "record.csv"));
  }
  SUBCASE("conservative run is labeled and exits 0") {
    const fs::path out3 = temp_dir("simulate3");
    CommandOptions o3;
    o3.out_dir = out3.string();
    o3.overrides = {"gains.alpha=0", "gains.beta=0", "grid.nx=64", "grid.nrho=8",
                    "time.horizon=2"};
    CHECK(cmd_simulate(o3) == 0);
    CHECK(slurp(out3 / "report.txt").find("conservative") != std::string::npos);
  }
  SUBCASE("snapshots are dumped when requested") {
    const fs::path out4 = temp_dir("simulate4");
    CommandOptions o4 = opts;
    o4.out_dir = out4.string();
    o4.overrides.push_back("time.snapshot_stride=50");
    CHECK(cmd_simulate(o4) == 0);
    CHECK(fs::exists(out4 / "snapshots" / "eta_00000.txt"));
    const std::string snap = slurp(out4 / "snapshots" / "eta_00000.txt");
    CHECK(snap.find("# t=0 n=64 L=5") == 0);
  }
}

TEST_CASE("cmd_sweep") {
  const fs::path out = temp_dir("sweep");
  CommandOptions opts;
  opts.out_dir = out.string();
  opts.ranges = {"gains.alpha=0.3:2.0:18"};

  CHECK(cmd_sweep(opts) == 0);
  const std::string csv = slurp(out / "sweep.csv");
  CHECK(csv.find("gains.alpha,feasible") != std::string::npos);

  // Feasibility flips exactly above alpha_lower_bound(0.5, 0.5) = 0.75.
  std::istringstream ss(csv);
  std::string line;
  std::getline(ss, line);  // version
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    const auto comma = line.find(',');
    const double a = std::stod(line.substr(0, comma));
    const bool feasible = line.substr(comma + 1, 4) == "true";
    CHECK(feasible == (a > 0.75));
  }

  SUBCASE("empty range produces an empty table") {
    const fs::path out2 = temp_dir("sweep2");
    CommandOptions o2;
    o2.out_dir = out2.string();
    o2.ranges = {"gains.alpha=0.3:2.0:0"};
    CHECK(cmd_sweep(o2) == 0);
    std::istringstream s2(slurp(out2 / "sweep.csv"));
    int rows = 0;
    while (std::getline(s2, line))
      if (!line.empty() && line[0] != '#' && line.find("feasible") == std::string::npos) ++rows;
    CHECK(rows == 0);
  }
  SUBCASE("cap is enforced") {
    const fs::path out3 = temp_dir("sweep3");
    CommandOptions o3;
    o3.out_dir = out3.string();
    o3.ranges = {"gains.alpha=0:2:200", "gains.beta=0:1:200"};
    CHECK(cmd_sweep(o3) == 2);
  }
}
