#include "kdvlab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "kdvlab/analyze.hpp"
#include "kdvlab/simulate.hpp"

namespace fs = std::filesystem;

namespace kdvlab {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_manifest(const fs::path& dir, const std::string& command, const Config& cfg,
                    const std::string& input_digest, const std::vector<std::string>& outputs) {
  std::ostringstream m;
  m << "# kdvlab-manifest v1\n";
  m << "tool = " << kToolVersion << "\n";
  m << "command = " << command << "\n";
  m << "timestamp = " << timestamp_now() << "\n";
  m << "config_digest = " << input_digest << "\n";
  for (const auto& o : outputs) m << "output = " << o << "\n";
  m << "# resolved configuration\n" << dump_config(cfg);
  write_file(dir / "run_manifest.txt", m.str());
}

std::string variant_name(const Certificate& c) {
  if (c.variant_was_min) return "min";
  return c.variant == RateVariant::theorem ? "theorem" : "proposition";
}

std::string certificate_kv(const Certificate& c) {
  std::ostringstream s;
  s << "# kdvlab-certificate v1\n";
  s << "mu1 = " << fmt(c.mu1) << "\n";
  s << "mu2 = " << fmt(c.mu2) << "\n";
  s << "lambda = " << fmt(c.lambda) << "\n";
  s << "zeta = " << fmt(c.zeta) << "\n";
  s << "variant = " << variant_name(c) << "\n";
  s << "phi.a11 = " << fmt(c.phi.a11) << "\n";
  s << "phi.a12 = " << fmt(c.phi.a12) << "\n";
  s << "phi.a22 = " << fmt(c.phi.a22) << "\n";
  s << "phi.negative_definite = " << (c.phi.negative_definite() ? "true" : "false") << "\n";
  s << "psi.a11 = " << fmt(c.psi.a11) << "\n";
  s << "psi.a12 = " << fmt(c.psi.a12) << "\n";
  s << "psi.a22 = " << fmt(c.psi.a22) << "\n";
  s << "psi.negative_definite = " << (c.psi.negative_definite() ? "true" : "false") << "\n";
  s << "feasible = " << (c.feasible ? "true" : "false") << "\n";
  if (!c.diagnostic.empty()) s << "diagnostic = " << c.diagnostic << "\n";
  return s.str();
}

void check_profile_or_throw(const DelayProfile& profile, double horizon) {
  const DelayValidation v = validate_delay_profile(profile, std::max(horizon, 1.0), 4001);
  if (!v.pass) throw ConfigError("delay profile violates its declared bounds: " + v.detail);
}

struct LoadedRun {
  Config cfg;
  std::string digest;
  DelayProfile profile = DelayProfile::constant(1.0);
};

LoadedRun prepare(const CommandOptions& opts) {
  LoadedRun run;
  std::string raw;
  run.cfg = load_config(opts, &raw);
  run.digest = fnv1a_digest(raw);
  run.profile = make_delay_profile(run.cfg);
  check_profile_or_throw(run.profile, run.cfg.horizon);
  return run;
}

int guarded(const CommandOptions& opts, const char* name, int (*body)(const CommandOptions&)) {
  try {
    return body(opts);
  } catch (const ConfigError& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 2;
  } catch (const CertificateError& e) {
    std::cerr << name << ": " << e.what() << " [violated: " << e.inequality() << "]\n";
    return 1;
  } catch (const SimulationError& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 1;
  }
}

std::optional<RateVariant> variant_from_string(const std::string& v) {
  if (v == "theorem") return RateVariant::theorem;
  if (v == "proposition") return RateVariant::proposition;
  return std::nullopt;  // "min"
}

}  // namespace

Config load_config(const CommandOptions& opts, std::string* raw_text) {
  Config cfg;
  std::string raw;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("config: cannot open '" + opts.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    raw = ss.str();
    cfg = parse_config_text(raw, opts.config_path);
  }
  if (!opts.resolution.empty()) apply_resolution_preset(cfg, opts.resolution);
  for (const auto& ov : opts.overrides) {
    apply_override(cfg, ov);
    raw += "\n--override " + ov;
  }
  if (!opts.resolution.empty()) raw += "\n--resolution " + opts.resolution;
  validate_config(cfg);
  if (raw_text) *raw_text = raw;
  return cfg;
}

CertificateInputs resolve_certificate_inputs(const Config& cfg, const DelayProfile& profile) {
  CertificateInputs in;
  in.variant = variant_from_string(cfg.cert_variant);
  const double d = profile.d();
  const double M = profile.M();
  if (!check_gain_feasibility(cfg.alpha, cfg.beta, d))
    throw CertificateError("(2a-|b|)(1-d) > |b|", "certificate inputs: gains are infeasible");

  if (cfg.beta == 0.0) {
    in.mu2 = cfg.cert_mu2;  // validated to 0 by build_certificate
    if (cfg.cert_mu1 > 0.0) {
      in.mu1 = cfg.cert_mu1;
    } else {
      const double cap = std::min(
          1.0 / cfg.L, 2.0 * cfg.alpha / (cfg.L * (1.0 + cfg.alpha * cfg.alpha)));
      in.mu1 = 0.5 * cap;
    }
    return in;
  }

  if (cfg.cert_mu1 > 0.0) {
    in.mu1 = cfg.cert_mu1;
  } else {
    in.mu1 = optimize_mu1(cfg.alpha, cfg.beta, d, cfg.L, M, cfg.optimize_tol).mu1_star;
    // Keep the certificate admissible: mu1*L < 1 and mu2(mu1) < 1.
    if (in.mu1 * cfg.L >= 1.0) in.mu1 = 0.99 / cfg.L;
    double mu2 = mu2_of_mu1(cfg.alpha, cfg.beta, d, cfg.L, in.mu1);
    if (mu2 >= 1.0) {
      // mu2(mu1) is affine and decreasing; pick mu1 giving mu2 = 0.5.
      const double ab = std::abs(cfg.beta);
      const double num0 = (2.0 * cfg.alpha - ab) * (1.0 - d) - ab;
      const double slope = cfg.L * (1.0 - d) * (1.0 + cfg.alpha * cfg.alpha);
      in.mu1 = (num0 - 0.5 * ab * (1.0 - d)) / slope;
    }
  }
  in.mu2 = cfg.cert_mu2 > 0.0 ? cfg.cert_mu2
                              : mu2_of_mu1(cfg.alpha, cfg.beta, d, cfg.L, in.mu1);
  return in;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

static int certify_body(const CommandOptions& opts) {
  LoadedRun run = prepare(opts);
  const Config& cfg = run.cfg;
  fs::create_directories(opts.out_dir);

  std::ostringstream rep;
  rep << "certify: alpha=" << fmt_short(cfg.alpha) << " beta=" << fmt_short(cfg.beta)
      << " d=" << fmt_short(run.profile.d()) << " M=" << fmt_short(run.profile.M())
      << " L=" << fmt_short(cfg.L) << "\n";

  if (!(cfg.L < certified_length_limit())) {
    rep << "error: L outside certified range (0, sqrt(3)*pi)\n";
    std::cout << rep.str();
    write_file(fs::path(opts.out_dir) / "report.txt", rep.str());
    throw CertificateError("0 < L < sqrt(3)*pi", "L outside certified range (0, sqrt(3)*pi)");
  }

  if (!check_gain_feasibility(cfg.alpha, cfg.beta, run.profile.d())) {
    rep << "infeasible: alpha must exceed " << fmt_short(alpha_lower_bound(cfg.beta, run.profile.d()))
        << " for beta=" << fmt_short(cfg.beta) << ", d=" << fmt_short(run.profile.d()) << "\n";
    std::cout << rep.str();
    write_file(fs::path(opts.out_dir) / "report.txt", rep.str());
    write_manifest(opts.out_dir, "certify", cfg, run.digest, {"report.txt"});
    return 1;
  }

  const CertificateInputs in = resolve_certificate_inputs(cfg, run.profile);
  const Certificate cert = build_certificate(cfg.alpha, cfg.beta, run.profile.d(), cfg.L,
                                             run.profile.M(), in.mu1, in.mu2, in.variant);

  rep << "mu1 = " << fmt(cert.mu1) << "\n"
      << "mu2 = " << fmt(cert.mu2) << "\n"
      << "lambda = " << fmt(cert.lambda) << "\n"
      << "zeta = " << fmt(cert.zeta) << "\n"
      << "variant = " << variant_name(cert) << "\n"
      << "feasible = " << (cert.feasible ? "true" : "false") << "\n";
  if (!cert.diagnostic.empty()) rep << "diagnostic = " << cert.diagnostic << "\n";

  std::cout << rep.str();
  write_file(fs::path(opts.out_dir) / "report.txt", rep.str());
  write_file(fs::path(opts.out_dir) / "certificate.kv", certificate_kv(cert));
  write_manifest(opts.out_dir, "certify", cfg, run.digest, {"report.txt", "certificate.kv"});
  return cert.feasible ? 0 : 1;
}

int cmd_certify(const CommandOptions& opts) { return guarded(opts, "certify", certify_body); }

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

static int optimize_body(const CommandOptions& opts) {
  LoadedRun run = prepare(opts);
  const Config& cfg = run.cfg;
  if (cfg.beta == 0.0)
    throw ConfigError("optimizer requires beta != 0 (g undefined); use certify");
  fs::create_directories(opts.out_dir);

  const double d = run.profile.d();
  const double M = run.profile.M();
  const double hi = mu1_upper_bound(cfg.alpha, cfg.beta, d, cfg.L);  // throws when infeasible
  const OptimalRate opt = optimize_mu1(cfg.alpha, cfg.beta, d, cfg.L, M, cfg.optimize_tol);

  std::ostringstream tsv;
  tsv << "# kdvlab-curve v1\n";
  tsv << "# mu1 f g min\n";
  const int npts = cfg.optimize_points;
  for (int i = 0; i <= npts; ++i) {
    const double mu1 = hi * static_cast<double>(i) / npts;
    const double mu1c = std::min(mu1, hi * (1.0 - 1e-15));
    const double f = rate_f(mu1c, cfg.L, RateVariant::proposition);
    const double g = rate_g(mu1c, cfg.alpha, cfg.beta, d, cfg.L, M);
    tsv << fmt(mu1c) << " " << fmt(f) << " " << fmt(g) << " " << fmt(std::min(f, g)) << "\n";
  }

  const double mu2 = mu2_of_mu1(cfg.alpha, cfg.beta, d, cfg.L, opt.mu1_star);
  Certificate cert = build_certificate(cfg.alpha, cfg.beta, d, cfg.L, M, opt.mu1_star, mu2,
                                       RateVariant::proposition);

  std::ostringstream rep;
  rep << "optimize: mu1 range [0, " << fmt(hi) << ")\n"
      << "crossing mu1* = " << fmt(opt.mu1_star) << "\n"
      << "lambda* = " << fmt(opt.lambda_star) << "\n"
      << "mu2(mu1*) = " << fmt(mu2) << "\n"
      << "zeta = " << fmt(cert.zeta) << "\n"
      << "feasible = " << (cert.feasible ? "true" : "false") << "\n";
  std::cout << rep.str();

  const std::string gp =
      "# gnuplot script: rate curves and the optimal crossing\n"
      "set xlabel 'mu1'\nset ylabel 'rate'\n"
      "set key left top\n"
      "plot 'rate_curves.tsv' using 1:2 with lines title 'f', \\\n"
      "     'rate_curves.tsv' using 1:3 with lines title 'g', \\\n"
      "     'rate_curves.tsv' using 1:4 with lines lw 2 title 'min(f,g)', \\\n"
      "     '-' with points pt 7 title 'crossing'\n" +
      fmt(opt.mu1_star) + " " + fmt(opt.lambda_star) + "\ne\n";

  write_file(fs::path(opts.out_dir) / "rate_curves.tsv", tsv.str());
  write_file(fs::path(opts.out_dir) / "rate_curves.gp", gp);
  write_file(fs::path(opts.out_dir) / "certificate.kv", certificate_kv(cert));
  write_file(fs::path(opts.out_dir) / "report.txt", rep.str());
  write_manifest(opts.out_dir, "optimize", cfg, run.digest,
                 {"rate_curves.tsv", "rate_curves.gp", "certificate.kv", "report.txt"});
  return cert.feasible ? 0 : 1;
}

int cmd_optimize(const CommandOptions& opts) { return guarded(opts, "optimize", optimize_body); }

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

namespace {

std::string record_csv(const SimulationRecord& rec) {
  std::ostringstream csv;
  csv << "# kdvlab-record v1\n";
  csv << "t,E,V,eta_x_L,z1\n";
  for (std::size_t i = 0; i < rec.t.size(); ++i)
    csv << fmt(rec.t[i]) << "," << fmt(rec.E[i]) << "," << fmt(rec.V[i]) << ","
        << fmt(rec.eta_x_L[i]) << "," << fmt(rec.z1[i]) << "\n";
  return csv.str();
}

void write_snapshots(const fs::path& dir, const SimulationRecord& rec, const SpaceGrid& xg,
                     const RhoGrid& rg) {
  fs::create_directories(dir);
  int idx = 0;
  char name[64];
  for (const auto& snap : rec.snapshots) {
    auto dump = [&](const char* field, const std::vector<double>& v, int n, double len) {
      std::ostringstream s;
      s << "# t=" << fmt(snap.t) << " n=" << n << " L=" << fmt(len) << "\n";
      for (double x : v) s << fmt(x) << "\n";
      std::snprintf(name, sizeof name, "%s_%05d.txt", field, idx);
      write_file(dir / name, s.str());
    };
    dump("eta", snap.eta, xg.nx, xg.L);
    dump("omega", snap.omega, xg.nx, xg.L);
    dump("z", snap.z, rg.nrho, 1.0);
    ++idx;
  }
}

}  // namespace

static int simulate_body(const CommandOptions& opts) {
  LoadedRun run = prepare(opts);
  const Config& cfg = run.cfg;
  fs::create_directories(opts.out_dir);

  const SpaceGrid xg = make_space_grid(cfg.L, cfg.nx);
  const RhoGrid rg = make_rho_grid(cfg.nrho);
  const GainConfig gains(cfg.alpha, cfg.beta);

  std::optional<Certificate> cert;
  std::vector<std::string> notes;
  const bool feasible = check_gain_feasibility(cfg.alpha, cfg.beta, run.profile.d());
  if (feasible && cfg.L < certified_length_limit()) {
    const CertificateInputs in = resolve_certificate_inputs(cfg, run.profile);
    cert = build_certificate(cfg.alpha, cfg.beta, run.profile.d(), cfg.L, run.profile.M(),
                             in.mu1, in.mu2, in.variant);
  } else if (cfg.alpha == 0.0 && cfg.beta == 0.0) {
    notes.push_back("conservative run (alpha = beta = 0): no certificate");
  } else {
    notes.push_back("no certificate: gains infeasible or L outside certified range");
  }

  Simulator sim(xg, rg, gains, run.profile, make_scheme(cfg), make_initial_condition(cfg),
                make_initial_history(cfg));
  if (cert) sim.set_lyapunov_weights(cert->mu1, cert->mu2);
  SimulationRecord rec = run_simulation(sim, std::move(notes));

  std::ostringstream rep;
  rep << "simulate: nx=" << cfg.nx << " nrho=" << cfg.nrho << " dt=" << fmt_short(rec.dt)
      << " horizon=" << fmt_short(cfg.horizon) << " channel=" << cfg.delay_channel
      << (cfg.nonlinear ? " nonlinear" : " linear") << "\n";
  rep << "E0 = " << fmt(rec.E0) << "\n";
  rep << "E(T) = " << fmt(rec.E.back()) << "\n";
  for (const auto& n : rec.notes) rep << "note: " << n << "\n";

  // Monotonicity and dissipation-identity diagnostics.
  double max_increase = 0.0;
  double e_prev = rec.E0;
  for (double e : rec.step_E) {
    max_increase = std::max(max_increase, e - e_prev);
    e_prev = e;
  }
  rep << "max_energy_increase_per_step = " << fmt(max_increase) << "\n";
  if (!cfg.nonlinear) {
    const DissipationResidual dr = dissipation_residual(rec, gains);
    rep << "dissipation_residual_max = " << fmt(dr.max_abs) << "\n";
  }
  if (cfg.nonlinear && !rec.step_picard_iters.empty()) {
    const int worst = *std::max_element(rec.step_picard_iters.begin(),
                                        rec.step_picard_iters.end());
    double mean = 0.0;
    for (int k : rec.step_picard_iters) mean += k;
    mean /= static_cast<double>(rec.step_picard_iters.size());
    rep << "picard_iters_max = " << worst << "\n";
    rep << "picard_iters_mean = " << fmt_short(mean) << "\n";
  }

  // Kato smoothing ratio over [0, min(kato.T, horizon)].
  {
    const double T = std::min(cfg.kato_T, cfg.horizon);
    InitialHistory z0 = make_initial_history(cfg);
    SystemState s0 = initial_state(make_initial_condition(cfg), xg, rg, gains, run.profile, z0);
    const KatoReport kr =
        kato_smoothing_report(rec, T, xg, rg, gains, s0.eta, s0.omega, s0.z);
    rep << "kato_ratio = " << fmt(kr.ratio) << (kr.vacuous ? " (vacuous)" : "") << "\n";
    if (!kr.note.empty()) rep << "note: " << kr.note << "\n";
  }

  std::vector<std::string> outputs = {"record.csv", "report.txt"};
  int exit_code = 0;
  if (cert) {
    DecayFit fit;
    bool have_fit = false;
    try {
      fit = fit_decay_rate(rec.t, rec.E, cfg.fit_window_fraction);
      have_fit = true;
      rep << "lambda_fit = " << fmt(fit.lambda_fit) << " (window [" << fmt_short(fit.t_begin)
          << ", " << fmt_short(fit.t_end) << "], residual " << fmt_short(fit.residual) << ")\n";
    } catch (const std::invalid_argument& e) {
      rep << "note: decay fit unavailable: " << e.what() << "\n";
    }
    const BoundReport br = verify_bound(rec.t, rec.E, *cert, cfg.bound_slack);
    rep << "bound_max_ratio = " << fmt(br.max_ratio) << " at t = " << fmt_short(br.t_of_max)
        << "\n";
    rep << "bound_pass = " << (br.pass ? "true" : "false") << " (slack " << fmt_short(br.slack)
        << ")\n";
    rep << "lambda = " << fmt(cert->lambda) << ", zeta = " << fmt(cert->zeta) << "\n";

    std::ostringstream kv;
    kv << "# kdvlab-bound v1\n";
    kv << "lambda = " << fmt(cert->lambda) << "\n";
    kv << "zeta = " << fmt(cert->zeta) << "\n";
    kv << "E0 = " << fmt(rec.E0) << "\n";
    kv << "max_ratio = " << fmt(br.max_ratio) << "\n";
    kv << "t_of_max = " << fmt(br.t_of_max) << "\n";
    kv << "slack = " << fmt(br.slack) << "\n";
    kv << "pass = " << (br.pass ? "true" : "false") << "\n";
    if (have_fit) kv << "lambda_fit = " << fmt(fit.lambda_fit) << "\n";
    write_file(fs::path(opts.out_dir) / "bound_report.kv", kv.str());
    write_file(fs::path(opts.out_dir) / "certificate.kv", certificate_kv(*cert));
    outputs.push_back("bound_report.kv");
    outputs.push_back("certificate.kv");
    if (!br.pass) exit_code = 1;
  } else {
    try {
      const DecayFit fit = fit_decay_rate(rec.t, rec.E, cfg.fit_window_fraction);
      rep << "lambda_fit = " << fmt(fit.lambda_fit) << "\n";
    } catch (const std::invalid_argument& e) {
      rep << "note: decay fit unavailable: " << e.what() << "\n";
    }
  }

  write_file(fs::path(opts.out_dir) / "record.csv", record_csv(rec));
  if (cfg.snapshot_stride > 0) {
    write_snapshots(fs::path(opts.out_dir) / "snapshots", rec, xg, rg);
    outputs.push_back("snapshots/");
  }
  std::cout << rep.str();
  write_file(fs::path(opts.out_dir) / "report.txt", rep.str());
  write_manifest(opts.out_dir, "simulate", cfg, run.digest, outputs);
  return exit_code;
}

int cmd_simulate(const CommandOptions& opts) { return guarded(opts, "simulate", simulate_body); }

// ---------------------------------------------------------------------------
// compare-channels
// ---------------------------------------------------------------------------

static int compare_body(const CommandOptions& opts) {
  LoadedRun run = prepare(opts);
  Config cfg = run.cfg;
  cfg.record_stride = 1;  // the comparison wants every step
  fs::create_directories(opts.out_dir);

  const SpaceGrid xg = make_space_grid(cfg.L, cfg.nx);
  const RhoGrid rg = make_rho_grid(cfg.nrho);
  const GainConfig gains(cfg.alpha, cfg.beta);

  auto run_channel = [&](DelayChannelKind ch) {
    SchemeConfig sc = make_scheme(cfg);
    sc.delay_channel = ch;
    Simulator sim(xg, rg, gains, run.profile, sc, make_initial_condition(cfg),
                  make_initial_history(cfg));
    return run_simulation(sim, {});
  };
  const SimulationRecord rt = run_channel(DelayChannelKind::transport);
  const SimulationRecord rh = run_channel(DelayChannelKind::history);

  double sup_trace = 0.0, scale = 1e-300, sup_E = 0.0, t_at = 0.0;
  std::ostringstream diffs;
  diffs << "# kdvlab-plotdata v1: t, |z1_transport - z1_history|\n";
  for (std::size_t i = 0; i < rt.t.size() && i < rh.t.size(); ++i) {
    const double dzi = std::abs(rt.z1[i] - rh.z1[i]);
    if (dzi > sup_trace) {
      sup_trace = dzi;
      t_at = rt.t[i];
    }
    scale = std::max({scale, std::abs(rt.z1[i]), std::abs(rh.z1[i])});
    sup_E = std::max(sup_E, std::abs(rt.E[i] - rh.E[i]));
    diffs << fmt(rt.t[i]) << " " << fmt(dzi) << "\n";
  }
  const double rel = sup_trace / scale;
  const double relE = rt.E0 > 0.0 ? sup_E / rt.E0 : sup_E;

  std::ostringstream rep;
  rep << "compare-channels: nrho=" << cfg.nrho << " dt=" << fmt_short(rt.dt) << "\n";
  rep << "sup_trace_diff = " << fmt(sup_trace) << " at t = " << fmt_short(t_at) << "\n";
  rep << "trace_scale = " << fmt(scale) << "\n";
  rep << "sup_trace_diff_rel = " << fmt(rel) << "\n";
  rep << "sup_E_diff_rel = " << fmt(relE) << "\n";
  std::cout << rep.str();

  std::ostringstream kv;
  kv << "# kdvlab-channels v1\n";
  kv << "sup_trace_diff = " << fmt(sup_trace) << "\n";
  kv << "sup_trace_diff_rel = " << fmt(rel) << "\n";
  kv << "sup_E_diff_rel = " << fmt(relE) << "\n";
  write_file(fs::path(opts.out_dir) / "channel_report.kv", kv.str());
  write_file(fs::path(opts.out_dir) / "trace_diff.tsv", diffs.str());
  write_file(fs::path(opts.out_dir) / "report.txt", rep.str());
  write_manifest(opts.out_dir, "compare-channels", cfg, run.digest,
                 {"channel_report.kv", "trace_diff.tsv", "report.txt"});
  return 0;
}

int cmd_compare_channels(const CommandOptions& opts) {
  return guarded(opts, "compare-channels", compare_body);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

namespace {

struct SweepRange {
  std::string key;
  std::vector<double> values;
};

SweepRange parse_range(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("sweep range: expected key=lo:hi:count, got '" + spec + "'");
  SweepRange r;
  r.key = spec.substr(0, eq);
  const std::string body = spec.substr(eq + 1);
  const auto c1 = body.find(':');
  const auto c2 = body.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("sweep range: expected lo:hi:count in '" + spec + "'");
  double lo, hi;
  long count;
  try {
    lo = std::stod(body.substr(0, c1));
    hi = std::stod(body.substr(c1 + 1, c2 - c1 - 1));
    count = std::stol(body.substr(c2 + 1));
  } catch (...) {
    throw ConfigError("sweep range: bad numbers in '" + spec + "'");
  }
  if (count < 0) throw ConfigError("sweep range: count must be >= 0");
  for (long i = 0; i < count; ++i)
    r.values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  return r;
}

struct SweepResult {
  std::vector<double> point;
  bool feasible = false;
  double alpha_min = 0.0;
  double mu1_max = 0.0, mu1 = 0.0, mu2 = 0.0, lambda = 0.0, zeta = 0.0;
  double lambda_fit = 0.0;
  bool have_cert = false, have_fit = false;
};

}  // namespace

static int sweep_body(const CommandOptions& opts) {
  std::string raw;
  Config base = load_config(opts, &raw);
  const std::string digest = fnv1a_digest(raw);
  fs::create_directories(opts.out_dir);

  std::vector<SweepRange> ranges;
  for (const auto& spec : opts.ranges) ranges.push_back(parse_range(spec));
  if (ranges.empty()) throw ConfigError("sweep: no --range given");

  std::size_t total = 1;
  for (const auto& r : ranges) total *= r.values.size();
  if (total > static_cast<std::size_t>(base.sweep_max_points))
    throw ConfigError("sweep: cartesian size " + std::to_string(total) + " exceeds cap " +
                      std::to_string(base.sweep_max_points));

  std::vector<SweepResult> results(total);
  auto evaluate = [&](std::size_t flat) {
    SweepResult& out = results[flat];
    Config cfg = base;
    std::size_t rem = flat;
    out.point.resize(ranges.size());
    for (std::size_t k = ranges.size(); k-- > 0;) {
      const std::size_t i = rem % ranges[k].values.size();
      rem /= ranges[k].values.size();
      out.point[k] = ranges[k].values[i];
      apply_override(cfg, ranges[k].key + "=" + fmt(out.point[k]));
    }
    try {
      validate_config(cfg);
      const DelayProfile profile = make_delay_profile(cfg);
      out.alpha_min = alpha_lower_bound(cfg.beta, profile.d());
      out.feasible = check_gain_feasibility(cfg.alpha, cfg.beta, profile.d());
      if (!out.feasible || !(cfg.L < certified_length_limit())) return;
      out.mu1_max = cfg.beta != 0.0
                        ? mu1_upper_bound(cfg.alpha, cfg.beta, profile.d(), cfg.L)
                        : 0.0;
      const CertificateInputs in = resolve_certificate_inputs(cfg, profile);
      const Certificate cert = build_certificate(cfg.alpha, cfg.beta, profile.d(), cfg.L,
                                                 profile.M(), in.mu1, in.mu2, in.variant);
      out.have_cert = cert.feasible;
      out.mu1 = cert.mu1;
      out.mu2 = cert.mu2;
      out.lambda = cert.lambda;
      out.zeta = cert.zeta;
      if (cfg.sweep_simulate_horizon > 0.0) {
        Config sim_cfg = cfg;
        sim_cfg.horizon = cfg.sweep_simulate_horizon;
        Simulator sim(make_space_grid(sim_cfg.L, sim_cfg.nx), make_rho_grid(sim_cfg.nrho),
                      GainConfig(sim_cfg.alpha, sim_cfg.beta), profile, make_scheme(sim_cfg),
                      make_initial_condition(sim_cfg), make_initial_history(sim_cfg));
        const SimulationRecord rec = run_simulation(sim, {});
        const DecayFit fit = fit_decay_rate(rec.t, rec.E, sim_cfg.fit_window_fraction);
        out.lambda_fit = fit.lambda_fit;
        out.have_fit = true;
      }
    } catch (const std::exception&) {
      // point stays marked infeasible / without certificate
    }
  };

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futs;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, [&]() {
      for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) evaluate(i);
    }));
  for (auto& f : futs) f.get();

  std::ostringstream csv;
  csv << "# kdvlab-sweep v1\n";
  for (const auto& r : ranges) csv << r.key << ",";
  csv << "feasible,alpha_min,mu1_max,mu1,mu2,lambda,zeta,lambda_fit\n";
  for (const auto& res : results) {
    for (double v : res.point) csv << fmt(v) << ",";
    csv << (res.feasible ? "true" : "false") << "," << fmt(res.alpha_min) << ","
        << fmt(res.mu1_max) << ",";
    if (res.have_cert)
      csv << fmt(res.mu1) << "," << fmt(res.mu2) << "," << fmt(res.lambda) << ","
          << fmt(res.zeta);
    else
      csv << ",,,";
    csv << ",";
    if (res.have_fit) csv << fmt(res.lambda_fit);
    csv << "\n";
  }
  write_file(fs::path(opts.out_dir) / "sweep.csv", csv.str());
  write_manifest(opts.out_dir, "sweep", base, digest, {"sweep.csv"});
  if (!opts.quiet)
    std::cout << "sweep: " << total << " points -> " << opts.out_dir << "/sweep.csv\n";
  return 0;
}

int cmd_sweep(const CommandOptions& opts) { return guarded(opts, "sweep", sweep_body); }

}  // namespace kdvlab
