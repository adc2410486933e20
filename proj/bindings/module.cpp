#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "kdvlab/analyze.hpp"
#include "kdvlab/certify.hpp"
#include "kdvlab/commands.hpp"
#include "kdvlab/config.hpp"
#include "kdvlab/model.hpp"
#include "kdvlab/simulate.hpp"

namespace py = pybind11;
using namespace kdvlab;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

RateVariant variant_from(const std::string& s) {
  if (s == "theorem") return RateVariant::theorem;
  if (s == "proposition") return RateVariant::proposition;
  throw py::value_error("variant must be 'theorem' or 'proposition'");
}

Config config_from(const py::dict& overrides) {
  Config cfg;
  for (auto item : overrides) {
    const std::string key = py::cast<std::string>(item.first);
    const std::string value = py::cast<std::string>(py::str(item.second));
    apply_override(cfg, key + "=" + value);
  }
  validate_config(cfg);
  return cfg;
}

py::dict run_simulation_py(const py::dict& overrides) {
  const Config cfg = config_from(overrides);
  const DelayProfile profile = make_delay_profile(cfg);
  Simulator sim(make_space_grid(cfg.L, cfg.nx), make_rho_grid(cfg.nrho),
                GainConfig(cfg.alpha, cfg.beta), profile, make_scheme(cfg),
                make_initial_condition(cfg), make_initial_history(cfg));
  if (cfg.cert_mu1 > 0.0 || check_gain_feasibility(cfg.alpha, cfg.beta, profile.d())) {
    try {
      const CertificateInputs in = resolve_certificate_inputs(cfg, profile);
      sim.set_lyapunov_weights(in.mu1, in.mu2);
    } catch (const std::exception&) {
      // no certificate: V falls back to E
    }
  }
  const SimulationRecord rec = run_simulation(sim, {});
  py::dict out;
  out["t"] = to_array(rec.t);
  out["E"] = to_array(rec.E);
  out["V"] = to_array(rec.V);
  out["eta_x_L"] = to_array(rec.eta_x_L);
  out["z1"] = to_array(rec.z1);
  out["E0"] = rec.E0;
  out["dt"] = rec.dt;
  out["mu1"] = rec.mu1;
  out["mu2"] = rec.mu2;
  out["notes"] = rec.notes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decay-rate certification and simulation for a boundary-damped KdV-KdV "
            "system with time-varying delayed feedback";

  // model
  m.def("check_gain_feasibility", &check_gain_feasibility, py::arg("alpha"), py::arg("beta"),
        py::arg("d"));
  m.def("alpha_lower_bound", &alpha_lower_bound, py::arg("beta"), py::arg("d"));
  m.def("is_critical_length", &is_critical_length, py::arg("L"), py::arg("k_max"),
        py::arg("tol") = 1e-9);
  m.def("certified_length_limit", &certified_length_limit);

  py::class_<QuadForm2>(m, "QuadForm2")
      .def_readonly("a11", &QuadForm2::a11)
      .def_readonly("a12", &QuadForm2::a12)
      .def_readonly("a22", &QuadForm2::a22)
      .def("det", &QuadForm2::det)
      .def("negative_definite", &QuadForm2::negative_definite)
      .def("__repr__", [](const QuadForm2& q) {
        return "QuadForm2(a11=" + std::to_string(q.a11) + ", a12=" + std::to_string(q.a12) +
               ", a22=" + std::to_string(q.a22) + ")";
      });

  py::class_<Certificate>(m, "Certificate")
      .def_readonly("mu1", &Certificate::mu1)
      .def_readonly("mu2", &Certificate::mu2)
      .def_readonly("lambda_", &Certificate::lambda)
      .def_readonly("zeta", &Certificate::zeta)
      .def_readonly("phi", &Certificate::phi)
      .def_readonly("psi", &Certificate::psi)
      .def_readonly("feasible", &Certificate::feasible)
      .def_readonly("diagnostic", &Certificate::diagnostic);

  // certify
  m.def("phi_matrix", &phi_matrix, py::arg("alpha"), py::arg("beta"), py::arg("d"));
  m.def("psi_matrix", &psi_matrix, py::arg("alpha"), py::arg("beta"), py::arg("d"), py::arg("L"),
        py::arg("mu1"), py::arg("mu2"));
  m.def("mu1_upper_bound", &mu1_upper_bound, py::arg("alpha"), py::arg("beta"), py::arg("d"),
        py::arg("L"));
  m.def("mu2_of_mu1", &mu2_of_mu1, py::arg("alpha"), py::arg("beta"), py::arg("d"), py::arg("L"),
        py::arg("mu1"));
  m.def(
      "rate_f",
      [](double mu1, double L, const std::string& variant) {
        return rate_f(mu1, L, variant_from(variant));
      },
      py::arg("mu1"), py::arg("L"), py::arg("variant") = "proposition");
  m.def("rate_g", &rate_g, py::arg("mu1"), py::arg("alpha"), py::arg("beta"), py::arg("d"),
        py::arg("L"), py::arg("M"));
  m.def(
      "optimize_mu1",
      [](double alpha, double beta, double d, double L, double M, double tol) {
        const OptimalRate r = optimize_mu1(alpha, beta, d, L, M, tol);
        return py::make_tuple(r.mu1_star, r.lambda_star);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("d"), py::arg("L"), py::arg("M"),
      py::arg("tol") = 1e-12);
  m.def(
      "build_certificate",
      [](double alpha, double beta, double d, double L, double M, double mu1, double mu2,
         const std::string& variant) {
        std::optional<RateVariant> v;
        if (variant != "min") v = variant_from(variant);
        return build_certificate(alpha, beta, d, L, M, mu1, mu2, v);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("d"), py::arg("L"), py::arg("M"),
      py::arg("mu1"), py::arg("mu2"), py::arg("variant") = "min");
  m.def("resolvent_delay_gain_g0", &resolvent_delay_gain_g0, py::arg("lambda_"), py::arg("tau"),
        py::arg("tau_dot"));

  // simulate / analyze
  m.def("run_simulation", &run_simulation_py, py::arg("overrides") = py::dict(),
        "Runs a simulation from a dict of config overrides (same keys as the CLI config).");
  m.def(
      "fit_decay_rate",
      [](const std::vector<double>& t, const std::vector<double>& E, double window_fraction) {
        const DecayFit f = fit_decay_rate(t, E, window_fraction);
        py::dict out;
        out["lambda_fit"] = f.lambda_fit;
        out["intercept"] = f.intercept;
        out["residual"] = f.residual;
        out["t_begin"] = f.t_begin;
        out["t_end"] = f.t_end;
        return out;
      },
      py::arg("t"), py::arg("E"), py::arg("window_fraction") = 0.5);
  m.def(
      "verify_bound",
      [](const std::vector<double>& t, const std::vector<double>& E, const Certificate& cert,
         double slack) {
        const BoundReport r = verify_bound(t, E, cert, slack);
        py::dict out;
        out["max_ratio"] = r.max_ratio;
        out["t_of_max"] = r.t_of_max;
        out["pass"] = r.pass;
        out["vacuous"] = r.vacuous;
        return out;
      },
      py::arg("t"), py::arg("E"), py::arg("certificate"), py::arg("slack") = 0.05);

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<CertificateError>(m, "CertificateError");
  py::register_exception<SimulationError>(m, "SimulationError");
}
