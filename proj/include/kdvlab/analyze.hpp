#pragma once

#include <span>
#include <string>
#include <vector>

#include "kdvlab/certify.hpp"
#include "kdvlab/discretize.hpp"
#include "kdvlab/model.hpp"

namespace kdvlab {

struct SimulationRecord;  // simulate.hpp

/// Total energy E = (1/2) int (eta^2 + omega^2) dx + (|beta|/2) tau(t) int z^2 drho.
double energy(const SystemState& state, const SpaceGrid& xg, const RhoGrid& rg,
              const GainConfig& gains, const DelayProfile& profile);

struct LyapunovValue {
  double V = 0.0;
  double V1 = 0.0;  // (1/2) int x eta omega dx
  double V2 = 0.0;  // (|beta|/2) tau(t) int (1-rho) z^2 drho
  double E = 0.0;
};

/// V = E + mu1*V1 + mu2*V2; equivalent to E when max(mu1*L, mu2) < 1.
LyapunovValue lyapunov_V(const SystemState& state, const SpaceGrid& xg, const RhoGrid& rg,
                         const GainConfig& gains, const DelayProfile& profile, double mu1,
                         double mu2);

struct DecayFit {
  double lambda_fit = 0.0;  // minus the slope of the log-linear fit
  double intercept = 0.0;   // fitted log E at t = 0
  double t_begin = 0.0, t_end = 0.0;
  double residual = 0.0;    // RMS of the log-linear fit residuals
};

/// Least-squares line through (t, ln E(t)) on the trailing window of the
/// record (window_fraction of the samples, default last half).  Throws when
/// the window contains a nonpositive energy.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> E,
                        double window_fraction = 0.5);

struct BoundReport {
  double max_ratio = 0.0;     // max over t of E(t) / (zeta E(0) e^{-lambda t})
  double t_of_max = 0.0;
  double slack = 0.05;
  bool pass = false;
  bool vacuous = false;       // E(0) = 0
  double lambda = 0.0, zeta = 0.0, E0 = 0.0;
};

/// Checks E(t) <= zeta * E(0) * exp(-lambda t) * (1 + slack) pointwise.
BoundReport verify_bound(std::span<const double> t, std::span<const double> E,
                         const Certificate& cert, double slack = 0.05);

struct DissipationResidual {
  std::vector<double> t;        // step end times
  std::vector<double> residual; // r_k = (E_{k+1}-E_k)/dt - (1/2) w_k^T Phi(s_k) w_k
  std::vector<double> quad_form;// (1/2) w_k^T Phi(s_k) w_k at the step midpoint
  double max_abs = 0.0;
};

/// Residual of the discrete boundary-dissipation identity.  The quadratic form
/// pairs the scheme trace with the delayed trace that entered the boundary
/// load, with Phi evaluated at the step's secant slope of tau (which converges
/// to tau_dot and equals the certified d-matrix when tau_dot = d).
DissipationResidual dissipation_residual(const SimulationRecord& rec, const GainConfig& gains);

struct KatoReport {
  double lhs = 0.0;    // int_0^T int (eta_x^2 + omega_x^2) dx dt
  double rhs = 0.0;    // C(L,T,alpha) * (||(eta0,omega0)||^2 + ||z0||^2)
  double ratio = 0.0;
  double C = 0.0;      // max{1, L+T, (alpha^2+1/2) L}
  bool vacuous = false;
  bool pass = false;   // ratio <= 1
  std::string note;
};

/// Discrete check of the smoothing estimate with the explicit constant
/// C(L,T,alpha) = max{1, L+T, (alpha^2 + 1/2) L}.
KatoReport kato_smoothing_report(const SimulationRecord& rec, double T, const SpaceGrid& xg,
                                 const RhoGrid& rg, const GainConfig& gains,
                                 std::span<const double> eta0, std::span<const double> omega0,
                                 std::span<const double> z0);

}  // namespace kdvlab
