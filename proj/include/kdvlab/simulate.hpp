#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdvlab/discretize.hpp"
#include "kdvlab/model.hpp"

namespace kdvlab {

enum class DelayChannelKind { transport, history };

/// Time-integration controls.  theta = 1/2 is the symmetric (conservative)
/// scheme; smoothing adds a fourth-difference filter with coefficient
/// smoothing*dt^2 so that the residual energy drift of the symmetric scheme is
/// dt-dominated and strictly dissipative.
struct SchemeConfig {
  double theta = 0.5;          // implicitness weight in [0.5, 1]
  double theta_bias = 0.0;     // effective theta = theta + theta_bias*dt (clamped to 1);
                               // a dt-scaled bias damps spurious boundary oscillations
                               // without dropping below second-order accuracy
  double dt = 0.0;             // 0 -> auto: min(0.25*h, 0.01)
  double horizon = 100.0;
  DelayChannelKind delay_channel = DelayChannelKind::transport;
  bool nonlinear = false;
  double picard_tol = 1e-10;
  int picard_max_iters = 25;
  double smoothing = 1e-5;     // coefficient of dt^2 * u_xxxx in the modified equation
  int coupling_passes = 2;     // fixed-point passes on the boundary-load coupling
  int record_stride = 1;       // record every k-th step
  int snapshot_stride = 0;     // 0 = no full-state snapshots
};

/// Initial data descriptor.  "sine": eta0 = a*sin(pi x/L) ramped near x = 0 so
/// that eta_x(0) = 0, and omega0 = a*sin(2pi x/L) corrected near x = L so that
/// omega_x(L) matches the t = 0 feedback value -alpha*eta0_x(L) + beta*z0(1)
/// (an incompatible corner would excite a spurious boundary transient).
struct InitialCondition {
  enum class Kind { zero, sine } kind = Kind::sine;
  double amplitude = 0.1;
};

/// Initial delay-line content z0(s), s in [-tau(0), 0].  `match` resolves to
/// the constant equal to the discrete initial trace, giving a delay line with
/// no startup discontinuity.
struct InitialHistory {
  enum class Kind { zero, constant, match } kind = Kind::zero;
  double value = 0.0;
  double operator()(double /*s*/) const {
    return kind == Kind::zero ? 0.0 : value;  // `match` must be resolved first
  }
};

/// Ring buffer of (t, trace) samples with cubic interpolation; serves the
/// history realization of the delayed trace and keeps z0 for t - tau(t) < 0.
class HistoryBuffer {
 public:
  HistoryBuffer(double dt, InitialHistory z0, double capacity_time);
  void push(double t, double value);            // t must advance by dt each push
  double interpolate(double s) const;           // s >= -tau(0) region served by z0
  double latest_time() const;
  bool covers(double s) const;

 private:
  double dt_ = 0.0;
  double t0_ = 0.0;
  std::vector<double> samples_;  // samples_[k] = trace(t0 + k*dt)
  InitialHistory z0_;
  std::size_t max_samples_ = 0;
  std::size_t discarded_ = 0;  // leading samples dropped from the ring
};

/// One upwind update of the delay line with frozen coefficients; the CFL
/// numbers nu_j = dt*(1 - tau_dot*rho_j)/(tau*drho) must all lie in [0, 1].
void transport_substep(std::vector<double>& z, const RhoGrid& grid, double tau, double tau_dot,
                       double inflow, double dt);

/// Advances the delay line over dt with frozen (tau, tau_dot) and constant
/// inflow, sub-cycling internally to satisfy the CFL bound.
void step_transport(std::vector<double>& z, const RhoGrid& grid, double tau, double tau_dot,
                    double inflow, double dt, int max_subcycles = 1 << 20);

struct SystemSnapshot {
  double t = 0.0;
  std::vector<double> eta, omega, z;
};

/// Scalar time series of a run plus the per-step diagnostics needed by the
/// dissipation-identity and monotonicity checks.
struct SimulationRecord {
  // Recorded at record_stride (always includes t = 0 and the final step).
  std::vector<double> t, E, V, eta_x_L, z1;

  // Per time step k (k = 0 .. nsteps-1): values at t_{k+1} and step midpoints.
  std::vector<double> step_t;              // t_{k+1}
  std::vector<double> step_E;              // E(t_{k+1})
  std::vector<double> step_V;              // V(t_{k+1})
  std::vector<double> step_trace_mid;      // scheme trace at the step midpoint
  std::vector<double> step_z1_used;        // delayed trace used in the boundary load
  std::vector<double> step_taudot_secant;  // (tau(t_{k+1}) - tau(t_k))/dt
  std::vector<double> step_kato_cum;       // cumulative int_0^t int (eta_x^2+omega_x^2)
  std::vector<int> step_picard_iters;      // nonlinear runs only

  std::vector<SystemSnapshot> snapshots;

  double E0 = 0.0;
  double V0 = 0.0;
  double dt = 0.0;
  double mu1 = 0.0, mu2 = 0.0;  // weights used for the recorded V
  std::vector<std::string> notes;

  std::size_t steps() const { return step_t.size(); }
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds the t = 0 state: initial data sampled on the grid (boundary nodes
/// zeroed and flagged when the descriptor violates them), z(0, rho) =
/// z0(-tau(0)*rho) on the rho grid, and z(0,0) reconciled to the discrete
/// trace of eta0.  The gains enter only through the omega corner correction.
SystemState initial_state(const InitialCondition& ic, const SpaceGrid& xg, const RhoGrid& rg,
                          const GainConfig& gains, const DelayProfile& profile,
                          const InitialHistory& z0, std::vector<std::string>* notes = nullptr);

/// Time integrator for the boundary-damped system with a delayed trace in the
/// omega_x(L) condition.  The linearized generator is assembled once (banded,
/// bandwidth 5 in interleaved ordering) and LU-factored once per run.
class Simulator {
 public:
  Simulator(const SpaceGrid& xg, const RhoGrid& rg, GainConfig gains, DelayProfile profile,
            SchemeConfig scheme, InitialCondition ic, InitialHistory z0 = {});

  /// Advance one step (linear or nonlinear per the scheme config).
  void step();

  /// Integrate to the horizon, recording series and diagnostics.
  SimulationRecord run();

  const SystemState& state() const { return state_; }
  const SpaceGrid& space_grid() const { return xg_; }
  const RhoGrid& rho_grid() const { return rg_; }
  double dt() const { return dt_; }
  double effective_theta() const { return theta_; }
  int last_picard_iters() const { return last_picard_iters_; }

  /// Delayed trace as seen by the active channel at the given time (ahead of
  /// the current state only by interpolation).
  double delayed_trace(double t) const;

  /// Replaces the t = 0 state before any step has been taken (boundary nodes
  /// are zeroed, z(0,0) reconciled to the trace, history reset).
  void set_initial_state(const SystemState& st);

  /// Lyapunov weights used for the recorded V(t) series.
  void set_lyapunov_weights(double mu1, double mu2) { mu1_ = mu1; mu2_ = mu2; }

 private:
  void assemble();
  void advance_z(const std::vector<double>& z_from, std::vector<double>& z_to, double t_from,
                 double dt, double trace_from, double trace_to) const;
  double solve_field_step(double z1_used, std::vector<double>& u_next) const;
  void refresh_z_from_history();

  SpaceGrid xg_;
  RhoGrid rg_;
  GainConfig gains_;
  DelayProfile profile_;
  SchemeConfig scheme_;
  InitialHistory z0_;       // resolved (never `match`)
  InitialHistory z0_spec_;  // as given
  double dt_ = 0.0;
  double theta_ = 0.5;      // effective theta, includes the dt-scaled bias

  BandMatrix j_band_;     // semi-discrete generator (apply side)
  BandMatrix m_impl_;     // I - dt*theta*J, factored
  double load_coeff_ = 0.0;  // coefficient of the delayed trace in the eta row nx-1

  SystemState state_;
  std::vector<double> u_;  // interleaved interior unknowns (eta_1, omega_1, eta_2, ...)
  HistoryBuffer history_;
  double scheme_trace_ = 0.0;  // backward-difference trace of the current state
  int last_picard_iters_ = 0;

  double mu1_ = 0.0, mu2_ = 0.0;

  // per-step diagnostics captured by step() for run()
  struct StepDiag {
    double trace_mid, z1_used, taudot_secant;
    int picard_iters;
  } diag_{};

  friend SimulationRecord run_simulation(Simulator&, std::vector<std::string>);
};

/// Drives sim.run() with pre-collected notes (used by the command layer).
SimulationRecord run_simulation(Simulator& sim, std::vector<std::string> notes = {});

}  // namespace kdvlab
