#pragma once

#include <string>
#include <vector>

namespace kdvlab {

/// sqrt(3)*pi, the upper end of the certified range for the spatial length.
double certified_length_limit();

/// Boundary feedback gains: omega_x(t,L) = -alpha*eta_x(t,L) + beta*eta_x(t-tau(t),L).
struct GainConfig {
  double alpha = 0.0;  // collocated damping gain, >= 0
  double beta = 0.0;   // delayed gain

  GainConfig() = default;
  GainConfig(double alpha_, double beta_);
};

/// True iff (2*alpha - |beta|)*(1 - d) > |beta| (strict).
bool check_gain_feasibility(double alpha, double beta, double d);

/// Feasibility threshold (|beta|/2)*(2-d)/(1-d); gains are feasible iff alpha
/// strictly exceeds it.
double alpha_lower_bound(double beta, double d);

enum class DelayKind { constant, sinusoidal, tabulated };

/// Evaluable delay tau(t) together with the declared certified constants
/// (tau0, M, d).  tau0 is the certified positive floor: 0 < tau0 <= tau(t) <= M
/// and tau_dot(t) <= d < 1 must hold on any horizon.  The declared constants
/// are user inputs and are *validated*, never inferred silently.
class DelayProfile {
 public:
  static DelayProfile constant(double value);
  static DelayProfile constant(double value, double M, double d);
  static DelayProfile sinusoidal(double mean, double amplitude, double angular_frequency,
                                 double M, double d);
  /// As above with auto-tight declared bounds M = mean+amplitude, d = amplitude*frequency.
  static DelayProfile sinusoidal(double mean, double amplitude, double angular_frequency);
  /// Piecewise-linear table; times must be strictly increasing; values are held
  /// constant beyond the table range.
  static DelayProfile tabulated(std::vector<double> times, std::vector<double> values,
                                double M, double d);

  double tau(double t) const;
  double tau_dot(double t) const;

  DelayKind kind() const { return kind_; }
  double tau0() const { return tau0_; }  // certified lower bound
  double M() const { return M_; }
  double d() const { return d_; }
  double mean() const { return mean_; }
  double amplitude() const { return amplitude_; }
  double frequency() const { return freq_; }

 private:
  DelayProfile() = default;
  DelayKind kind_ = DelayKind::constant;
  double tau0_ = 1.0, M_ = 1.0, d_ = 0.0;
  double mean_ = 1.0, amplitude_ = 0.0, freq_ = 0.0;  // sinusoidal
  std::vector<double> tab_t_, tab_tau_;               // tabulated
};

/// Result of sampling a delay profile against its declared bounds.
struct DelayValidation {
  bool pass = false;
  double min_tau = 0.0;        // min sampled tau(t)
  double max_tau = 0.0;        // max sampled tau(t)
  double max_rate = 0.0;       // max sampled tau_dot(t)
  double max_accel = 0.0;      // max |second difference| / dt^2 (tabulated smoothness)
  std::string detail;          // first violated condition, empty when passing
};

/// Samples tau and tau_dot on a uniform grid over [0, horizon] and checks
/// tau0 <= tau(t) <= M and tau_dot(t) <= d < 1.  For the sinusoidal kind the
/// analytic worst cases are checked as well.
DelayValidation validate_delay_profile(const DelayProfile& profile, double horizon, int samples);

/// Spatial domain (0, L) with the certification flag L < sqrt(3)*pi.
struct DomainConfig {
  double L = 1.0;
  bool certified = true;

  DomainConfig() = default;
  explicit DomainConfig(double L_);
};

/// True iff |L - (2*pi/sqrt(3))*sqrt(k^2+k*l+l^2)| <= tol for some k,l in {1..k_max}.
/// These are the lengths at which the undamped system loses stabilizability.
bool is_critical_length(double L, int k_max, double tol = 1e-9);

/// Discrete state: (eta, omega) on the x-grid nodes (0..nx) and the delay
/// channel z on the rho-grid nodes (0..nrho), at time t.
struct SystemState {
  double t = 0.0;
  std::vector<double> eta;
  std::vector<double> omega;
  std::vector<double> z;
};

}  // namespace kdvlab
