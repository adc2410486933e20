#include "kdvlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace kdvlab {

double certified_length_limit() { return std::numbers::sqrt3 * std::numbers::pi; }

GainConfig::GainConfig(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha >= 0.0))
    throw std::invalid_argument("GainConfig: alpha must be nonnegative");
  if (alpha == 0.0 && beta != 0.0)
    throw std::invalid_argument("GainConfig: alpha = 0 requires beta = 0 (conservative case)");
}

static void require_d(double d) {
  if (!(d >= 0.0 && d < 1.0))
    throw std::invalid_argument("delay rate bound d must lie in [0, 1)");
}

bool check_gain_feasibility(double alpha, double beta, double d) {
  require_d(d);
  return (2.0 * alpha - std::abs(beta)) * (1.0 - d) > std::abs(beta);
}

double alpha_lower_bound(double beta, double d) {
  require_d(d);
  return 0.5 * std::abs(beta) * (2.0 - d) / (1.0 - d);
}

DelayProfile DelayProfile::constant(double value) { return constant(value, value, 0.0); }

DelayProfile DelayProfile::constant(double value, double M, double d) {
  if (!(value > 0.0)) throw std::invalid_argument("DelayProfile: constant delay must be positive");
  DelayProfile p;
  p.kind_ = DelayKind::constant;
  p.mean_ = value;
  p.tau0_ = value;
  p.M_ = M;
  p.d_ = d;
  return p;
}

DelayProfile DelayProfile::sinusoidal(double mean, double amplitude, double angular_frequency,
                                      double M, double d) {
  if (!(mean > 0.0)) throw std::invalid_argument("DelayProfile: mean delay must be positive");
  if (amplitude < 0.0) throw std::invalid_argument("DelayProfile: amplitude must be nonnegative");
  DelayProfile p;
  p.kind_ = DelayKind::sinusoidal;
  p.mean_ = mean;
  p.amplitude_ = amplitude;
  p.freq_ = angular_frequency;
  p.tau0_ = mean - amplitude;  // certified floor; validation rejects it when <= 0
  p.M_ = M;
  p.d_ = d;
  return p;
}

DelayProfile DelayProfile::sinusoidal(double mean, double amplitude, double angular_frequency) {
  return sinusoidal(mean, amplitude, angular_frequency, mean + amplitude,
                    amplitude * std::abs(angular_frequency));
}

DelayProfile DelayProfile::tabulated(std::vector<double> times, std::vector<double> values,
                                     double M, double d) {
  if (times.size() < 2 || times.size() != values.size())
    throw std::invalid_argument("DelayProfile: table needs >= 2 rows of (t, tau)");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("DelayProfile: table time column must be strictly increasing");
  DelayProfile p;
  p.kind_ = DelayKind::tabulated;
  p.tab_t_ = std::move(times);
  p.tab_tau_ = std::move(values);
  p.tau0_ = *std::min_element(p.tab_tau_.begin(), p.tab_tau_.end());
  p.M_ = M;
  p.d_ = d;
  p.mean_ = p.tab_tau_.front();
  return p;
}

double DelayProfile::tau(double t) const {
  switch (kind_) {
    case DelayKind::constant:
      return mean_;
    case DelayKind::sinusoidal:
      return mean_ + amplitude_ * std::sin(freq_ * t);
    case DelayKind::tabulated: {
      if (t <= tab_t_.front()) return tab_tau_.front();
      if (t >= tab_t_.back()) return tab_tau_.back();
      auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
      std::size_t i = static_cast<std::size_t>(it - tab_t_.begin());
      double w = (t - tab_t_[i - 1]) / (tab_t_[i] - tab_t_[i - 1]);
      return (1.0 - w) * tab_tau_[i - 1] + w * tab_tau_[i];
    }
  }
  return mean_;
}

double DelayProfile::tau_dot(double t) const {
  switch (kind_) {
    case DelayKind::constant:
      return 0.0;
    case DelayKind::sinusoidal:
      return amplitude_ * freq_ * std::cos(freq_ * t);
    case DelayKind::tabulated: {
      if (t < tab_t_.front() || t > tab_t_.back()) return 0.0;
      auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
      std::size_t i = static_cast<std::size_t>(it - tab_t_.begin());
      if (i == 0) i = 1;
      if (i == tab_t_.size()) i = tab_t_.size() - 1;
      return (tab_tau_[i] - tab_tau_[i - 1]) / (tab_t_[i] - tab_t_[i - 1]);
    }
  }
  return 0.0;
}

DelayValidation validate_delay_profile(const DelayProfile& profile, double horizon, int samples) {
  if (!(horizon > 0.0)) throw std::invalid_argument("validate_delay_profile: horizon must be > 0");
  if (samples < 2) throw std::invalid_argument("validate_delay_profile: need >= 2 samples");

  DelayValidation r;
  const double dt = horizon / (samples - 1);
  r.min_tau = r.max_tau = profile.tau(0.0);
  r.max_rate = profile.tau_dot(0.0);
  double prev2 = 0.0, prev1 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = i * dt;
    const double v = profile.tau(t);
    r.min_tau = std::min(r.min_tau, v);
    r.max_tau = std::max(r.max_tau, v);
    r.max_rate = std::max(r.max_rate, profile.tau_dot(t));
    if (i >= 2) r.max_accel = std::max(r.max_accel, std::abs(v - 2.0 * prev1 + prev2) / (dt * dt));
    prev2 = prev1;
    prev1 = v;
  }

  // Analytic worst cases for the sinusoidal kind, independent of sampling.
  if (profile.kind() == DelayKind::sinusoidal) {
    r.max_tau = std::max(r.max_tau, profile.mean() + profile.amplitude());
    r.min_tau = std::min(r.min_tau, profile.mean() - profile.amplitude());
    r.max_rate = std::max(r.max_rate, profile.amplitude() * std::abs(profile.frequency()));
  }

  if (!(profile.d() >= 0.0 && profile.d() < 1.0))
    r.detail = "declared d outside [0, 1)";
  else if (!(profile.tau0() > 0.0))
    r.detail = "delay floor tau0 not positive";
  else if (r.min_tau < profile.tau0())
    r.detail = "tau(t) drops below tau0";
  else if (r.max_tau > profile.M())
    r.detail = "tau(t) exceeds declared M";
  else if (r.max_rate > profile.d())
    r.detail = "tau_dot(t) exceeds declared d";
  r.pass = r.detail.empty();
  return r;
}

DomainConfig::DomainConfig(double L_) : L(L_) {
  if (!(L > 0.0)) throw std::invalid_argument("DomainConfig: L must be positive");
  certified = L < certified_length_limit();
}

bool is_critical_length(double L, int k_max, double tol) {
  if (!(L > 0.0)) throw std::invalid_argument("is_critical_length: L must be positive");
  if (k_max < 1) throw std::invalid_argument("is_critical_length: k_max must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("is_critical_length: tol must be positive");
  const double c = 2.0 * std::numbers::pi / std::numbers::sqrt3;
  for (int k = 1; k <= k_max; ++k) {
    for (int l = k; l <= k_max; ++l) {
      const double len = c * std::sqrt(double(k) * k + double(k) * l + double(l) * l);
      if (std::abs(L - len) <= tol) return true;
      if (l > k && len - L > tol) break;  // increasing in l
    }
  }
  return false;
}

}  // namespace kdvlab
