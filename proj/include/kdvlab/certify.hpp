#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace kdvlab {

/// Symmetric 2x2 quadratic form; only the three independent entries are stored.
struct QuadForm2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }

  /// Leading-principal-minor test with strict inequalities.
  bool negative_definite() const { return a11 < 0.0 && det() > 0.0; }

  /// True when |det| < tol: too close to singular for a trustworthy verdict.
  bool indeterminate(double tol = 1e-14) const;

  /// Value of the form on (w1, w2).
  double eval(double w1, double w2) const {
    return a11 * w1 * w1 + 2.0 * a12 * w1 * w2 + a22 * w2 * w2;
  }
};

/// Boundary dissipation form: dE/dt = (1/2) w^T Phi w with w = (eta_x(L), delayed trace).
/// Entries [[-2a+|b|, b], [b, |b|(d-1)]]; negative definite iff the gains are feasible.
QuadForm2 phi_matrix(double alpha, double beta, double d);

/// Perturbed form Psi = Phi + L*mu1*[[1+a^2, -ab], [-ab, b^2]] + |b|*mu2*[[1,0],[0,0]].
QuadForm2 psi_matrix(double alpha, double beta, double d, double L, double mu1, double mu2);

/// Largest admissible mu1: [(2a-|b|)(1-d) - |b|] / [L(1-d)(1+a^2)].
/// Requires feasible gains (the numerator is then positive).
double mu1_upper_bound(double alpha, double beta, double d, double L);

/// mu2 that zeroes the non-sign-definite part of det(Psi):
/// [(2a-|b|)(1-d) - |b| - L(1-d)(1+a^2)*mu1] / (|b|(1-d)).  Requires beta != 0.
double mu2_of_mu1(double alpha, double beta, double d, double L, double mu1);

enum class RateVariant { theorem, proposition };

/// Poincare-limited rate bound.  theorem: mu1*(3pi^2-L^2)/(L^2*(1+mu1));
/// proposition: mu1*(3pi^2-L^2)/(L^2*(1+mu1*L)).  Both increase from 0 in mu1.
double rate_f(double mu1, double L, RateVariant variant);

/// Delay-limited rate bound
///   g(mu1) = (1-d) * [(2a-|b|)(1-d)-|b|-L(1-d)(1+a^2)mu1]
///                  / (M * [2a(1-d)-|b|-L(1-d)(1+a^2)mu1]),
/// strictly decreasing on [0, mu1_upper_bound), zero at the upper bound.
double rate_g(double mu1, double alpha, double beta, double d, double L, double M);

struct OptimalRate {
  double mu1_star = 0.0;
  double lambda_star = 0.0;
  int iterations = 0;
};

/// Unique crossing f(mu1) = g(mu1) on (0, mu1_upper_bound), located by bisection
/// (f - g is increasing minus decreasing).  Uses the proposition variant of f.
OptimalRate optimize_mu1(double alpha, double beta, double d, double L, double M,
                         double tol = 1e-12);

/// Thrown when a certificate precondition (an explicit inequality) is violated.
class CertificateError : public std::invalid_argument {
 public:
  CertificateError(const std::string& inequality, const std::string& what_)
      : std::invalid_argument(what_), inequality_(inequality) {}
  /// Name of the violated inequality, e.g. "mu1*L < 1".
  const std::string& inequality() const { return inequality_; }

 private:
  std::string inequality_;
};

struct Certificate {
  double mu1 = 0.0, mu2 = 0.0;
  double lambda = 0.0;  // certified decay rate
  double zeta = 1.0;    // overshoot constant (1+m)/(1-m), m = max(mu1*L, mu2)
  RateVariant variant = RateVariant::proposition;
  bool variant_was_min = false;  // lambda used min over both f variants
  QuadForm2 phi, psi;
  bool feasible = false;
  std::string diagnostic;  // names the failed check when infeasible
};

/// Assembles the decay certificate E(t) <= zeta*E(0)*exp(-lambda*t).
/// Hard violations of the preconditions (infeasible gains, L outside
/// (0, sqrt(3)pi), mu1*L >= 1, mu2 >= 1, nonpositive weights) throw
/// CertificateError; a Psi that fails the numeric definiteness test yields
/// feasible = false with a diagnostic.  When `variant` is unset, lambda takes
/// the smaller (safe) of the two f formulas.
/// For beta = 0 the delay channel is absent: mu2 must be 0 and lambda uses the
/// f bound alone.
Certificate build_certificate(double alpha, double beta, double d, double L, double M,
                              double mu1, double mu2,
                              std::optional<RateVariant> variant = std::nullopt);

/// Resolvent gain of the delay line: g0 = exp(-lambda*tau) when tau_dot = 0,
/// otherwise exp(lambda*tau/tau_dot * log(1 - tau_dot)).  Lies in (0, 1) for
/// all lambda > 0, tau > 0, tau_dot < 1.
double resolvent_delay_gain_g0(double lambda, double tau, double tau_dot);

}  // namespace kdvlab
