#include "kdvlab/certify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kdvlab/model.hpp"

namespace kdvlab {

bool QuadForm2::indeterminate(double tol) const { return std::abs(det()) < tol; }

static void require_d01(double d) {
  if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("d must lie in [0, 1)");
}

QuadForm2 phi_matrix(double alpha, double beta, double d) {
  require_d01(d);
  const double ab = std::abs(beta);
  return {-2.0 * alpha + ab, beta, ab * (d - 1.0)};
}

QuadForm2 psi_matrix(double alpha, double beta, double d, double L, double mu1, double mu2) {
  require_d01(d);
  if (!(L > 0.0)) throw std::invalid_argument("psi_matrix: L must be positive");
  if (mu1 < 0.0 || mu2 < 0.0) throw std::invalid_argument("psi_matrix: weights must be >= 0");
  const double ab = std::abs(beta);
  QuadForm2 m;
  m.a11 = -2.0 * alpha + ab + L * mu1 * (1.0 + alpha * alpha) + ab * mu2;
  m.a12 = beta * (1.0 - L * mu1 * alpha);
  m.a22 = ab * (d - 1.0) + L * mu1 * beta * beta;
  return m;
}

double mu1_upper_bound(double alpha, double beta, double d, double L) {
  if (!check_gain_feasibility(alpha, beta, d))
    throw CertificateError("(2a-|b|)(1-d) > |b|", "mu1_upper_bound: gains are infeasible");
  if (!(L > 0.0)) throw std::invalid_argument("mu1_upper_bound: L must be positive");
  const double ab = std::abs(beta);
  return ((2.0 * alpha - ab) * (1.0 - d) - ab) / (L * (1.0 - d) * (1.0 + alpha * alpha));
}

double mu2_of_mu1(double alpha, double beta, double d, double L, double mu1) {
  require_d01(d);
  if (beta == 0.0)
    throw std::invalid_argument("mu2_of_mu1: beta = 0 (no delay channel; use mu2 = 0)");
  if (!(L > 0.0)) throw std::invalid_argument("mu2_of_mu1: L must be positive");
  if (mu1 < 0.0) throw std::invalid_argument("mu2_of_mu1: mu1 must be >= 0");
  const double ab = std::abs(beta);
  const double num =
      (2.0 * alpha - ab) * (1.0 - d) - ab - L * (1.0 - d) * (1.0 + alpha * alpha) * mu1;
  return num / (ab * (1.0 - d));
}

double rate_f(double mu1, double L, RateVariant variant) {
  if (!(L > 0.0 && L < certified_length_limit()))
    throw CertificateError("0 < L < sqrt(3)*pi", "rate_f: L outside certified range");
  if (mu1 < 0.0) throw std::invalid_argument("rate_f: mu1 must be >= 0");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double num = mu1 * (3.0 * pi2 - L * L);
  const double den =
      L * L * (variant == RateVariant::theorem ? 1.0 + mu1 : 1.0 + mu1 * L);
  return num / den;
}

double rate_g(double mu1, double alpha, double beta, double d, double L, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("rate_g: M must be positive");
  const double ab = std::abs(beta);
  const double slope = L * (1.0 - d) * (1.0 + alpha * alpha);
  const double num = (2.0 * alpha - ab) * (1.0 - d) - ab - slope * mu1;
  const double den = 2.0 * alpha * (1.0 - d) - ab - slope * mu1;
  if (num < 0.0)
    throw std::invalid_argument("rate_g: mu1 beyond mu1_upper_bound");
  if (!(den > 0.0))
    throw std::invalid_argument("rate_g: denominator not positive (infeasible parameters)");
  return (1.0 - d) * num / (M * den);
}

OptimalRate optimize_mu1(double alpha, double beta, double d, double L, double M, double tol) {
  if (beta == 0.0)
    throw std::invalid_argument("optimize_mu1: beta = 0 makes g degenerate; certify directly");
  if (!(tol > 0.0)) throw std::invalid_argument("optimize_mu1: tol must be positive");
  if (!(L > 0.0 && L < certified_length_limit()))
    throw CertificateError("0 < L < sqrt(3)*pi", "optimize_mu1: L outside certified range");
  const double hi = mu1_upper_bound(alpha, beta, d, L);  // throws if infeasible

  auto fg = [&](double m) { return rate_f(m, L, RateVariant::proposition) -
                                   rate_g(m, alpha, beta, d, L, M); };

  // f - g is increasing minus decreasing: one sign change on (0, hi).
  double lo = 0.0, up = hi * (1.0 - 1e-15);
  OptimalRate out;
  double mid = 0.5 * (lo + up);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + up);
    const double v = fg(mid);
    ++out.iterations;
    if (std::abs(v) <= tol || (up - lo) < 1e-17 * hi) break;
    (v < 0.0 ? lo : up) = mid;
  }
  out.mu1_star = mid;
  out.lambda_star = rate_f(mid, L, RateVariant::proposition);
  return out;
}

Certificate build_certificate(double alpha, double beta, double d, double L, double M,
                              double mu1, double mu2, std::optional<RateVariant> variant) {
  if (!check_gain_feasibility(alpha, beta, d))
    throw CertificateError("(2a-|b|)(1-d) > |b|", "build_certificate: gains are infeasible");
  if (!(L > 0.0 && L < certified_length_limit()))
    throw CertificateError("0 < L < sqrt(3)*pi",
                           "build_certificate: L outside certified range (0, sqrt(3)*pi)");
  if (!(M > 0.0)) throw CertificateError("M > 0", "build_certificate: M must be positive");
  if (!(mu1 > 0.0)) throw CertificateError("mu1 > 0", "build_certificate: mu1 must be positive");
  if (!(mu1 * L < 1.0))
    throw CertificateError("mu1*L < 1", "build_certificate: mu1*L must be < 1");
  if (beta == 0.0) {
    if (mu2 != 0.0)
      throw CertificateError("mu2 = 0 when beta = 0",
                             "build_certificate: no delay channel, mu2 must be 0");
  } else {
    if (!(mu2 > 0.0)) throw CertificateError("mu2 > 0", "build_certificate: mu2 must be positive");
  }
  if (!(mu2 < 1.0)) throw CertificateError("mu2 < 1", "build_certificate: mu2 must be < 1");

  Certificate c;
  c.mu1 = mu1;
  c.mu2 = mu2;
  c.phi = phi_matrix(alpha, beta, d);
  c.psi = psi_matrix(alpha, beta, d, L, mu1, mu2);

  const double f_prop = rate_f(mu1, L, RateVariant::proposition);
  const double f_th = rate_f(mu1, L, RateVariant::theorem);
  double f_val;
  if (variant) {
    c.variant = *variant;
    f_val = (*variant == RateVariant::theorem) ? f_th : f_prop;
  } else {
    c.variant_was_min = true;
    f_val = std::min(f_prop, f_th);
    c.variant = (f_val == f_prop) ? RateVariant::proposition : RateVariant::theorem;
  }

  if (beta == 0.0) {
    c.lambda = f_val;
  } else {
    const double g_bound = mu2 * (1.0 - d) / (M * (1.0 + mu2));
    c.lambda = std::min(f_val, g_bound);
  }

  const double m = std::max(mu1 * L, mu2);
  c.zeta = (1.0 + m) / (1.0 - m);

  // Numeric definiteness is authoritative (the |alpha| < 1 sufficient condition
  // is not enforced).  For beta = 0 the delayed column of Psi vanishes
  // identically and only the a11 entry carries information.
  if (beta == 0.0) {
    if (c.psi.a11 < 0.0) {
      c.feasible = true;
    } else {
      c.feasible = false;
      c.diagnostic = "a11 >= 0";
    }
  } else if (c.psi.negative_definite() && !c.psi.indeterminate()) {
    c.feasible = true;
  } else {
    c.feasible = false;
    if (c.psi.a11 >= 0.0)
      c.diagnostic = "a11 >= 0";
    else if (c.psi.indeterminate())
      c.diagnostic = "det(Psi) within round-off of zero";
    else
      c.diagnostic = "det(Psi) <= 0";
  }
  if (c.feasible && !(c.lambda > 0.0)) {
    c.feasible = false;
    c.diagnostic = "lambda <= 0";
  }
  return c;
}

double resolvent_delay_gain_g0(double lambda, double tau, double tau_dot) {
  if (!(lambda > 0.0)) throw std::invalid_argument("resolvent_delay_gain_g0: lambda must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("resolvent_delay_gain_g0: tau must be > 0");
  if (!(tau_dot < 1.0)) throw std::invalid_argument("resolvent_delay_gain_g0: tau_dot must be < 1");
  if (tau_dot == 0.0) return std::exp(-lambda * tau);
  // log1p keeps the exponent stable as tau_dot -> 0.
  return std::exp(lambda * tau * (std::log1p(-tau_dot) / tau_dot));
}

}  // namespace kdvlab
