#include "kdvlab/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kdvlab/simulate.hpp"

namespace kdvlab {

double energy(const SystemState& state, const SpaceGrid& xg, const RhoGrid& rg,
              const GainConfig& gains, const DelayProfile& profile) {
  std::vector<double> sq(xg.nx + 1);
  for (int i = 0; i <= xg.nx; ++i)
    sq[i] = state.eta[i] * state.eta[i] + state.omega[i] * state.omega[i];
  double e = 0.5 * quadrature(xg, sq);
  const double ab = std::abs(gains.beta);
  if (ab > 0.0) {
    std::vector<double> zq(rg.nrho + 1);
    for (int j = 0; j <= rg.nrho; ++j) zq[j] = state.z[j] * state.z[j];
    e += 0.5 * ab * profile.tau(state.t) * quadrature(rg, zq);
  }
  return e;
}

LyapunovValue lyapunov_V(const SystemState& state, const SpaceGrid& xg, const RhoGrid& rg,
                         const GainConfig& gains, const DelayProfile& profile, double mu1,
                         double mu2) {
  LyapunovValue out;
  out.E = energy(state, xg, rg, gains, profile);

  std::vector<double> xew(xg.nx + 1);
  for (int i = 0; i <= xg.nx; ++i) xew[i] = xg.x[i] * state.eta[i] * state.omega[i];
  out.V1 = 0.5 * quadrature(xg, xew);

  const double ab = std::abs(gains.beta);
  if (ab > 0.0) {
    std::vector<double> zq(rg.nrho + 1);
    for (int j = 0; j <= rg.nrho; ++j) zq[j] = (1.0 - rg.rho[j]) * state.z[j] * state.z[j];
    out.V2 = 0.5 * ab * profile.tau(state.t) * quadrature(rg, zq);
  }
  out.V = out.E + mu1 * out.V1 + mu2 * out.V2;
  return out;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> E,
                        double window_fraction) {
  if (t.size() != E.size() || t.size() < 2)
    throw std::invalid_argument("fit_decay_rate: need matching series with >= 2 samples");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("fit_decay_rate: window fraction must lie in (0, 1]");

  const std::size_t n = t.size();
  std::size_t first = static_cast<std::size_t>(std::floor((1.0 - window_fraction) * n));
  if (first > n - 2) first = n - 2;

  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const std::size_t m = n - first;
  for (std::size_t i = first; i < n; ++i) {
    if (!(E[i] > 0.0))
      throw std::invalid_argument(
          "fit_decay_rate: nonpositive energy in the fit window (conserved or zero run?)");
    const double y = std::log(E[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double det = m * stt - st * st;
  if (det == 0.0) throw std::invalid_argument("fit_decay_rate: degenerate time window");
  const double slope = (m * sty - st * sy) / det;
  const double icept = (sy - slope * st) / m;

  DecayFit fit;
  fit.lambda_fit = -slope;
  fit.intercept = icept;
  fit.t_begin = t[first];
  fit.t_end = t[n - 1];
  double ss = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double r = std::log(E[i]) - (icept + slope * t[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

BoundReport verify_bound(std::span<const double> t, std::span<const double> E,
                         const Certificate& cert, double slack) {
  if (t.size() != E.size() || t.empty())
    throw std::invalid_argument("verify_bound: need a nonempty record");
  if (!cert.feasible) throw std::invalid_argument("verify_bound: certificate is infeasible");

  BoundReport rep;
  rep.slack = slack;
  rep.lambda = cert.lambda;
  rep.zeta = cert.zeta;
  rep.E0 = E[0];
  if (E[0] == 0.0) {
    rep.vacuous = true;
    rep.pass = true;
    return rep;
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double envelope = cert.zeta * rep.E0 * std::exp(-cert.lambda * (t[i] - t[0]));
    const double ratio = E[i] / envelope;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.t_of_max = t[i];
    }
  }
  rep.pass = rep.max_ratio <= 1.0 + slack;
  return rep;
}

DissipationResidual dissipation_residual(const SimulationRecord& rec, const GainConfig& gains) {
  if (rec.steps() == 0) throw std::invalid_argument("dissipation_residual: empty record");
  DissipationResidual out;
  const std::size_t n = rec.steps();
  out.t.reserve(n);
  out.residual.reserve(n);
  out.quad_form.reserve(n);
  const double ab = std::abs(gains.beta);
  double e_prev = rec.E0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = rec.step_taudot_secant[k];
    const QuadForm2 phi_s{-2.0 * gains.alpha + ab, gains.beta, ab * (s - 1.0)};
    const double q = 0.5 * phi_s.eval(rec.step_trace_mid[k], rec.step_z1_used[k]);
    const double r = (rec.step_E[k] - e_prev) / rec.dt - q;
    out.t.push_back(rec.step_t[k]);
    out.quad_form.push_back(q);
    out.residual.push_back(r);
    out.max_abs = std::max(out.max_abs, std::abs(r));
    e_prev = rec.step_E[k];
  }
  return out;
}

KatoReport kato_smoothing_report(const SimulationRecord& rec, double T, const SpaceGrid& xg,
                                 const RhoGrid& rg, const GainConfig& gains,
                                 std::span<const double> eta0, std::span<const double> omega0,
                                 std::span<const double> z0) {
  if (rec.steps() == 0) throw std::invalid_argument("kato_smoothing_report: empty record");
  if (!(T > 0.0) || T > rec.step_t.back() + 1e-12)
    throw std::invalid_argument("kato_smoothing_report: T outside the recorded range");

  KatoReport rep;
  rep.C = std::max({1.0, xg.L + T, (gains.alpha * gains.alpha + 0.5) * xg.L});

  // Cumulative integral recorded per step; take the last step time <= T.
  std::size_t k = 0;
  while (k + 1 < rec.steps() && rec.step_t[k + 1] <= T + 1e-12) ++k;
  rep.lhs = rec.step_kato_cum[k];

  std::vector<double> sq(xg.nx + 1);
  for (int i = 0; i <= xg.nx; ++i) sq[i] = eta0[i] * eta0[i] + omega0[i] * omega0[i];
  double ic_norm = quadrature(xg, sq);
  std::vector<double> zq(rg.nrho + 1);
  for (int j = 0; j <= rg.nrho; ++j) zq[j] = z0[j] * z0[j];
  ic_norm += quadrature(rg, zq);

  if (ic_norm == 0.0) {
    rep.vacuous = true;
    rep.pass = true;
    rep.note = "zero initial data: inequality is vacuous";
    return rep;
  }
  rep.rhs = rep.C * ic_norm;
  rep.ratio = rep.lhs / rep.rhs;
  rep.pass = rep.ratio <= 1.0;
  if (gains.alpha == 0.0 && gains.beta == 0.0)
    rep.note = "conservative gains: the smoothing estimate was proved for feasible gains";
  return rep;
}

}  // namespace kdvlab
