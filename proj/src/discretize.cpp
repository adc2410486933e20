#include "kdvlab/discretize.hpp"

#include <cmath>
#include <stdexcept>

#include <lapacke.h>

namespace kdvlab {

SpaceGrid make_space_grid(double L, int nx) {
  if (!(L > 0.0)) throw std::invalid_argument("make_space_grid: L must be positive");
  if (nx < 8) throw std::invalid_argument("make_space_grid: nx must be >= 8");
  SpaceGrid g;
  g.L = L;
  g.nx = nx;
  g.h = L / nx;
  g.x.resize(nx + 1);
  for (int i = 0; i <= nx; ++i) g.x[i] = i * g.h;
  g.x.back() = L;
  return g;
}

RhoGrid make_rho_grid(int nrho) {
  if (nrho < 4) throw std::invalid_argument("make_rho_grid: nrho must be >= 4");
  RhoGrid g;
  g.nrho = nrho;
  g.drho = 1.0 / nrho;
  g.rho.resize(nrho + 1);
  for (int j = 0; j <= nrho; ++j) g.rho[j] = j * g.drho;
  g.rho.back() = 1.0;
  return g;
}

BandMatrix::BandMatrix(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku) {
  if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandMatrix: bad shape");
  ldab_ = 2 * kl_ + ku_ + 1;  // extra kl rows for the LU fill-in
  ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
  ipiv_.assign(n_, 0);
}

// LAPACK band storage (column-major): AB(kl+ku+1+i-j, j) = A(i,j).
double& BandMatrix::at(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || j - i > ku_ || i - j > kl_)
    throw std::out_of_range("BandMatrix::at outside band");
  return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

double BandMatrix::get(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || j - i > ku_ || i - j > kl_) return 0.0;
  return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

void BandMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (factored_) throw std::logic_error("BandMatrix::multiply after factor()");
  if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
    throw std::invalid_argument("BandMatrix::multiply: size mismatch");
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j)
      s += ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] * x[j];
    y[i] = s;
  }
}

void BandMatrix::factor() {
  if (factored_) return;
  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_,
                                         ipiv_.data());
  if (info != 0)
    throw std::runtime_error("BandMatrix::factor: singular banded system (dgbtrf info=" +
                             std::to_string(info) + ")");
  factored_ = true;
}

void BandMatrix::solve(std::span<double> rhs) const {
  if (!factored_) throw std::logic_error("BandMatrix::solve before factor()");
  if (static_cast<int>(rhs.size()) != n_)
    throw std::invalid_argument("BandMatrix::solve: size mismatch");
  const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, ab_.data(),
                                         ldab_, ipiv_.data(), rhs.data(), n_);
  if (info != 0) throw std::runtime_error("BandMatrix::solve: dgbtrs failed");
}

BandMatrix d1_operator(const SpaceGrid& grid) {
  const int n = grid.nx + 1;
  const double h = grid.h;
  BandMatrix m(n, 2, 2);
  m.at(0, 0) = -1.5 / h;
  m.at(0, 1) = 2.0 / h;
  m.at(0, 2) = -0.5 / h;
  for (int i = 1; i < n - 1; ++i) {
    m.at(i, i - 1) = -0.5 / h;
    m.at(i, i + 1) = 0.5 / h;
  }
  m.at(n - 1, n - 3) = 0.5 / h;
  m.at(n - 1, n - 2) = -2.0 / h;
  m.at(n - 1, n - 1) = 1.5 / h;
  return m;
}

double trapezoid(std::span<const double> values, double spacing) {
  if (values.size() < 2) throw std::invalid_argument("trapezoid: need >= 2 values");
  // Kahan summation: the sandwich and monotonicity checks compare energies at
  // 1e-12 relative, so the quadrature must not wobble at n*eps.
  double sum = 0.0, comp = 0.0;
  auto add = [&](double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  add(0.5 * values.front());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) add(values[i]);
  add(0.5 * values.back());
  return sum * spacing;
}

double quadrature(const SpaceGrid& grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.nx + 1)
    throw std::invalid_argument("quadrature: values must cover all nodes");
  return trapezoid(values, grid.h);
}

double quadrature(const RhoGrid& grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.nrho + 1)
    throw std::invalid_argument("quadrature: values must cover all nodes");
  return trapezoid(values, grid.drho);
}

double boundary_trace_eta_x_L(std::span<const double> eta, const SpaceGrid& grid) {
  const int n = grid.nx;
  return (eta[n - 2] - 4.0 * eta[n - 1] + 3.0 * eta[n]) / (2.0 * grid.h);
}

double scheme_trace_eta_x_L(std::span<const double> eta, const SpaceGrid& grid) {
  const int n = grid.nx;
  return (eta[n] - eta[n - 1]) / grid.h;
}

ThirdDeriv d3_operator(const SpaceGrid& grid, ThirdDerivBc bc) {
  const int n = grid.nx - 1;  // interior unknowns 1..nx-1
  const double c = 1.0 / (2.0 * grid.h * grid.h * grid.h);
  ThirdDeriv out;
  out.op = BandMatrix(n, 2, 2);
  BandMatrix& m = out.op;

  // Row r holds node i = r+1; stencil (-1, 2, 0, -2, 1)*c at i-2..i+2 with
  // Dirichlet zeros at nodes 0 and nx.
  auto add = [&](int r, int node, double v) {
    if (node >= 1 && node <= grid.nx - 1) m.at(r, node - 1) += v;
  };
  for (int r = 0; r < n; ++r) {
    const int i = r + 1;
    add(r, i - 2, -c);
    add(r, i - 1, 2.0 * c);
    add(r, i + 1, -2.0 * c);
    add(r, i + 2, c);
  }

  if (bc == ThirdDerivBc::eta_set) {
    // Ghost at -1 from the centered eta_x(0) = 0, ghost at nx+1 by odd
    // reflection through eta(L) = 0.
    add(0, 1, -c);           // row of node 1: -eta_{-1} = -eta_1
    add(n - 1, n, c * -1.0); // row of node nx-1: +eta_{nx+1} = -eta_{nx-1}
  } else {
    // Ghost at -1 by odd reflection through omega(0) = 0, ghost at nx+1 from
    // the centered omega_x(L) = g: omega_{nx+1} = omega_{nx-1} + 2hg.
    add(0, 1, c);            // row of node 1: -omega_{-1} = +omega_1
    add(n - 1, n, c);        // row of node nx-1: +omega_{nx+1} -> +omega_{nx-1}
    out.load_coefficient = 1.0 / (grid.h * grid.h);  // + 2hg * c
  }
  return out;
}

BandMatrix d1_interior(const SpaceGrid& grid) {
  const int n = grid.nx - 1;
  const double c = 0.5 / grid.h;
  BandMatrix m(n, 1, 1);
  for (int r = 0; r < n; ++r) {
    if (r > 0) m.at(r, r - 1) = -c;
    if (r < n - 1) m.at(r, r + 1) = c;
  }
  return m;
}

BandMatrix smoothing_form(const SpaceGrid& grid) {
  // (D2^T D2) with D2 the second difference /h^2 and zero Dirichlet closure:
  // pentadiagonal (1, -4, 6, -4, 1)/h^4 with adjusted first/last rows.
  const int n = grid.nx - 1;
  const double c = 1.0 / std::pow(grid.h, 4);
  BandMatrix m(n, 2, 2);
  for (int r = 0; r < n; ++r) {
    double diag = 6.0;
    if (r == 0 || r == n - 1) diag = 5.0;
    m.at(r, r) = diag * c;
    if (r >= 1) m.at(r, r - 1) = -4.0 * c;
    if (r + 1 < n) m.at(r, r + 1) = -4.0 * c;
    if (r >= 2) m.at(r, r - 2) = c;
    if (r + 2 < n) m.at(r, r + 2) = c;
  }
  return m;
}

}  // namespace kdvlab
