#pragma once

#include <span>
#include <vector>

namespace kdvlab {

/// Uniform grid on [0, L] with nx cells (nx+1 nodes).
struct SpaceGrid {
  double L = 1.0;
  int nx = 8;
  double h = 0.125;
  std::vector<double> x;
};
SpaceGrid make_space_grid(double L, int nx);  // requires nx >= 8

/// Uniform grid on [0, 1] with nrho cells (nrho+1 nodes) for the delay channel.
struct RhoGrid {
  int nrho = 4;
  double drho = 0.25;
  std::vector<double> rho;
};
RhoGrid make_rho_grid(int nrho);  // requires nrho >= 4

/// General banded matrix in LAPACK band storage with optional LU factorization.
/// Bandwidth is fixed at construction; all stencils in this project fit in
/// kl = ku <= 5.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  double& at(int i, int j);        // |i-j| must be within the band
  double get(int i, int j) const;  // zero outside the band

  /// y = A x (uses the unfactored coefficients).
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// LU-factor in place (dgbtrf); multiply() is no longer available afterwards.
  void factor();
  bool factored() const { return factored_; }

  /// Solve A x = rhs in place (dgbtrs); requires factor() first.
  void solve(std::span<double> rhs) const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

/// First derivative on all nx+1 nodes: second-order centered interior stencil,
/// second-order one-sided stencils at both ends.  Exact on quadratics.
BandMatrix d1_operator(const SpaceGrid& grid);

/// Composite trapezoid rule; exact for linear integrands.
double quadrature(const SpaceGrid& grid, std::span<const double> values);
double quadrature(const RhoGrid& grid, std::span<const double> values);
double trapezoid(std::span<const double> values, double spacing);

/// One-sided second-order trace eta_x(L) from full-grid node values
/// (uses eta(L) = 0): (eta_{n-2} - 4 eta_{n-1} + 3 eta_n) / (2h).
double boundary_trace_eta_x_L(std::span<const double> eta, const SpaceGrid& grid);

/// Backward-difference trace (eta_n - eta_{n-1})/h.  This is the trace the
/// energy-exact scheme couples to the feedback law and the delay channel; the
/// two traces agree to O(h).
double scheme_trace_eta_x_L(std::span<const double> eta, const SpaceGrid& grid);

/// Which of the paper's two boundary-condition sets closes the third
/// derivative: the eta set {u(0)=u(L)=0, u_x(0)=0} or the omega set
/// {u(0)=u(L)=0, u_x(L)=g}.
enum class ThirdDerivBc { eta_set, omega_set };

/// Third derivative on the interior nodes 1..nx-1 with ghost nodes eliminated
/// through the three boundary conditions of the selected set.  The centered
/// interior stencil is (-u_{i-2} + 2u_{i-1} - 2u_{i+1} + u_{i+2}) / (2h^3).
///
/// Ghost closures: the Neumann conditions are eliminated with their centered
/// counterparts (eta_{-1} = eta_1, omega_{n+1} = omega_{n-1} + 2hg); the ghost
/// with no remaining condition is closed by odd reflection through the
/// homogeneous Dirichlet value (eta_{n+1} = -eta_{n-1}, omega_{-1} = -omega_1).
/// These closures make the coupled generator exactly skew outside the feedback
/// entry, at the price of reduced pointwise consistency in the two rows
/// adjacent to the reflected ghosts.
///
/// For the omega set, `load_coefficient` scales the affine contribution of the
/// boundary datum g into row nx-1:  d3(omega)_{nx-1} += load_coefficient * g.
struct ThirdDeriv {
  BandMatrix op;                  // (nx-1) x (nx-1), bandwidth 2
  double load_coefficient = 0.0;  // 1/h^2 for the omega set, 0 for the eta set
};
ThirdDeriv d3_operator(const SpaceGrid& grid, ThirdDerivBc bc);

/// Centered first derivative restricted to interior nodes with homogeneous
/// Dirichlet data at both ends ((nx-1) x (nx-1), bandwidth 1).  Exactly
/// skew-adjoint in the h-weighted pairing.
BandMatrix d1_interior(const SpaceGrid& grid);

/// Symmetric positive semidefinite second-difference form D2^T D2 on interior
/// nodes (zero Dirichlet closure), used for the dt^2-scaled smoothing filter.
BandMatrix smoothing_form(const SpaceGrid& grid);

}  // namespace kdvlab
