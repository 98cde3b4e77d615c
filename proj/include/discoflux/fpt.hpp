#pragma once

// First-crossing decomposition on the grid: Robin eigenbases on [a, 0], the
// projector they span, the boundary commutator and the residual of the exact
// decomposition identity
//   Psi(t) = U_L(t) Psi + (i/2M) int_0^t G(x, 0, t - t1) phi'(0, t1) - dG/dx'(x, 0, t - t1) phi(0, t1) dt1
// where U_L is the reduced (Robin) evolution and phi(x, t1) = U_L(t1) Psi.

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <utility>

#include "discoflux/cerf.hpp"
#include "discoflux/grid.hpp"
#include "discoflux/propagate.hpp"
#include "discoflux/states.hpp"

namespace discoflux {

/// Boundary condition phi(0) cos(theta) + phi'(0) sin(theta) = 0, theta in [0, pi).
/// alpha = tan(theta); theta = 0 is Dirichlet, theta = pi/2 Neumann.
struct BcAngle {
  double theta = 0.0;
  bool degenerate = false;  ///< both boundary values vanished

  double alpha() const { return std::tan(theta); }
};

/// theta = atan2(-Psi(0), Psi'(0)) folded into [0, pi).
BcAngle alpha_from_component(double value0, double slope0);

/// Eigenpairs of the left sub-grid Hamiltonian with a Dirichlet wall at a and
/// the Robin condition at x = 0.
struct RobinBasis {
  double theta = 0.0;
  int n_left = 0;
  double dx = 0.0;
  double ghost_ratio = 0.0;  ///< ghost value / last node value of the closure
  Eigen::VectorXd energies;  ///< ascending
  Eigen::MatrixXd vectors;   ///< Euclidean-orthonormal columns on the n_left nodes

  /// phi(0) and phi'(0) of a left field, second-order one-sided extrapolation
  /// from the three nodes nearest the edge.
  std::pair<cplx, cplx> traces(const Eigen::VectorXcd& left_field) const;
};

/// The Robin closure puts a ghost at x = dx/2 beyond the edge with
/// ghost = rho * v_{n-1}, rho = (2 sin - dx cos)/(2 sin + dx cos), which makes
/// the edge value (1 + rho)/2 v and edge slope (rho - 1)/dx v satisfy the
/// condition exactly; the matrix stays symmetric tridiagonal.
RobinBasis robin_eigensolve(const Grid1D& grid, double theta, const Potential& potential = {});

/// P_alpha f: projection onto the span of the Robin basis, embedded in the
/// full box by zero extension.
Eigen::VectorXcd apply_projector(const RobinBasis& basis, const Eigen::VectorXcd& f);

/// <f|[H, P_alpha]|g> on the grid for test functions sampled at the nodes.
/// Requires f(a) = g(a) = 0.
cplx commutator_element(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g, double theta,
                        const Grid1D& grid, const Potential& potential = {});

/// -[conj(f'(0)) g(0) - conj(f(0)) g'(0)]/(2M), the continuum value.
cplx commutator_boundary_formula(cplx f0, cplx df0, cplx g0, cplx dg0, double mass);

struct DecompositionResult {
  double residual = 0.0;           ///< ||LHS - RHS|| / ||LHS||
  double residual_half_quad = 0.0;  ///< same with n_quad/2 nodes
  bool under_resolved = false;      ///< halving n_quad changed the residual by > 50%
  Eigen::VectorXcd lhs, rhs;
  Eigen::VectorXcd rhs_half_quad;
};

/// The identity for one component (real or imaginary part of the left
/// state, zero on the right cells) at a single theta. Traces are taken at t1
/// and the t1 integral is a product trapezoid: traces linear between the
/// n_quad nodes, the full-box kernel integrated exactly per mode.
DecompositionResult decomposition_residual(const Eigen::VectorXd& component, double theta, const Grid1D& grid,
                                           double t, int n_quad, const Potential& potential = {});

struct StateDecomposition {
  BcAngle theta1, theta2;  ///< real and imaginary parts
  double residual = 0.0;
  double residual_half_quad = 0.0;
  bool under_resolved = false;
};

/// Splits the left part of state into real and imaginary components, each
/// with its own theta from its boundary data (or the supplied override), and
/// checks the recombined identity. The right part must vanish.
StateDecomposition decompose_state(const PiecewiseState& state, const Grid1D& grid, double t, int n_quad,
                                   std::optional<double> theta_override = std::nullopt,
                                   const Potential& potential = {});

}  // namespace discoflux
