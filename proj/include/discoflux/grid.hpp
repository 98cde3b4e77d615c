#pragma once

// Box domain, cell-centred grid and the discrete Hamiltonian.

#include <Eigen/Core>
#include <string>
#include <vector>

namespace discoflux {

/// Box [a, b] with a < 0 < b and particle mass M.
class BoxDomain {
 public:
  BoxDomain(double a, double b, double mass);

  double a() const { return a_; }
  double b() const { return b_; }
  double mass() const { return mass_; }
  double length() const { return b_ - a_; }

 private:
  double a_, b_, mass_;
};

/// Uniform grid of n_cells cells on [a, b]. Nodes sit at cell centres
/// x_i = a + (i + 1/2) dx, so x = 0 is the edge between cells n_left - 1
/// and n_left and never a node.
class Grid1D {
 public:
  /// Throws std::invalid_argument if n_cells < 64 or 0 is not a cell edge.
  Grid1D(const BoxDomain& domain, int n_cells);

  const BoxDomain& domain() const { return domain_; }
  int n_cells() const { return n_cells_; }
  int n_left() const { return n_left_; }
  int n_right() const { return n_cells_ - n_left_; }
  double dx() const { return dx_; }
  double x(int i) const { return domain_.a() + (i + 0.5) * dx_; }
  Eigen::VectorXd nodes() const;

  /// dx <= sqrt(t_min/M)/8.
  bool resolves(double t_min) const;

 private:
  BoxDomain domain_;
  int n_cells_;
  int n_left_;
  double dx_;
};

/// External potential V(x).
struct Potential {
  enum class Kind { zero, harmonic, step, tabulated };
  Kind kind = Kind::zero;
  double kappa = 0.0;     ///< harmonic: V = kappa x^2 / 2
  double height = 0.0;    ///< step: V = height for x > position
  double position = 0.0;
  std::vector<double> table_x, table_v;  ///< tabulated, linear interpolation

  bool is_zero() const;
  double operator()(double x) const;
  Eigen::VectorXd sample(const Grid1D& grid) const;
};

Potential::Kind potential_kind_from_string(const std::string& name);

/// -1/(2M dx^2) [1, -2, 1] + diag(V) with Dirichlet walls at a and b.
/// The walls sit half a cell outside the end nodes; the antisymmetric ghost
/// gives the end diagonal -3 instead of -2.
struct DiscreteHamiltonian {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;  ///< size n - 1

  DiscreteHamiltonian(const Grid1D& grid, const Potential& potential = {});

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
};

/// dx * sum_{i >= n_left} |psi_i|^2.
double p_right(const Eigen::VectorXcd& psi, const Grid1D& grid);
/// dx * sum |psi_i|^2.
double grid_norm(const Eigen::VectorXcd& psi, const Grid1D& grid);
/// Discrete probability flux through the x = 0 edge,
/// Im(conj(psi_{L-1}) psi_L)/(M dx); equals dP^R/dt of the semi-discrete dynamics.
double edge_flux(const Eigen::VectorXcd& psi, const Grid1D& grid);

}  // namespace discoflux
