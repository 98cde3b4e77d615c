#pragma once

// Numerical evolution on the box grid: exact-in-time spectral propagation,
// Crank-Nicolson stepping, and the P^R / current measurements built on them.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "discoflux/asymptotics.hpp"
#include "discoflux/grid.hpp"
#include "discoflux/states.hpp"
#include "discoflux/tridiagonal.hpp"

namespace discoflux {

/// exp(-iHt) for the discrete Hamiltonian of a grid.
///
/// For V = 0 the eigenvectors are the discrete sines sin(pi k (i + 1/2)/n),
/// applied by an odd-extension FFT of length 2n; otherwise the full
/// eigendecomposition of the tridiagonal Hamiltonian is stored (dense, so
/// practical to a few thousand cells).
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Grid1D& grid, const Potential& potential = {});

  /// exp(-iHt) psi; any real t, negative t runs backwards.
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;

  const Grid1D& grid() const { return grid_; }
  bool uses_fft() const { return dense_.values.size() == 0; }
  /// Ascending eigenvalues.
  Eigen::VectorXd energies() const;
  /// Eigenvectors as Euclidean-orthonormal columns, same order as energies().
  Eigen::MatrixXd eigenvectors() const;

 private:
  Grid1D grid_;
  Eigen::VectorXd extended_energies_;  // FFT mode, length 2n
  TridiagonalEigen dense_;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> p_right;
  std::vector<double> current;
  std::vector<double> norm;
  Eigen::VectorXcd final_field;
  bool accuracy_warning = false;  ///< Crank-Nicolson dt > M dx^2
};

/// n log-spaced times from t_min to t_max inclusive.
std::vector<double> log_time_ladder(double t_min, double t_max, int n);

/// Evolves the sampled state to each time; the current is the centred
/// difference of P^R with step t/20.
EvolutionTrace spectral_propagate(const PiecewiseState& state, const Grid1D& grid, const std::vector<double>& times,
                                  const Potential& potential = {});
EvolutionTrace spectral_propagate(const SpectralPropagator& propagator, const Eigen::VectorXcd& psi0,
                                  const std::vector<double>& times);

/// (1 + iH dt/2) psi_{n+1} = (1 - iH dt/2) psi_n. Records every record_every
/// steps (and the last); the current is the centred step difference of P^R.
EvolutionTrace crank_nicolson_propagate(const PiecewiseState& state, const Grid1D& grid, double dt, int n_steps,
                                        int record_every, const Potential& potential = {});
EvolutionTrace crank_nicolson_propagate(const Eigen::VectorXcd& psi0, const Grid1D& grid, double dt, int n_steps,
                                        int record_every, const Potential& potential = {});

/// sqrt(dx sum |u - v|^2).
double l2_distance(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, const Grid1D& grid);

enum class Fig1Case { truncated, wall_removed };
Fig1Case fig1_case_from_string(const std::string& name);
std::string to_string(Fig1Case c);

struct Fig1Curves {
  Fig1Case which = Fig1Case::truncated;
  double time = 0.0;
  std::vector<double> x;
  Eigen::VectorXcd numerical;
  std::vector<ShortTimeTerms> terms;
  double l2_distance = 0.0;  ///< numerical vs the full short-time field
  double threshold = 0.0;    ///< 0.02 (truncated) or 0.10 (wall removed)
  bool pass() const { return l2_distance <= threshold; }
};

/// Unit-width well (x0 = 1): truncated at 3/4 or with the right wall removed,
/// evolved to t = t_over_t0 M x0^2 on grid, against the short-time field.
/// Requires t_over_t0 in (0, 0.1].
Fig1Curves fig1_curves(Fig1Case which, double t_over_t0, const Grid1D& grid);

}  // namespace discoflux
