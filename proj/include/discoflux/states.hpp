#pragma once

// Piecewise initial states on a box with explicit one-sided data at x = 0,
// builders for the standard examples, and the A-D classification.

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "discoflux/cerf.hpp"
#include "discoflux/grid.hpp"

namespace discoflux {

/// One side of a piecewise state: value and first two derivatives, defined on
/// the closed half-interval ([a, 0] for the left part, [0, b] for the right).
struct SideFunction {
  std::function<cplx(double)> value;
  std::function<cplx(double)> first;
  std::function<cplx(double)> second;

  static SideFunction zero();
};

/// Psi(-0), Psi(+0), Psi'(-0), Psi'(+0).
struct BoundaryData {
  cplx psi_minus{0.0}, psi_plus{0.0};
  cplx dpsi_minus{0.0}, dpsi_plus{0.0};
};

class PiecewiseState {
 public:
  /// length_scale is the state's characteristic width x0 (t0 = M x0^2).
  /// Throws std::invalid_argument if either part fails to vanish at its wall.
  PiecewiseState(BoxDomain domain, SideFunction left, SideFunction right, BoundaryData boundary,
                 double length_scale, bool marginal = false);

  const BoxDomain& domain() const { return domain_; }
  const SideFunction& left() const { return left_; }
  const SideFunction& right() const { return right_; }
  const BoundaryData& boundary() const { return boundary_; }
  double length_scale() const { return length_scale_; }
  double t0() const { return domain_.mass() * length_scale_ * length_scale_; }
  /// Set by builders for degenerate inputs (e.g. truncation at a node).
  bool marginal() const { return marginal_; }

  /// Psi(x) for x != 0; the side is chosen by the sign of x.
  cplx operator()(double x) const;
  cplx derivative(double x) const;
  cplx second_derivative(double x) const;

  /// int_a^0 |left|^2 + int_0^b |right|^2 by adaptive quadrature.
  double norm() const;
  double norm_right() const;

  PiecewiseState scaled(cplx factor) const;
  PiecewiseState normalized() const;
  /// Multiplies the right part by e^{i phase}.
  PiecewiseState with_right_phase(double phase) const;

  /// Values at the cell-centred nodes of grid (which must share the domain).
  Eigen::VectorXcd sample(const Grid1D& grid) const;

 private:
  BoxDomain domain_;
  SideFunction left_, right_;
  BoundaryData boundary_;
  double length_scale_;
  bool marginal_;
};

enum class CaseLabel { A, B, C, D };
char to_char(CaseLabel c);

struct JumpDescriptor {
  cplx d_psi;                    ///< Psi(+0) - Psi(-0)
  cplx d_dpsi;                   ///< Psi'(+0) - Psi'(-0)
  std::optional<double> d_phi1;  ///< arg Psi(+0) - arg Psi(-0), in (-pi, pi]
  std::optional<double> d_phi2;  ///< arg Psi'(+0) - arg Psi'(-0), in (-pi, pi]
  CaseLabel case_label = CaseLabel::A;
  bool marginal = false;
  double value_scale = 1.0;  ///< sqrt(norm)/sqrt(b - a)
  double slope_scale = 1.0;  ///< sqrt(norm)/(b - a)^{3/2}
};

/// B if |dPsi| > eps_val; else C if |dPsi'| > eps_deriv and |Psi(0)| > eps_val;
/// else D if |dPsi'| > eps_deriv; else A. Thresholds are relative to the
/// value and slope scales of the state.
JumpDescriptor classify(const PiecewiseState& state, double eps_val = 1e-8, double eps_deriv = 1e-8);

/// Infinite-well ground state of width x0 cut at the point a fraction of the
/// way across; the cut sits at x = 0 and the right remainder is discarded.
/// The parent normalization is kept, so Psi(-0) = sqrt(2/x0) sin(pi fraction)
/// and norm() < 1; call normalized() for a unit state.
PiecewiseState truncated_well(double x0, double fraction, const BoxDomain& domain);

/// Well ground state on [-x0, 0] with the right wall removed; Psi(-0) = 0.
PiecewiseState wall_removed(double x0, const BoxDomain& domain);

/// Continuous value0 at x = 0 joined to sin(k(x - a)) on the left and
/// sin(k(b - x)) on the right, times e^{i momentum x}; normalized.
PiecewiseState kink_state(double k_left, double k_right, cplx value0, const BoxDomain& domain,
                          double momentum = 0.0);

/// profile with the right part multiplied by e^{i dphi}. Requires
/// |Psi(-0)| = |Psi(+0)| > 0 for the profile.
PiecewiseState phase_jump_state(double dphi, const PiecewiseState& profile);

/// sqrt(2/L) sin(pi (x - a)/L), the ground state of the whole box.
PiecewiseState box_ground_state(const BoxDomain& domain);

/// Normalized Gaussian exp(-(x - center)^2/(4 width^2) + i k0 x). The tails
/// must be below 1e-12 at both walls.
PiecewiseState gaussian_state(double center, double width, double k0, const BoxDomain& domain);

/// State from samples (x_j, psi_j) with no sample at x = 0. Each side is a
/// natural cubic spline of its own samples, extended to its wall and to x = 0;
/// the boundary data are the spline's one-sided limits.
PiecewiseState sampled_state(const std::vector<double>& x, const std::vector<cplx>& psi, const BoxDomain& domain,
                             double length_scale);

}  // namespace discoflux
