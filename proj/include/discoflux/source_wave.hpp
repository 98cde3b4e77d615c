#pragma once

// The wave emitted by a discontinuity at x = 0: the time-integrated free
// propagator of a unit point source, its spatial derivative, far field and
// moment integrals. Units: hbar = 1.

#include <string_view>

#include "discoflux/cerf.hpp"

namespace discoflux {

/// Which one-sided limit to take at x = 0.
enum class Side { minus, plus };

/// Particle mass and elapsed time, both strictly positive.
class MassTime {
 public:
  MassTime(double mass, double time);

  double mass() const { return mass_; }
  double time() const { return time_; }
  /// sqrt(t/M), the spreading length of the source wave.
  double length() const;

 private:
  double mass_;
  double time_;
};

/// delta_psi(x, t) = -sqrt(it/2M pi) e^{iMx^2/2t} + (|x|/2) erfc(|x| sqrt(M/2t) e^{-i pi/4}).
cplx delta_psi(double x, const MassTime& mt);

/// x-derivative of delta_psi for x != 0: sign(x)/2 * erfc(|x| sqrt(M/2t) e^{-i pi/4}).
/// The Gaussian pieces of the naive derivative cancel exactly, so this form has
/// no cancellation near the origin. Throws std::domain_error at x == 0.
cplx delta_psi_prime(double x, const MassTime& mt);

/// One-sided limit of delta_psi_prime at the origin: -1/2 (minus) or +1/2 (plus).
cplx delta_psi_prime(Side side);

/// Second x-derivative, even in x: -sqrt(M/(2 pi t)) e^{-i pi/4} e^{iMx^2/2t}.
cplx delta_psi_second(double x, const MassTime& mt);

/// Leading far-field form e^{-i pi/4} (t/M)^{3/2} e^{iMx^2/2t} / (sqrt(2 pi) x^2), x != 0.
cplx delta_psi_far_field(double x, const MassTime& mt);

/// Half-line moments of delta_psi on [0, inf).
struct MomentSet {
  cplx int_dpsi;             ///< int delta_psi
  cplx int_x_dpsi;           ///< int x delta_psi
  cplx int_x_dpsi_prime;     ///< int x delta_psi'
  double int_abs2_dpsi;      ///< int |delta_psi|^2
  double int_abs2_dpsi_prime;///< int |delta_psi'|^2
  cplx int_dpsi_prime;       ///< int delta_psi'
};

/// Closed forms of the six moments.
MomentSet moments(const MassTime& mt);

enum class MomentWeight { one, x, abs2, x_prime, abs2_prime, prime };

std::string_view to_string(MomentWeight w);
MomentWeight moment_weight_from_string(std::string_view name);

struct MomentQuadrature {
  cplx value;
  double error;      ///< quadrature estimate plus tail truncation estimate
  cplx tail;         ///< analytic contribution of [cutoff, inf)
  int evaluations;
};

/// Independent numerical route to a moment: adaptive Gauss-Kronrod on
/// [0, cutoff] with panels capped at a quarter of the local oscillation
/// length, plus the tail from the large-x asymptotic series of delta_psi
/// (whose leading term is the far field) integrated in closed form.
/// Requires cutoff >= 20 sqrt(t/M) and tol in [1e-12, 1e-4]; throws
/// QuadratureError carrying the achieved estimate on non-convergence.
MomentQuadrature quad_moment(MomentWeight weight, const MassTime& mt, double cutoff, double tol);

/// quad_moment with cutoff = 30 sqrt(t/M).
MomentQuadrature quad_moment(MomentWeight weight, const MassTime& mt, double tol = 1e-10);

}  // namespace discoflux
