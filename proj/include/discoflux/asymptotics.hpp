#pragma once

// Short-time reconstruction of an evolving discontinuous state, the right-side
// probability expansion and the leading current laws.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "discoflux/source_wave.hpp"
#include "discoflux/states.hpp"

namespace discoflux {

/// The four pieces of Psi(x, t) ~ Psi(x) - it (H Psi)(x) - [dPsi' dPsi + dpsi dPsi'].
struct ShortTimeTerms {
  cplx initial;       ///< Psi(x)
  cplx hamiltonian;   ///< -it (H Psi)(x), H applied on each side separately
  cplx value_source;  ///< -delta_psi'(x, t) * (Psi(+0) - Psi(-0))
  cplx slope_source;  ///< -delta_psi(x, t) * (Psi'(+0) - Psi'(-0))

  cplx total() const { return initial + hamiltonian + value_source + slope_source; }
  /// Terms through O(sqrt t); the O(t) Hamiltonian term is the first dropped order
  /// at the discontinuity (it jumps wherever H Psi does).
  cplx retained() const { return initial + value_source + slope_source; }
};

/// Terms at x != 0.
ShortTimeTerms short_time_terms(const PiecewiseState& state, double x, double t);
/// One-sided limit at x = 0.
ShortTimeTerms short_time_terms(const PiecewiseState& state, Side side, double t);
/// x-derivative of the retained terms, one-sided at x = 0.
cplx short_time_slope(const PiecewiseState& state, Side side, double t);

struct ShortTimeField {
  std::vector<double> x;
  std::vector<ShortTimeTerms> terms;
  double time = 0.0;
  std::string order_dropped;
  bool long_time_warning = false;  ///< t/t0 > 0.1
};

/// Reconstruction on the given positions (none may be 0). Throws std::domain_error for t <= 0.
ShortTimeField short_time_state(const PiecewiseState& state, double t, const std::vector<double>& x);

/// Both one-sided limits of the retained field at x = 0 and the predicted
/// common value (Psi(+0) + Psi(-0))/2 - delta_psi(0, t) dPsi'.
struct EdgeLimits {
  cplx minus, plus, predicted;
};
EdgeLimits edge_limits(const PiecewiseState& state, double t);

/// int_0^b |Psi(x, t)|^2 of the full short-time field, by adaptive quadrature.
double p_right_expansion(const PiecewiseState& state, double t, double quad_tol = 1e-12);

struct CurrentLaw {
  CaseLabel case_label = CaseLabel::A;
  double exponent = 0.0;
  double prefactor = 0.0;
  bool marginal = false;

  double at(double t) const;
};

/// Leading short-time current J = dP^R/dt ~ prefactor * t^exponent.
///   A: Im[Psi*(0) Psi'(0)]/M                                   t^0
///   B: {|Psi(-0)|^2 - |Psi(+0)|^2 + 2 Im[Psi*(-0) Psi(+0)]}/(4 sqrt(pi M))   t^-1/2
///   C: Im{Psi*(0) [Psi'(+0) + Psi'(-0)]}/(2M)                    t^0
///   D: {[|Psi'(-0)|^2 - |Psi'(+0)|^2]/4 - Im[Psi'*(-0) Psi'(+0)]/2}/sqrt(pi M^3)   t^1/2
/// The cross terms equal |.||.| sin(dphi) with dphi the phase step across 0.
CurrentLaw current_law(const PiecewiseState& state, double eps_val = 1e-8, double eps_deriv = 1e-8);
CurrentLaw current_law(const PiecewiseState& state, const JumpDescriptor& jump);

/// Thrown by fit_power_law when the currents change sign or vanish.
class SignChangeError : public std::runtime_error {
 public:
  SignChangeError(const std::string& what, std::size_t index) : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;  ///< signed, carries the sign of J
  double residual = 0.0;   ///< RMS of the log-log fit
};

/// Least squares of log|J| = exponent log t + log|prefactor|. Needs >= 5 samples,
/// all t > 0 and all J of one sign.
PowerLawFit fit_power_law(const std::vector<double>& times, const std::vector<double>& currents);

struct LeadingFit {
  double leading = 0.0;     ///< C in J = C t^p + D t^{p+1/2}
  double subleading = 0.0;  ///< D
};

/// Least squares of J = C t^p + D t^{p + 1/2} with p fixed.
LeadingFit fit_leading_coefficient(const std::vector<double>& times, const std::vector<double>& currents,
                                   double exponent);

}  // namespace discoflux
