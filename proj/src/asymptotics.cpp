#include "discoflux/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "discoflux/quadrature.hpp"

namespace discoflux {
namespace {

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("short-time expansion needs t > 0");
}

}  // namespace

ShortTimeTerms short_time_terms(const PiecewiseState& state, double x, double t) {
  check_time(t);
  if (x == 0.0) throw std::domain_error("short_time_terms: pass a Side at x = 0");
  const MassTime mt(state.domain().mass(), t);
  const BoundaryData& bd = state.boundary();
  const cplx i{0.0, 1.0};
  ShortTimeTerms s;
  s.initial = state(x);
  s.hamiltonian = i * t * state.second_derivative(x) / (2.0 * mt.mass());
  s.value_source = -delta_psi_prime(x, mt) * (bd.psi_plus - bd.psi_minus);
  s.slope_source = -delta_psi(x, mt) * (bd.dpsi_plus - bd.dpsi_minus);
  return s;
}

ShortTimeTerms short_time_terms(const PiecewiseState& state, Side side, double t) {
  check_time(t);
  const MassTime mt(state.domain().mass(), t);
  const BoundaryData& bd = state.boundary();
  const bool plus = side == Side::plus;
  const cplx i{0.0, 1.0};
  const cplx second = plus ? state.right().second(0.0) : state.left().second(0.0);
  ShortTimeTerms s;
  s.initial = plus ? bd.psi_plus : bd.psi_minus;
  s.hamiltonian = i * t * second / (2.0 * mt.mass());
  s.value_source = -delta_psi_prime(side) * (bd.psi_plus - bd.psi_minus);
  s.slope_source = -delta_psi(0.0, mt) * (bd.dpsi_plus - bd.dpsi_minus);
  return s;
}

cplx short_time_slope(const PiecewiseState& state, Side side, double t) {
  check_time(t);
  const MassTime mt(state.domain().mass(), t);
  const BoundaryData& bd = state.boundary();
  const cplx slope = side == Side::plus ? bd.dpsi_plus : bd.dpsi_minus;
  return slope - delta_psi_second(0.0, mt) * (bd.psi_plus - bd.psi_minus) -
         delta_psi_prime(side) * (bd.dpsi_plus - bd.dpsi_minus);
}

ShortTimeField short_time_state(const PiecewiseState& state, double t, const std::vector<double>& x) {
  check_time(t);
  ShortTimeField f;
  f.x = x;
  f.time = t;
  f.terms.reserve(x.size());
  for (double xi : x) f.terms.push_back(short_time_terms(state, xi, t));
  f.order_dropped =
      "O(t): Hamiltonian term kept separately (discontinuous at x = 0 when H Psi jumps); "
      "O(t^{3/2}) source corrections and potential effects dropped";
  f.long_time_warning = t / state.t0() > 0.1;
  return f;
}

EdgeLimits edge_limits(const PiecewiseState& state, double t) {
  const MassTime mt(state.domain().mass(), t);
  const BoundaryData& bd = state.boundary();
  EdgeLimits e;
  e.minus = short_time_terms(state, Side::minus, t).retained();
  e.plus = short_time_terms(state, Side::plus, t).retained();
  e.predicted = 0.5 * (bd.psi_plus + bd.psi_minus) - delta_psi(0.0, mt) * (bd.dpsi_plus - bd.dpsi_minus);
  return e;
}

double p_right_expansion(const PiecewiseState& state, double t, double quad_tol) {
  check_time(t);
  const double b = state.domain().b();
  const double ell = std::sqrt(t / state.domain().mass());
  const double wavelength = std::sqrt(2.0 * pi) * ell;
  QuadratureOptions options;
  options.abs_tol = quad_tol;
  options.max_panels = 4000000;
  options.max_width = [=](double x) { return std::min(b / 64.0, 0.25 * wavelength / (x / ell + 1.0)); };
  auto integrand = [&](double x) { return std::norm(short_time_terms(state, x, t).total()); };
  return integrate<double>(integrand, 0.0, b, options).value;
}

double CurrentLaw::at(double t) const { return prefactor * std::pow(t, exponent); }

CurrentLaw current_law(const PiecewiseState& state, double eps_val, double eps_deriv) {
  return current_law(state, classify(state, eps_val, eps_deriv));
}

CurrentLaw current_law(const PiecewiseState& state, const JumpDescriptor& jump) {
  const BoundaryData& bd = state.boundary();
  const double m = state.domain().mass();
  CurrentLaw law;
  law.case_label = jump.case_label;
  double scale = 1.0;
  switch (jump.case_label) {
    case CaseLabel::A:
      law.exponent = 0.0;
      law.prefactor = std::imag(std::conj(bd.psi_minus) * bd.dpsi_minus) / m;
      scale = jump.value_scale * jump.slope_scale / m;
      break;
    case CaseLabel::B:
      law.exponent = -0.5;
      law.prefactor = (std::norm(bd.psi_minus) - std::norm(bd.psi_plus) +
                       2.0 * std::imag(std::conj(bd.psi_minus) * bd.psi_plus)) /
                      (4.0 * std::sqrt(pi * m));
      scale = jump.value_scale * jump.value_scale / std::sqrt(m);
      break;
    case CaseLabel::C:
      law.exponent = 0.0;
      law.prefactor = std::imag(std::conj(bd.psi_minus) * (bd.dpsi_plus + bd.dpsi_minus)) / (2.0 * m);
      scale = jump.value_scale * jump.slope_scale / m;
      break;
    case CaseLabel::D:
      law.exponent = 0.5;
      law.prefactor = (0.25 * (std::norm(bd.dpsi_minus) - std::norm(bd.dpsi_plus)) -
                       0.5 * std::imag(std::conj(bd.dpsi_minus) * bd.dpsi_plus)) /
                      std::sqrt(pi * m * m * m);
      scale = jump.slope_scale * jump.slope_scale / std::sqrt(m * m * m);
      break;
  }
  law.marginal = jump.marginal || std::abs(law.prefactor) < 1e-10 * scale;
  return law;
}

PowerLawFit fit_power_law(const std::vector<double>& times, const std::vector<double>& currents) {
  const std::size_t n = times.size();
  if (currents.size() != n) throw std::invalid_argument("fit_power_law: size mismatch");
  if (n < 5) throw std::invalid_argument("fit_power_law: need at least 5 samples");
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("fit_power_law: times must be positive");
  }
  if (currents[0] == 0.0) throw SignChangeError("fit_power_law: zero current at index 0", 0);
  const bool positive = currents[0] > 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (currents[i] == 0.0 || (currents[i] > 0.0) != positive) {
      throw SignChangeError("fit_power_law: current changes sign or vanishes at index " + std::to_string(i), i);
    }
  }
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = std::log(times[i]);
    A(i, 1) = 1.0;
    y[i] = std::log(std::abs(currents[i]));
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  PowerLawFit fit;
  fit.exponent = c[0];
  fit.prefactor = (positive ? 1.0 : -1.0) * std::exp(c[1]);
  fit.residual = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

LeadingFit fit_leading_coefficient(const std::vector<double>& times, const std::vector<double>& currents,
                                   double exponent) {
  const std::size_t n = times.size();
  if (currents.size() != n || n < 2) throw std::invalid_argument("fit_leading_coefficient: need matched samples");
  // Fit J/t^p = C + D sqrt(t) so every decade of t carries similar weight.
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double base = std::pow(times[i], exponent);
    A(i, 0) = 1.0;
    A(i, 1) = std::sqrt(times[i]);
    y[i] = currents[i] / base;
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  return {c[0], c[1]};
}

}  // namespace discoflux
