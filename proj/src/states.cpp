#include "discoflux/states.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "discoflux/quadrature.hpp"
#include "discoflux/tridiagonal.hpp"

namespace discoflux {
namespace {

constexpr double wall_tolerance = 1e-12;

double integrate_abs2(const std::function<cplx(double)>& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  QuadratureOptions options;
  options.abs_tol = 1e-14;
  options.rel_tol = 1e-13;
  const double width = (hi - lo) / 64.0;
  options.max_width = [width](double) { return width; };
  return integrate<double>([&](double x) { return std::norm(f(x)); }, lo, hi, options).value;
}

double wrap_angle(double phase) {
  double r = std::remainder(phase, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

SideFunction scale_side(const SideFunction& s, cplx factor) {
  return {[f = s.value, factor](double x) { return factor * f(x); },
          [f = s.first, factor](double x) { return factor * f(x); },
          [f = s.second, factor](double x) { return factor * f(x); }};
}

// Natural cubic spline through complex samples; evaluation extrapolates the
// end cubics beyond the knot range.
class ComplexSpline {
 public:
  ComplexSpline(std::vector<double> x, std::vector<cplx> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3) throw std::invalid_argument("spline needs at least 3 samples per side");
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline samples must be strictly increasing");
    }
    m_.assign(n, cplx{0.0});
    if (n == 3) {
      // One interior equation.
      const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
      m_[1] = 6.0 * ((y_[2] - y_[1]) / h1 - (y_[1] - y_[0]) / h0) / (2.0 * (h0 + h1));
      return;
    }
    const Eigen::Index k = static_cast<Eigen::Index>(n) - 2;
    Eigen::VectorXcd sub(k - 1), diag(k), sup(k - 1), rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const std::size_t i = static_cast<std::size_t>(j) + 1;
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      diag[j] = 2.0 * (h0 + h1);
      if (j + 1 < k) sup[j] = h1;
      if (j > 0) sub[j - 1] = h0;
      rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    const Eigen::VectorXcd m = thomas_solve<cplx>(sub, diag, sup, rhs);
    for (Eigen::Index j = 0; j < k; ++j) m_[static_cast<std::size_t>(j) + 1] = m[j];
  }

  // derivative order 0, 1 or 2
  cplx eval(double x, int order) const {
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1);
    const double h = x_[i] - x_[i - 1];
    const double a = (x_[i] - x) / h;
    const double b = (x - x_[i - 1]) / h;
    const cplx y0 = y_[i - 1], y1 = y_[i], m0 = m_[i - 1], m1 = m_[i];
    switch (order) {
      case 0:
        return a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * (h * h / 6.0);
      case 1:
        return (y1 - y0) / h + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * (h / 6.0);
      default:
        return a * m0 + b * m1;
    }
  }

 private:
  std::vector<double> x_;
  std::vector<cplx> y_;
  std::vector<cplx> m_;
};

SideFunction spline_side(std::shared_ptr<const ComplexSpline> s) {
  return {[s](double x) { return s->eval(x, 0); }, [s](double x) { return s->eval(x, 1); },
          [s](double x) { return s->eval(x, 2); }};
}

}  // namespace

SideFunction SideFunction::zero() {
  auto z = [](double) { return cplx{0.0}; };
  return {z, z, z};
}

PiecewiseState::PiecewiseState(BoxDomain domain, SideFunction left, SideFunction right, BoundaryData boundary,
                               double length_scale, bool marginal)
    : domain_(domain), left_(std::move(left)), right_(std::move(right)), boundary_(boundary),
      length_scale_(length_scale), marginal_(marginal) {
  if (!left_.value || !left_.first || !left_.second || !right_.value || !right_.first || !right_.second) {
    throw std::invalid_argument("piecewise state needs value and two derivatives on each side");
  }
  if (!(length_scale > 0.0)) throw std::invalid_argument("length scale must be positive");
  if (std::abs(left_.value(domain_.a())) > wall_tolerance || std::abs(right_.value(domain_.b())) > wall_tolerance) {
    throw std::invalid_argument("state does not vanish at the box walls");
  }
}

cplx PiecewiseState::operator()(double x) const {
  if (x == 0.0) throw std::domain_error("state is two-valued at x = 0; use boundary()");
  return x < 0.0 ? left_.value(x) : right_.value(x);
}

cplx PiecewiseState::derivative(double x) const {
  if (x == 0.0) throw std::domain_error("state is two-valued at x = 0; use boundary()");
  return x < 0.0 ? left_.first(x) : right_.first(x);
}

cplx PiecewiseState::second_derivative(double x) const {
  if (x == 0.0) throw std::domain_error("state is two-valued at x = 0; use boundary()");
  return x < 0.0 ? left_.second(x) : right_.second(x);
}

double PiecewiseState::norm() const {
  return integrate_abs2(left_.value, domain_.a(), 0.0) + norm_right();
}

double PiecewiseState::norm_right() const { return integrate_abs2(right_.value, 0.0, domain_.b()); }

PiecewiseState PiecewiseState::scaled(cplx factor) const {
  BoundaryData bd{factor * boundary_.psi_minus, factor * boundary_.psi_plus, factor * boundary_.dpsi_minus,
                  factor * boundary_.dpsi_plus};
  return PiecewiseState(domain_, scale_side(left_, factor), scale_side(right_, factor), bd, length_scale_,
                        marginal_);
}

PiecewiseState PiecewiseState::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw std::domain_error("cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(n));
}

PiecewiseState PiecewiseState::with_right_phase(double phase) const {
  const cplx f = std::polar(1.0, phase);
  BoundaryData bd = boundary_;
  bd.psi_plus *= f;
  bd.dpsi_plus *= f;
  return PiecewiseState(domain_, left_, scale_side(right_, f), bd, length_scale_, marginal_);
}

Eigen::VectorXcd PiecewiseState::sample(const Grid1D& grid) const {
  const BoxDomain& g = grid.domain();
  if (std::abs(g.a() - domain_.a()) > 1e-12 || std::abs(g.b() - domain_.b()) > 1e-12 ||
      std::abs(g.mass() - domain_.mass()) > 1e-12 * domain_.mass()) {
    throw std::invalid_argument("grid and state live on different domains");
  }
  Eigen::VectorXcd psi(grid.n_cells());
  for (int i = 0; i < grid.n_cells(); ++i) psi[i] = (*this)(grid.x(i));
  return psi;
}

char to_char(CaseLabel c) {
  switch (c) {
    case CaseLabel::A: return 'A';
    case CaseLabel::B: return 'B';
    case CaseLabel::C: return 'C';
    case CaseLabel::D: return 'D';
  }
  return '?';
}

JumpDescriptor classify(const PiecewiseState& state, double eps_val, double eps_deriv) {
  if (!(eps_val > 0.0) || !(eps_deriv > 0.0)) throw std::invalid_argument("classify thresholds must be positive");
  const BoundaryData& bd = state.boundary();
  const double length = state.domain().length();
  const double root_norm = std::sqrt(state.norm());

  JumpDescriptor j;
  j.value_scale = root_norm / std::sqrt(length);
  j.slope_scale = root_norm / std::pow(length, 1.5);
  j.d_psi = bd.psi_plus - bd.psi_minus;
  j.d_dpsi = bd.dpsi_plus - bd.dpsi_minus;
  const double tv = eps_val * j.value_scale;
  const double td = eps_deriv * j.slope_scale;
  if (std::abs(bd.psi_minus) > tv && std::abs(bd.psi_plus) > tv) {
    j.d_phi1 = wrap_angle(std::arg(bd.psi_plus) - std::arg(bd.psi_minus));
  }
  if (std::abs(bd.dpsi_minus) > td && std::abs(bd.dpsi_plus) > td) {
    j.d_phi2 = wrap_angle(std::arg(bd.dpsi_plus) - std::arg(bd.dpsi_minus));
  }

  const double jump = std::abs(j.d_psi);
  const double kink = std::abs(j.d_dpsi);
  const double value0 = std::abs(bd.psi_minus);
  if (jump > tv) {
    j.case_label = CaseLabel::B;
  } else if (kink > td && value0 > tv) {
    j.case_label = CaseLabel::C;
  } else if (kink > td) {
    j.case_label = CaseLabel::D;
  } else {
    j.case_label = CaseLabel::A;
  }
  // Within three decades of a threshold the label is fragile.
  auto near = [](double v, double t) { return v > 0.0 && v > t * 1e-3 && v < t * 1e3; };
  j.marginal = state.marginal() || near(jump, tv) || near(kink, td) ||
               (j.case_label != CaseLabel::B && near(value0, tv));
  return j;
}

PiecewiseState truncated_well(double x0, double fraction, const BoxDomain& domain) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("truncated_well: fraction must lie in (0, 1)");
  if (!(x0 > 0.0)) throw std::invalid_argument("truncated_well: x0 must be positive");
  const double left_wall = -fraction * x0;
  if (domain.a() > left_wall + 1e-12) throw std::invalid_argument("truncated_well: domain does not contain the well");
  const double amp = std::sqrt(2.0 / x0);
  const double k = pi / x0;
  auto inside = [left_wall](double x) { return x >= left_wall; };
  SideFunction left{
      [=](double x) { return inside(x) ? cplx{amp * std::sin(k * (x - left_wall))} : cplx{0.0}; },
      [=](double x) { return inside(x) ? cplx{amp * k * std::cos(k * (x - left_wall))} : cplx{0.0}; },
      [=](double x) { return inside(x) ? cplx{-amp * k * k * std::sin(k * (x - left_wall))} : cplx{0.0}; }};
  BoundaryData bd;
  bd.psi_minus = amp * std::sin(pi * fraction);
  bd.dpsi_minus = amp * k * std::cos(pi * fraction);
  const bool marginal = std::abs(std::sin(pi * fraction)) < 1e-6;
  return PiecewiseState(domain, left, SideFunction::zero(), bd, x0, marginal);
}

PiecewiseState wall_removed(double x0, const BoxDomain& domain) {
  if (!(x0 > 0.0)) throw std::invalid_argument("wall_removed: x0 must be positive");
  if (domain.a() > -x0 + 1e-12) throw std::invalid_argument("wall_removed: domain does not contain the well");
  const double amp = std::sqrt(2.0 / x0);
  const double k = pi / x0;
  auto inside = [x0](double x) { return x >= -x0; };
  SideFunction left{
      [=](double x) { return inside(x) ? cplx{amp * std::sin(k * (x + x0))} : cplx{0.0}; },
      [=](double x) { return inside(x) ? cplx{amp * k * std::cos(k * (x + x0))} : cplx{0.0}; },
      [=](double x) { return inside(x) ? cplx{-amp * k * k * std::sin(k * (x + x0))} : cplx{0.0}; }};
  BoundaryData bd;
  bd.psi_minus = 0.0;  // exact; sin(pi) in floating point is 1.2e-16
  bd.dpsi_minus = -amp * k;
  return PiecewiseState(domain, left, SideFunction::zero(), bd, x0);
}

PiecewiseState kink_state(double k_left, double k_right, cplx value0, const BoxDomain& domain, double momentum) {
  const double a = domain.a();
  const double b = domain.b();
  const double sl = std::sin(k_left * (-a));
  const double sr = std::sin(k_right * b);
  if (std::abs(sl) < 1e-8 || std::abs(sr) < 1e-8) throw std::invalid_argument("kink_state: node at a wall");
  if (std::abs(value0) == 0.0) throw std::invalid_argument("kink_state: value0 must be nonzero");
  const double q = momentum;
  const cplx iq{0.0, q};

  // s(x) e^{iqx} with s a real sine profile.
  auto make = [q, iq, value0](std::function<double(double)> s, std::function<double(double)> s1,
                              std::function<double(double)> s2) {
    return SideFunction{
        [=](double x) { return value0 * s(x) * std::polar(1.0, q * x); },
        [=](double x) { return value0 * (s1(x) + iq * s(x)) * std::polar(1.0, q * x); },
        [=](double x) { return value0 * (s2(x) + 2.0 * iq * s1(x) - q * q * s(x)) * std::polar(1.0, q * x); }};
  };
  const double kl = k_left, kr = k_right;
  SideFunction left = make([=](double x) { return std::sin(kl * (x - a)) / sl; },
                           [=](double x) { return kl * std::cos(kl * (x - a)) / sl; },
                           [=](double x) { return -kl * kl * std::sin(kl * (x - a)) / sl; });
  SideFunction right = make([=](double x) { return std::sin(kr * (b - x)) / sr; },
                            [=](double x) { return -kr * std::cos(kr * (b - x)) / sr; },
                            [=](double x) { return -kr * kr * std::sin(kr * (b - x)) / sr; });
  BoundaryData bd;
  bd.psi_minus = value0;
  bd.psi_plus = value0;
  bd.dpsi_minus = value0 * (kl * std::cos(kl * (-a)) / sl + iq);
  bd.dpsi_plus = value0 * (-kr * std::cos(kr * b) / sr + iq);
  PiecewiseState raw(domain, left, right, bd, domain.length());
  return raw.normalized();
}

PiecewiseState phase_jump_state(double dphi, const PiecewiseState& profile) {
  const BoundaryData& bd = profile.boundary();
  const double m = std::abs(bd.psi_minus);
  const double p = std::abs(bd.psi_plus);
  if (!(m > 1e-12)) throw std::invalid_argument("phase_jump_state: profile vanishes at x = 0");
  if (std::abs(m - p) > 1e-8 * m) throw std::invalid_argument("phase_jump_state: profile modulus is discontinuous");
  return profile.with_right_phase(dphi);
}

PiecewiseState box_ground_state(const BoxDomain& domain) {
  const double a = domain.a();
  const double length = domain.length();
  const double amp = std::sqrt(2.0 / length);
  const double k = pi / length;
  SideFunction s{[=](double x) { return cplx{amp * std::sin(k * (x - a))}; },
                 [=](double x) { return cplx{amp * k * std::cos(k * (x - a))}; },
                 [=](double x) { return cplx{-amp * k * k * std::sin(k * (x - a))}; }};
  BoundaryData bd;
  bd.psi_minus = bd.psi_plus = amp * std::sin(k * (-a));
  bd.dpsi_minus = bd.dpsi_plus = amp * k * std::cos(k * (-a));
  // Exact zeros at the walls (sin(pi) is not).
  SideFunction left = s, right = s;
  const double b = domain.b();
  left.value = [=](double x) { return x == a ? cplx{0.0} : s.value(x); };
  right.value = [=](double x) { return x == b ? cplx{0.0} : s.value(x); };
  return PiecewiseState(domain, left, right, bd, length);
}

PiecewiseState gaussian_state(double center, double width, double k0, const BoxDomain& domain) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_state: width must be positive");
  const double amp = std::pow(2.0 * pi * width * width, -0.25);
  const double s2 = 2.0 * width * width;
  auto g = [=](double x) {
    const double u = x - center;
    return amp * std::exp(cplx{-u * u / (2.0 * s2), k0 * x});
  };
  auto slope = [=](double x) { return cplx{-(x - center) / s2, k0}; };
  SideFunction s{g, [=](double x) { return g(x) * slope(x); },
                 [=](double x) { return g(x) * (slope(x) * slope(x) - 1.0 / s2); }};
  BoundaryData bd;
  bd.psi_minus = bd.psi_plus = g(0.0);
  bd.dpsi_minus = bd.dpsi_plus = g(0.0) * slope(0.0);
  return PiecewiseState(domain, s, s, bd, width);
}

PiecewiseState sampled_state(const std::vector<double>& x, const std::vector<cplx>& psi, const BoxDomain& domain,
                             double length_scale) {
  if (x.size() != psi.size()) throw std::invalid_argument("sampled_state: x and psi differ in length");
  std::vector<double> lx{domain.a()}, rx;
  std::vector<cplx> lv{0.0}, rv;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < domain.a() || x[i] > domain.b()) throw std::invalid_argument("sampled_state: sample outside box");
    if (x[i] == 0.0) throw std::invalid_argument("sampled_state: no sample may sit on x = 0");
    if (x[i] < 0.0) {
      if (x[i] == domain.a()) continue;
      lx.push_back(x[i]);
      lv.push_back(psi[i]);
    } else {
      if (x[i] == domain.b()) continue;
      rx.push_back(x[i]);
      rv.push_back(psi[i]);
    }
  }
  rx.push_back(domain.b());
  rv.push_back(0.0);
  auto left = std::make_shared<const ComplexSpline>(lx, lv);
  auto right = std::make_shared<const ComplexSpline>(rx, rv);
  BoundaryData bd;
  bd.psi_minus = left->eval(0.0, 0);
  bd.dpsi_minus = left->eval(0.0, 1);
  bd.psi_plus = right->eval(0.0, 0);
  bd.dpsi_plus = right->eval(0.0, 1);
  return PiecewiseState(domain, spline_side(left), spline_side(right), bd, length_scale);
}

}  // namespace discoflux
