#include "discoflux/source_wave.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "discoflux/quadrature.hpp"

namespace discoflux {

MassTime::MassTime(double mass, double time) : mass_(mass), time_(time) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::domain_error("mass must be positive and finite");
  if (!(time > 0.0) || !std::isfinite(time)) throw std::domain_error("time must be positive and finite");
}

double MassTime::length() const { return std::sqrt(time_ / mass_); }

namespace {

// |x| sqrt(M/2t) e^{-i pi/4}: the erfc argument of the source wave.
cplx erfc_argument(double x, const MassTime& mt) {
  return std::abs(x) * std::sqrt(mt.mass() / (2.0 * mt.time())) * sqrt_inv_i;
}

cplx chirp(double x, const MassTime& mt) {
  const double phase = mt.mass() * x * x / (2.0 * mt.time());
  return {std::cos(phase), std::sin(phase)};
}

// Coefficients of the large-x expansions (x > 0)
//   delta_psi  = e^{i beta x^2} sum_{n>=1} d_n x^{-2n}
//   delta_psi' = e^{i beta x^2} sum_{n>=0} e_n x^{-2n-1}
// with beta = M/2t, obtained from erfc(z) ~ e^{-z^2}/(sqrt(pi) z) sum (-1)^n (2n-1)!!/(2z^2)^n.
struct TailSeries {
  std::vector<cplx> d;  // d[0] unused (zero)
  std::vector<cplx> e;
};

TailSeries tail_series(const MassTime& mt, double cutoff) {
  const double beta = mt.mass() / (2.0 * mt.time());
  const cplx step = cplx{0.0, 1.0} / (2.0 * beta);  // i/(2 beta)
  const cplx p_d = sqrt_i * std::sqrt(mt.time() / (2.0 * pi * mt.mass()));
  const cplx p_e = 0.5 * sqrt_i / std::sqrt(pi * beta);

  TailSeries s;
  s.d.push_back(0.0);
  cplx factor = 1.0;  // (-1)^n (2n-1)!! (i/2beta)^n
  s.e.push_back(p_e);
  const double x2 = cutoff * cutoff;
  for (int n = 1; n < 40; ++n) {
    factor *= -static_cast<double>(2 * n - 1) * step;
    const double shrink = std::abs(factor) / std::pow(x2, n);
    s.d.push_back(p_d * factor);
    s.e.push_back(p_e * factor);
    if (shrink < 1e-18) break;
    // Stop before the asymptotic series turns around.
    if ((2 * n + 1) / (2.0 * beta * x2) > 0.5) break;
  }
  return s;
}

// int_c^inf e^{i beta x^2} x^{-m} dx for m >= 0, by repeated integration by parts.
cplx oscillatory_tail(double m, double beta, double c) {
  const double c2 = c * c;
  const cplx head = -std::exp(cplx{0.0, beta * c2}) / (cplx{0.0, 2.0 * beta} * std::pow(c, m + 1.0));
  const cplx ratio_base = 1.0 / cplx{0.0, 2.0 * beta * c2};
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int l = 0; l < 200; ++l) {
    const cplx next = term * (m + 1.0 + 2.0 * l) * ratio_base;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return head * sum;
}

struct Tail {
  cplx value;
  double error;
};

Tail analytic_tail(MomentWeight weight, const MassTime& mt, double c) {
  const TailSeries s = tail_series(mt, c);
  const double beta = mt.mass() / (2.0 * mt.time());
  const int nd = static_cast<int>(s.d.size());
  const int ne = static_cast<int>(s.e.size());
  cplx sum = 0.0;
  cplx last = 0.0;
  switch (weight) {
    case MomentWeight::one:
      for (int n = 1; n < nd; ++n) sum += last = s.d[n] * oscillatory_tail(2.0 * n, beta, c);
      break;
    case MomentWeight::x:
      for (int n = 1; n < nd; ++n) sum += last = s.d[n] * oscillatory_tail(2.0 * n - 1.0, beta, c);
      break;
    case MomentWeight::prime:
      for (int n = 0; n < ne; ++n) sum += last = s.e[n] * oscillatory_tail(2.0 * n + 1.0, beta, c);
      break;
    case MomentWeight::x_prime:
      for (int n = 0; n < ne; ++n) sum += last = s.e[n] * oscillatory_tail(2.0 * n, beta, c);
      break;
    case MomentWeight::abs2:
      for (int n = 1; n < nd; ++n) {
        for (int m = 1; m < nd; ++m) {
          const double p = 2.0 * (n + m);
          sum += last = s.d[n] * std::conj(s.d[m]) * std::pow(c, 1.0 - p) / (p - 1.0);
        }
      }
      break;
    case MomentWeight::abs2_prime:
      for (int n = 0; n < ne; ++n) {
        for (int m = 0; m < ne; ++m) {
          const double p = 2.0 * (n + m) + 2.0;
          sum += last = s.e[n] * std::conj(s.e[m]) * std::pow(c, 1.0 - p) / (p - 1.0);
        }
      }
      break;
  }
  return {sum, std::abs(last)};
}

}  // namespace

cplx delta_psi(double x, const MassTime& mt) {
  const cplx point = -sqrt_it(mt.time()) / std::sqrt(2.0 * mt.mass() * pi);
  return point * chirp(x, mt) + 0.5 * std::abs(x) * erfc_complex(erfc_argument(x, mt));
}

cplx delta_psi_prime(double x, const MassTime& mt) {
  if (x == 0.0) throw std::domain_error("delta_psi_prime is two-valued at x = 0; pass a Side");
  const double sign = x > 0.0 ? 1.0 : -1.0;
  return 0.5 * sign * erfc_complex(erfc_argument(x, mt));
}

cplx delta_psi_prime(Side side) { return side == Side::plus ? 0.5 : -0.5; }

cplx delta_psi_second(double x, const MassTime& mt) {
  return -std::sqrt(mt.mass() / (2.0 * pi * mt.time())) * sqrt_inv_i * chirp(x, mt);
}

cplx delta_psi_far_field(double x, const MassTime& mt) {
  if (x == 0.0) throw std::domain_error("far field undefined at x = 0");
  const double scale = std::pow(mt.time() / mt.mass(), 1.5) / (std::sqrt(2.0 * pi) * x * x);
  return sqrt_inv_i * scale * chirp(x, mt);
}

MomentSet moments(const MassTime& mt) {
  const double m = mt.mass();
  const double t = mt.time();
  const cplx i{0.0, 1.0};
  MomentSet s;
  s.int_dpsi = t / (4.0 * m * i);
  s.int_x_dpsi_prime = -t / (4.0 * m * i);
  s.int_abs2_dpsi = std::pow(t, 1.5) / (6.0 * std::sqrt(pi * m * m * m));
  s.int_x_dpsi = sqrt_inv_i * std::pow(t, 1.5) / (3.0 * std::sqrt(2.0 * pi * m * m * m));
  s.int_abs2_dpsi_prime = 0.5 * std::sqrt(t / (pi * m));
  s.int_dpsi_prime = sqrt_it(t) / std::sqrt(2.0 * pi * m);
  return s;
}

std::string_view to_string(MomentWeight w) {
  switch (w) {
    case MomentWeight::one: return "int_dpsi";
    case MomentWeight::x: return "int_x_dpsi";
    case MomentWeight::abs2: return "int_abs2_dpsi";
    case MomentWeight::x_prime: return "int_x_dpsi_prime";
    case MomentWeight::abs2_prime: return "int_abs2_dpsi_prime";
    case MomentWeight::prime: return "int_dpsi_prime";
  }
  return "?";
}

MomentWeight moment_weight_from_string(std::string_view name) {
  for (auto w : {MomentWeight::one, MomentWeight::x, MomentWeight::abs2, MomentWeight::x_prime,
                 MomentWeight::abs2_prime, MomentWeight::prime}) {
    if (to_string(w) == name) return w;
  }
  if (name == "one") return MomentWeight::one;
  if (name == "x") return MomentWeight::x;
  if (name == "abs2") return MomentWeight::abs2;
  if (name == "x_prime") return MomentWeight::x_prime;
  if (name == "abs2_prime") return MomentWeight::abs2_prime;
  if (name == "prime") return MomentWeight::prime;
  throw std::invalid_argument("unknown moment weight: " + std::string(name));
}

MomentQuadrature quad_moment(MomentWeight weight, const MassTime& mt, double cutoff, double tol) {
  const double ell = mt.length();
  if (!(cutoff >= 20.0 * ell * (1.0 - 1e-12))) {
    throw std::domain_error("quad_moment: cutoff must be at least 20 sqrt(t/M)");
  }
  if (!(tol >= 1e-12 && tol <= 1e-4)) throw std::domain_error("quad_moment: tol must lie in [1e-12, 1e-4]");

  auto integrand = [&](double x) -> cplx {
    switch (weight) {
      case MomentWeight::one: return delta_psi(x, mt);
      case MomentWeight::x: return x * delta_psi(x, mt);
      case MomentWeight::abs2: return std::norm(delta_psi(x, mt));
      case MomentWeight::x_prime: return x * delta_psi_prime(x, mt);
      case MomentWeight::abs2_prime: return std::norm(delta_psi_prime(x, mt));
      case MomentWeight::prime: return delta_psi_prime(x, mt);
    }
    return 0.0;
  };

  const double wavelength = std::sqrt(2.0 * pi * mt.time() / mt.mass());
  QuadratureOptions options;
  options.abs_tol = 0.5 * tol;
  options.max_panels = 400000;
  options.max_width = [=](double x) { return 0.25 * wavelength / (x / ell + 1.0); };

  const auto body = integrate<cplx>(integrand, 0.0, cutoff, options);
  const Tail tail = analytic_tail(weight, mt, cutoff);
  if (tail.error > 0.5 * tol) {
    throw QuadratureError("quad_moment: tail series not converged at this cutoff", tail.error);
  }
  MomentQuadrature result;
  result.value = body.value + tail.value;
  result.error = body.error + tail.error;
  result.tail = tail.value;
  result.evaluations = body.evaluations;
  return result;
}

MomentQuadrature quad_moment(MomentWeight weight, const MassTime& mt, double tol) {
  return quad_moment(weight, mt, 30.0 * mt.length(), tol);
}

}  // namespace discoflux
