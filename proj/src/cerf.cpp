#include "discoflux/cerf.hpp"

#include <cmath>
#include <limits>

namespace discoflux {
namespace {

constexpr double two_over_sqrt_pi = 1.12837916709551257390;
constexpr double exp_limit = 709.0;

// Saturated stand-in for e^{arg} * (cos phase, sin phase) when Re(arg) is too large.
cplx saturated(double phase) {
  const double big = std::numeric_limits<double>::max();
  return {big * std::cos(phase), big * std::sin(phase)};
}

// w(z) for x >= 0, y >= 0.
cplx faddeeva_first_quadrant(double x, double y) {
  const double xs = x / 6.3;
  const double ys = y / 4.4;
  double qrho = xs * xs + ys * ys;

  const double xquad = x * x - y * y;
  const double yquad = 2.0 * x * y;

  if (qrho < 0.085264) {
    // Taylor series of erf(z)/z in z^2, then w = e^{-z^2} (1 - erf(-iz)) arranged so
    // that no large terms cancel.
    qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -two_over_sqrt_pi * (xsum * y + ysum * x) + 1.0;
    const double v1 = two_over_sqrt_pi * (xsum * x - ysum * y);
    const double daux = std::exp(-xquad);
    const double u2 = daux * std::cos(yquad);
    const double v2 = -daux * std::sin(yquad);
    return {u1 * u2 - v1 * v2, u1 * v2 + v1 * u2};
  }

  double h = 0.0;
  int kapn = 0;
  int nu = 0;
  if (qrho > 1.0) {
    qrho = std::sqrt(qrho);
    nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
  } else {
    qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
    h = 1.88 * qrho;
    kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
    nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
  }
  const double h2 = 2.0 * h;
  const bool use_h = h > 0.0;
  double qlambda = use_h ? std::pow(h2, kapn) : 0.0;

  double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
  for (int n = nu; n >= 0; --n) {
    const double np1 = n + 1.0;
    double tx = y + h + np1 * rx;
    double ty = x - np1 * ry;
    const double c = 0.5 / (tx * tx + ty * ty);
    rx = c * tx;
    ry = c * ty;
    if (use_h && n <= kapn) {
      tx = qlambda + sx;
      sx = rx * tx - ry * sy;
      sy = ry * tx + rx * sy;
      qlambda /= h2;
    }
  }
  if (!use_h) return {two_over_sqrt_pi * rx, two_over_sqrt_pi * ry};
  double u = two_over_sqrt_pi * sx;
  const double v = two_over_sqrt_pi * sy;
  if (y == 0.0) u = std::exp(-x * x);
  return {u, v};
}

}  // namespace

cplx faddeeva(cplx z, CerfStatus& status) {
  const double x = z.real();
  const double y = z.imag();
  const double ax = std::abs(x);
  const double ay = std::abs(y);

  cplx w = faddeeva_first_quadrant(ax, ay);
  if (y >= 0.0) {
    // w(-conj z) = conj(w(z))
    return x < 0.0 ? std::conj(w) : w;
  }

  // Lower half-plane: w(z) = 2 e^{-z^2} - w(-z), with -z in the upper half-plane.
  const double re_arg = ay * ay - ax * ax;
  const double im_arg = -2.0 * ax * ay;
  cplx two_exp;
  if (re_arg > exp_limit) {
    status.overflow = true;
    two_exp = saturated(im_arg);
  } else {
    two_exp = 2.0 * std::exp(re_arg) * cplx{std::cos(im_arg), std::sin(im_arg)};
  }
  // Computed for (|x|, -|y|) = conj of the (|x|, |y|) problem.
  cplx result = two_exp - w;
  if (status.overflow) result = two_exp;
  return x > 0.0 ? std::conj(result) : result;
}

cplx faddeeva(cplx z) {
  CerfStatus status;
  return faddeeva(z, status);
}

cplx erfc_complex(cplx z, CerfStatus& status) {
  if (z.real() < 0.0) {
    // erfc(z) = 2 - erfc(-z) keeps the Faddeeva call in the upper half-plane.
    return 2.0 - erfc_complex(-z, status);
  }
  // Re z >= 0, so iz has Im(iz) >= 0 and w(iz) needs no reflection.
  const double re_arg = z.imag() * z.imag() - z.real() * z.real();
  const double im_arg = -2.0 * z.real() * z.imag();
  const cplx w = faddeeva(cplx{-z.imag(), z.real()}, status);
  if (re_arg > exp_limit) {
    status.overflow = true;
    return saturated(im_arg + std::arg(w));
  }
  return std::exp(cplx{re_arg, im_arg}) * w;
}

cplx erfc_complex(cplx z) {
  CerfStatus status;
  return erfc_complex(z, status);
}

}  // namespace discoflux
