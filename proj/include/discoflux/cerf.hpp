#pragma once

#include <complex>
#include <numbers>

namespace discoflux {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Branch convention shared by every module: sqrt(i t) = e^{i pi/4} sqrt(t) and
// sqrt(1/i) = e^{-i pi/4} for t > 0. Nothing else in the library takes a
// square root of a complex phase.
inline const cplx sqrt_i{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
inline const cplx sqrt_inv_i{std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};

/// sqrt(i t) on the shared branch, t >= 0.
inline cplx sqrt_it(double t) { return sqrt_i * std::sqrt(t); }

/// Set when a result saturated because e^{-z^2} overflowed.
struct CerfStatus {
  bool overflow = false;
};

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz).
///
/// Taylor series inside a small ellipse around the origin and the Gautschi
/// form of the Laplace continued fraction elsewhere, evaluated in the first
/// quadrant and mapped to the others by symmetry. The lower half-plane uses
/// w(z) = 2 e^{-z^2} - w(-z); when that exponential overflows the result
/// saturates to the largest finite double (with the correct phase) and
/// status.overflow is set.
cplx faddeeva(cplx z, CerfStatus& status);
cplx faddeeva(cplx z);

/// Complementary error function for complex argument.
cplx erfc_complex(cplx z, CerfStatus& status);
cplx erfc_complex(cplx z);

}  // namespace discoflux
