#include <doctest.h>

#include <cmath>
#include <random>

#include "discoflux/cerf.hpp"

using namespace discoflux;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("faddeeva at the origin and on the imaginary axis") {
  CHECK(std::abs(faddeeva(0.0) - 1.0) < 1e-15);
  // e * erfc(1), 30-digit reference
  CHECK(rel(faddeeva(cplx{0.0, 1.0}), 0.427583576155807004410750344491) < 1e-13);
}

TEST_CASE("faddeeva matches 20-digit reference values in all quadrants") {
  struct Ref {
    cplx z, w;
  };
  const Ref refs[] = {
      {{1.0, 1.0}, {0.30474420525691259246, 0.20821893820283162729}},
      {{0.5, 2.0}, {0.24527599022635850786, 0.05152147834363584911}},
      {{3.0, 0.2}, {0.015626770455552116737, 0.19966856321866610402}},
      {{-2.0, 1.5}, {0.15041543887103974762, -0.17037114276247698563}},
      {{2.0, -0.5}, {-0.12293249482276237412, 0.32755513633331258763}},
      {{5.5, 5.5}, {0.051702929133946016624, 0.050856026018576832758}},
      {{0.1, 0.05}, {0.93708996084635639821, 0.10272118383181598742}},
      {{6.0, 8.0}, {0.045230269791286079499, 0.033587115025901686712}},
      {{-3.5, -0.7}, {-0.03526052701758139655, -0.16053255602513215939}},
  };
  for (const auto& r : refs) {
    CAPTURE(r.z);
    CHECK(rel(faddeeva(r.z), r.w) < 1e-12);
  }
}

TEST_CASE("faddeeva reflection identities") {
  const cplx z{1.0, 1.0};
  CHECK(std::abs(faddeeva(-std::conj(z)) - std::conj(faddeeva(z))) < 1e-12);
  CHECK(std::abs(faddeeva(-z) - (2.0 * std::exp(-z * z) - faddeeva(z))) < 1e-12);
}

TEST_CASE("faddeeva flags overflow deep in the lower half-plane") {
  CerfStatus status;
  const cplx w = faddeeva(cplx{1.0, -30.0}, status);
  CHECK(status.overflow);
  CHECK(std::isfinite(w.real()));
  CHECK(std::isfinite(w.imag()));
  CerfStatus quiet;
  faddeeva(cplx{1.0, -3.0}, quiet);
  CHECK_FALSE(quiet.overflow);
}

TEST_CASE("erfc_complex reference values") {
  CHECK(std::abs(erfc_complex(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(erfc_complex(1.0) - 0.157299207050285130658779364917) < 1e-13);
  struct Ref {
    double u;
    cplx value;
  };
  // erfc(u e^{-i pi/4}), 20-digit reference
  const Ref refs[] = {
      {0.3, {0.75365163759481208408, 0.23199474756726398149}},
      {1.0, {0.030735788055784069619, 0.47414763664099424516}},
      {2.5, {0.17353075973350739014, 0.13946231845890319089}},
      {3.9, {-0.1396223946505357886, -0.036391952373079297216}},
      {4.1, {0.038896340779507802586, -0.13168766003404596797}},
      {6.0, {0.056371280359634319909, -0.075204740073955361842}},
      {9.0, {0.062382118811272366113, 0.0061217083268875671018}},
  };
  for (const auto& r : refs) {
    CAPTURE(r.u);
    CHECK(rel(erfc_complex(r.u * sqrt_inv_i), r.value) < 1e-12);
    CHECK(rel(erfc_complex(r.u * sqrt_i), std::conj(r.value)) < 1e-12);
  }
}

TEST_CASE("erfc on the source-wave ray is bounded and decays like 1/(sqrt(pi) u)") {
  for (double u = 0.0; u <= 20.0; u += 0.01) CHECK(std::abs(erfc_complex(u * sqrt_inv_i)) <= 1.3);
  const double expected = 1.0 / (std::sqrt(pi) * 5.0);
  CHECK(std::abs(std::abs(erfc_complex(5.0 * sqrt_inv_i)) / expected - 1.0) < 0.02);
}

TEST_CASE("erfc conjugate symmetry on random points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> r(0.0, 5.0), phase(0.0, 2.0 * pi);
  for (int k = 0; k < 1000; ++k) {
    const cplx z = std::polar(r(rng), phase(rng));
    CHECK(std::abs(erfc_complex(std::conj(z)) - std::conj(erfc_complex(z))) <= 1e-13 * std::max(1.0, std::abs(erfc_complex(z))));
  }
}

TEST_CASE("erfc agrees with the real-axis erfc") {
  for (double x = -5.0; x <= 5.0; x += 0.01) {
    CAPTURE(x);
    const double ref = std::erfc(x);
    CHECK(std::abs(erfc_complex(x).real() - ref) <= 1e-12 * ref);
    CHECK(std::abs(erfc_complex(x).imag()) <= 1e-12 * ref);
  }
}

TEST_CASE("erfc derivative is -2/sqrt(pi) exp(-z^2)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double h = 1e-5;
  for (int k = 0; k < 100; ++k) {
    const cplx z{u(rng), u(rng)};
    const cplx fd = (erfc_complex(z + h) - erfc_complex(z - h)) / (2.0 * h);
    const cplx exact = -2.0 / std::sqrt(pi) * std::exp(-z * z);
    CAPTURE(z);
    CHECK(std::abs(fd - exact) <= 1e-7 * std::max(1.0, std::abs(exact)));
  }
}
