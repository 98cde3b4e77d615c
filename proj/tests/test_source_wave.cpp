#include <doctest.h>

#include <cmath>
#include <random>

#include "discoflux/quadrature.hpp"
#include "discoflux/source_wave.hpp"

using namespace discoflux;

TEST_CASE("delta_psi at the origin and its symmetry") {
  const MassTime mt(1.0, 2.0 * pi);
  CHECK(std::abs(delta_psi(0.0, mt) - cplx{-1.0, -1.0} / std::sqrt(2.0)) < 1e-12);
  const MassTime mt2(1.3, 0.4);
  for (double x : {0.01, 0.2, 1.0, 3.0}) CHECK(std::abs(delta_psi(x, mt2) - delta_psi(-x, mt2)) < 1e-15);
}

TEST_CASE("delta_psi reference values") {
  struct Ref {
    double x, m, t;
    cplx v;
  };
  const Ref refs[] = {
      {0.3, 1.0, 0.2, {-0.0055565582238121926011, -0.098881742059649377643}},
      {-0.7, 2.0, 0.5, {0.053216868768962451647, -0.02894801073648280279}},
      {0.05, 1.0, 0.01, {-0.0068072495212569267599, -0.024758551242356944653}},
      {1.2, 0.5, 3.0, {-0.17552462910730678681, -0.60976700737991978891}},
  };
  for (const auto& r : refs) {
    CAPTURE(r.x);
    CHECK(std::abs(delta_psi(r.x, MassTime(r.m, r.t)) - r.v) <= 1e-12 * std::abs(r.v));
  }
}

TEST_CASE("delta_psi scales as length") {
  const double m = 0.8;
  for (double x : {0.05, 0.4, 2.0}) {
    const cplx a = delta_psi(2.0 * x, MassTime(m, 4.0 * 0.3));
    const cplx b = 2.0 * delta_psi(x, MassTime(m, 0.3));
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(b));
  }
}

TEST_CASE("delta_psi_prime one-sided limits and finite differences") {
  CHECK(delta_psi_prime(Side::minus) == cplx{-0.5});
  CHECK(delta_psi_prime(Side::plus) == cplx{0.5});
  const MassTime mt(1.0, 0.3);
  CHECK(std::abs(delta_psi_prime(1e-12, mt) - 0.5) < 1e-9);
  CHECK(std::abs(delta_psi_prime(-1e-12, mt) + 0.5) < 1e-9);
  CHECK_THROWS_AS(delta_psi_prime(0.0, mt), std::domain_error);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), um(0.2, 5.0), ut(0.01, 2.0);
  for (int k = 0; k < 200; ++k) {
    const MassTime m(um(rng), ut(rng));
    double x = ux(rng);
    if (std::abs(x) < 0.05) x = 0.05;
    const double h = 1e-5 * m.length();
    const cplx fd = (delta_psi(x + h, m) - delta_psi(x - h, m)) / (2.0 * h);
    const cplx exact = delta_psi_prime(x, m);
    CAPTURE(x);
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(std::abs(exact), 1e-3));
    const cplx fd2 = (delta_psi_prime(x + h, m) - delta_psi_prime(x - h, m)) / (2.0 * h);
    const cplx second = delta_psi_second(x, m);
    CHECK(std::abs(fd2 - second) <= 1e-6 * std::abs(second));
  }
}

TEST_CASE("delta_psi approaches the far field") {
  const MassTime mt(1.0, 0.1);
  const double x = 10.0;
  CHECK(std::abs(delta_psi(x, mt) / delta_psi_far_field(x, mt) - 1.0) < 0.01);
}

TEST_CASE("moment closed forms") {
  const MassTime mt(1.0, 1.0);
  const MomentSet s = moments(mt);
  CHECK(std::abs(s.int_dpsi - cplx{0.0, -0.25}) < 1e-15);
  CHECK(std::abs(s.int_x_dpsi_prime + s.int_dpsi) < 1e-15);
  CHECK(std::abs(s.int_abs2_dpsi_prime - 0.282094791773878143474) < 1e-15);
  CHECK(std::abs(s.int_dpsi_prime + delta_psi(0.0, mt)) < 1e-12);
  const MomentSet s2 = moments(MassTime(2.0, 0.5));
  CHECK(std::abs(s2.int_abs2_dpsi - std::pow(0.5, 1.5) / (6.0 * std::sqrt(pi * 8.0))) < 1e-15);
}

TEST_CASE("quad_moment reproduces the closed forms") {
  for (const auto& [m, t] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.01}, std::pair{0.5, 3.0}}) {
    const MassTime mt(m, t);
    const MomentSet s = moments(mt);
    const std::pair<MomentWeight, cplx> cases[] = {
        {MomentWeight::one, s.int_dpsi},           {MomentWeight::x, s.int_x_dpsi},
        {MomentWeight::abs2, s.int_abs2_dpsi},     {MomentWeight::x_prime, s.int_x_dpsi_prime},
        {MomentWeight::abs2_prime, s.int_abs2_dpsi_prime}, {MomentWeight::prime, s.int_dpsi_prime},
    };
    for (const auto& [w, exact] : cases) {
      CAPTURE(to_string(w));
      CAPTURE(t);
      const MomentQuadrature q = quad_moment(w, mt, 1e-10);
      CHECK(std::abs(q.value - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("quad_moment preconditions") {
  const MassTime mt(1.0, 1.0);
  CHECK_THROWS_AS(quad_moment(MomentWeight::one, mt, 10.0, 1e-10), std::domain_error);
  CHECK_THROWS_AS(quad_moment(MomentWeight::one, mt, 30.0, 1e-14), std::domain_error);
  CHECK_THROWS_AS(quad_moment(MomentWeight::one, mt, 30.0, 1e-2), std::domain_error);
}

TEST_CASE("moment weight names round-trip") {
  for (auto w : {MomentWeight::one, MomentWeight::x, MomentWeight::abs2, MomentWeight::x_prime,
                 MomentWeight::abs2_prime, MomentWeight::prime}) {
    CHECK(moment_weight_from_string(to_string(w)) == w);
  }
  CHECK_THROWS(moment_weight_from_string("bogus"));
}

TEST_CASE("adaptive quadrature on a smooth integrand") {
  const auto r = integrate<double>([](double x) { return std::exp(-x * x); }, 0.0, 5.0, QuadratureOptions{});
  CHECK(std::abs(r.value - 0.5 * std::sqrt(pi) * std::erf(5.0)) < 1e-12);
}
