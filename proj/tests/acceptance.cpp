// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "discoflux/asymptotics.hpp"
#include "discoflux/fpt.hpp"
#include "discoflux/propagate.hpp"
#include "discoflux/source_wave.hpp"

using namespace discoflux;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void add(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [FAIL]");
}

// ------------------------------------------------------------------ 1

Outcome moment_identities() {
  constexpr double quad_tol = 1e-7, identity_tol = 1e-12;
  Outcome o;
  double worst = 0.0, worst_identity = 0.0;
  for (double m : {0.5, 1.0, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      const MassTime mt(m, t);
      const MomentSet s = moments(mt);
      const std::pair<MomentWeight, cplx> rows[] = {
          {MomentWeight::one, s.int_dpsi},           {MomentWeight::x, s.int_x_dpsi},
          {MomentWeight::abs2, s.int_abs2_dpsi},     {MomentWeight::x_prime, s.int_x_dpsi_prime},
          {MomentWeight::abs2_prime, s.int_abs2_dpsi_prime}, {MomentWeight::prime, s.int_dpsi_prime}};
      for (const auto& [w, closed] : rows) worst = std::max(worst, std::abs(quad_moment(w, mt, 1e-10).value - closed));
      worst_identity = std::max(worst_identity, std::abs(s.int_abs2_dpsi - s.int_x_dpsi.real()));
      worst_identity = std::max(worst_identity, std::abs(s.int_dpsi + s.int_x_dpsi_prime));
    }
  }
  add(o, worst <= quad_tol, fmt("max |closed - quad| = %.2e over 9 (M,t) x 6 moments (tol %.0e)", worst, quad_tol));
  add(o, worst_identity <= identity_tol,
      fmt("max identity defect = %.2e (tol %.0e)", worst_identity, identity_tol));
  const double q = quad_moment(MomentWeight::abs2_prime, MassTime(1.0, 1.0), 1e-10).value.real();
  const double target = 1.0 / (2.0 * std::sqrt(pi)), rival = 1.0 / (2.0 * pi);
  add(o, std::abs(q - target) <= quad_tol && std::abs(q - rival) > 0.1,
      fmt("int |dpsi'|^2 at M=t=1 by quadrature = %.8f (1/(2 sqrt pi) = %.8f)", q, target));
  return o;
}

// ------------------------------------------------------------------ 2

Outcome boundary_values() {
  constexpr double origin_tol = 1e-12, fd_tol = 1e-6;
  Outcome o;
  const cplx v = delta_psi(0.0, MassTime(1.0, 2.0 * pi));
  const double e0 = std::abs(v - cplx{-1.0, -1.0} / std::sqrt(2.0));
  add(o, e0 <= origin_tol, fmt("|dpsi(0, 2pi) + (1+i)/sqrt2| = %.2e", e0));
  add(o, delta_psi_prime(Side::plus) == cplx{0.5} && delta_psi_prime(Side::minus) == cplx{-0.5},
      "dpsi'(+-0) = +-1/2 exactly");
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> um(0.25, 4.0), ut(0.01, 4.0), uu(-8.0, 8.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const MassTime mt(um(rng), ut(rng));
    double u = uu(rng);
    if (std::abs(u) < 0.05) u = std::copysign(0.05, u);
    const double x = u * mt.length();
    const double h = 1e-5 * mt.length();
    const cplx fd = (delta_psi(x + h, mt) - delta_psi(x - h, mt)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - delta_psi_prime(x, mt)));
  }
  add(o, worst <= fd_tol, fmt("max |FD - dpsi'| over 200 random points = %.2e (tol %.0e)", worst, fd_tol));
  return o;
}

// ------------------------------------------------------------------ 3

Outcome far_field() {
  constexpr double modulus_tol = 0.01, phase_tol = 0.02;
  Outcome o;
  for (double u : {10.0, 12.0, 15.0, 20.0, 30.0, 50.0, 100.0}) {
    double worst_mod = 0.0, worst_phase = 0.0;
    for (const auto& [m, t] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 0.01}}) {
      const MassTime mt(m, t);
      for (double sign : {-1.0, 1.0}) {
        const double x = sign * u * mt.length();
        const cplx r = delta_psi_far_field(x, mt) / delta_psi(x, mt);
        worst_mod = std::max(worst_mod, std::abs(std::abs(r) - 1.0));
        worst_phase = std::max(worst_phase, std::abs(std::arg(r)));
      }
    }
    add(o, worst_mod <= modulus_tol && worst_phase <= phase_tol,
        fmt("u=%g: |mod-1| = %.1e, phase = %.4f rad", u, worst_mod, worst_phase));
  }
  return o;
}

// ------------------------------------------------------------------ 4

// A sin(kl (x - a)) e^{i pl x} on the left and B sin(kr (b - x)) e^{i pr x} on the right.
PiecewiseState random_state(std::mt19937& rng, bool pure_left) {
  std::uniform_real_distribution<double> uk(0.5, 4.0), up(-5.0, 5.0), ua(-1.0, 1.0);
  const BoxDomain d(-1.0, 1.0, 1.0);
  auto side = [](cplx amp, double k, double p, double x_wall, double dir) {
    // dir = +1: sin(k (x - wall)), dir = -1: sin(k (wall - x))
    auto s = [=](double x) { return std::sin(k * dir * (x - x_wall)); };
    auto s1 = [=](double x) { return k * dir * std::cos(k * dir * (x - x_wall)); };
    auto s2 = [=](double x) { return -k * k * std::sin(k * dir * (x - x_wall)); };
    const cplx ip{0.0, p};
    return SideFunction{[=](double x) { return amp * s(x) * std::polar(1.0, p * x); },
                        [=](double x) { return amp * (s1(x) + ip * s(x)) * std::polar(1.0, p * x); },
                        [=](double x) { return amp * (s2(x) + 2.0 * ip * s1(x) - p * p * s(x)) * std::polar(1.0, p * x); }};
  };
  const cplx al{ua(rng), ua(rng)}, ar{ua(rng), ua(rng)};
  const double kl = uk(rng), kr = uk(rng), pl = up(rng), pr = up(rng);
  SideFunction left = side(al, kl, pl, d.a(), 1.0);
  SideFunction right = pure_left ? SideFunction::zero() : side(ar, kr, pr, d.b(), -1.0);
  BoundaryData bd;
  bd.psi_minus = left.value(0.0);
  bd.dpsi_minus = left.first(0.0);
  if (!pure_left) {
    bd.psi_plus = right.value(0.0);
    bd.dpsi_plus = right.first(0.0);
  }
  return PiecewiseState(d, left, right, bd, 1.0);
}

Outcome smoothing() {
  constexpr double tol = 1e-10;
  Outcome o;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> ulogt(-5.0, -2.0);
  double worst_gap = 0.0, worst_near = 0.0, worst_edge = 0.0;
  const double delta = 1e-13;
  for (int k = 0; k < 100; ++k) {
    const bool pure_left = k >= 50;
    const PiecewiseState s = random_state(rng, pure_left);
    const double t = std::pow(10.0, ulogt(rng));
    const EdgeLimits e = edge_limits(s, t);
    worst_gap = std::max(worst_gap, std::abs(e.minus - e.plus));
    const ShortTimeField f = short_time_state(s, t, {-delta, delta});
    worst_near = std::max(worst_near, std::abs(f.terms[0].retained() - f.terms[1].retained()));
    if (pure_left) {
      const BoundaryData& bd = s.boundary();
      const cplx expected = bd.psi_minus / 2.0 + delta_psi(0.0, MassTime(1.0, t)) * bd.dpsi_minus;
      worst_edge = std::max(worst_edge, std::abs(short_time_terms(s, Side::minus, t).retained() - expected));
    }
  }
  add(o, worst_gap <= tol, fmt("50 two-sided + 50 pure-left states: max one-sided gap at 0 = %.1e", worst_gap));
  add(o, worst_near <= tol, fmt("max |field(+1e-13) - field(-1e-13)| = %.1e", worst_near));
  add(o, worst_edge <= tol, fmt("pure-left edge vs Psi(-0)/2 + dpsi(0,t) Psi'(-0): max err %.1e", worst_edge));
  return o;
}

// ------------------------------------------------------------------ 5

Outcome fig1() {
  constexpr int n = 16384;
  Outcome o;
  const Fig1Curves a = fig1_curves(Fig1Case::truncated, 0.001, Grid1D(BoxDomain(-0.75, 1.25, 1.0), n));
  add(o, a.l2_distance <= 0.02, fmt("truncated t/t0=0.001: L2 = %.4f (tol 0.02)", a.l2_distance));
  const Fig1Curves b = fig1_curves(Fig1Case::wall_removed, 0.05, Grid1D(BoxDomain(-1.0, 1.0, 1.0), n));
  add(o, b.l2_distance <= 0.10, fmt("wall_removed t/t0=0.05: L2 = %.4f (tol 0.10)", b.l2_distance));
  return o;
}

// ------------------------------------------------------------------ 6

struct ScalingCase {
  const char* name;
  PiecewiseState state;
  double exponent_theory;
  double pinned_prefactor;  // NaN: use current_law only
};

Outcome scaling() {
  constexpr int n = 16384, n_points = 12;
  constexpr double exponent_band = 0.05, prefactor_band = 0.05;
  Outcome o;
  const BoxDomain unit(-1.0, 1.0, 1.0);
  const double nan = std::nan("");
  const ScalingCase cases[] = {
      {"A gaussian(w=0.08,k0=5)", gaussian_state(0.0, 0.08, 5.0, unit), 0.0, nan},
      {"B truncated_well(1,3/4)", truncated_well(1.0, 0.75, BoxDomain(-0.75, 1.25, 1.0)), -0.5,
       1.0 / (4.0 * std::sqrt(pi))},
      {"C kink(2,2.5,q=5)", kink_state(2.0, 2.5, cplx{1.0, 0.0}, unit, 5.0), 0.0, nan},
      {"D wall_removed(1)", wall_removed(1.0, unit), 0.5, std::pow(pi, 1.5) / 2.0},
  };
  for (const auto& c : cases) {
    const CurrentLaw law = current_law(c.state);
    const double reference = std::isnan(c.pinned_prefactor) ? law.prefactor : c.pinned_prefactor;
    const Grid1D grid(c.state.domain(), n);
    const double t0 = c.state.t0();
    const std::vector<double> times = log_time_ladder(1e-5 * t0, 1e-3 * t0, n_points);
    const EvolutionTrace tr = spectral_propagate(c.state, grid, times);
    const PowerLawFit free_fit = fit_power_law(tr.times, tr.current);
    const LeadingFit pinned = fit_leading_coefficient(tr.times, tr.current, c.exponent_theory);
    const double rel = std::abs(pinned.leading - reference) / std::abs(reference);
    const bool ok = law.exponent == c.exponent_theory && std::abs(free_fit.exponent - c.exponent_theory) <= exponent_band &&
                    rel <= prefactor_band && std::abs(law.prefactor - reference) <= 1e-12 * std::abs(reference);
    add(o, ok,
        fmt("%s: case %c, exponent %.4f (theory %+.1f), prefactor %.5f vs %.5f (%.2f%%)", c.name, to_char(law.case_label),
            free_fit.exponent, c.exponent_theory, pinned.leading, reference, 100.0 * rel));
  }
  return o;
}

// ------------------------------------------------------------------ 7

Outcome phase_jump() {
  constexpr int n = 16384, n_points = 12;
  constexpr double band = 0.05;
  Outcome o;
  const BoxDomain d(-1.0, 1.0, 1.0);
  const PiecewiseState ground = box_ground_state(d);
  const double psi0_sq = std::norm(ground.boundary().psi_minus);
  const double expected = -psi0_sq / (2.0 * std::sqrt(pi * d.mass()));
  const Grid1D grid(d, n);
  std::vector<double> ratios;
  for (double dphi : {pi / 6.0, pi / 4.0, pi / 2.0}) {
    const PiecewiseState s = phase_jump_state(dphi, ground);
    const double t0 = s.t0();
    const EvolutionTrace tr = spectral_propagate(s, grid, log_time_ladder(1e-5 * t0, 1e-3 * t0, n_points));
    const LeadingFit f = fit_leading_coefficient(tr.times, tr.current, -0.5);
    ratios.push_back(f.leading / std::sin(dphi));
  }
  double spread = 0.0;
  for (double r : ratios) spread = std::max(spread, std::abs(r / ratios.back() - 1.0));
  add(o, spread <= band, fmt("C/sin(dphi) = %.5f, %.5f, %.5f (spread %.2f%%)", ratios[0], ratios[1], ratios[2],
                             100.0 * spread));
  double worst = 0.0;
  for (double r : ratios) worst = std::max(worst, std::abs(r - expected) / std::abs(expected));
  add(o, worst <= band,
      fmt("vs -|Psi(0)|^2/(2 sqrt(pi M)) = %.5f: max rel err %.1f%% (measured magnitude matches to %.2f%%)", expected,
          100.0 * worst, 100.0 * std::abs(std::abs(ratios.back()) / std::abs(expected) - 1.0)));
  return o;
}

// ------------------------------------------------------------------ 8

Outcome fpt_exactness() {
  constexpr double residual_tol = 1e-3, ratio_min = 2.0;
  Outcome o;
  const BoxDomain d(-0.75, 1.25, 1.0);
  const PiecewiseState s = truncated_well(1.0, 0.75, d);
  const double t = 0.01 * s.t0();
  const StateDecomposition r1 = decompose_state(s, Grid1D(d, 2048), t, 2048);
  const StateDecomposition r2 = decompose_state(s, Grid1D(d, 4096), t, 4096);
  add(o, r1.residual <= residual_tol, fmt("residual(2048, 2048) = %.2e (tol %.0e)", r1.residual, residual_tol));
  const double ratio = r1.residual / r2.residual;
  add(o, ratio >= ratio_min, fmt("residual(4096, 4096) = %.2e, ratio %.2f (min %.0f)", r2.residual, ratio, ratio_min));
  return o;
}

// ------------------------------------------------------------------ 9

Outcome commutator() {
  constexpr double theta_band = 0.01, limit_band = 0.01;
  Outcome o;
  const double a = -1.0;
  const auto f = [a](double x) { return cplx{std::sin(pi * (x - a) / (-a))}; };
  const auto g = [a](double x) { return cplx{std::sin(pi * (x - a) / (-2.0 * a))}; };
  const cplx exact = commutator_boundary_formula(f(0.0), pi * std::cos(pi), g(0.0), 0.0, 1.0);
  add(o, std::abs(exact - pi / 2.0) < 1e-12, fmt("continuum value %.6f (pi/2)", exact.real()));
  const BoxDomain d(a, 1.0, 1.0);
  const cplx c1 = commutator_element(f, g, 0.3, Grid1D(d, 4096));
  const cplx c2 = commutator_element(f, g, 1.2, Grid1D(d, 4096));
  const double spread = std::abs(c1 - c2) / std::abs(c1);
  add(o, spread <= theta_band, fmt("n=4096: theta=0.3 -> %.6f%+.1ei, theta=1.2 -> %.6f%+.1ei (rel diff %.1e)", c1.real(),
                                   c1.imag(), c2.real(), c2.imag(), spread));
  std::vector<double> errors;
  for (int n : {1024, 2048, 4096}) errors.push_back(std::abs(commutator_element(f, g, 0.3, Grid1D(d, n)) - exact));
  const bool decreasing = errors[1] < errors[0] && errors[2] < errors[1];
  add(o, decreasing && errors[2] <= limit_band * std::abs(exact),
      fmt("|element - pi/2| at n=1024,2048,4096: %.2e, %.2e, %.2e", errors[0], errors[1], errors[2]));
  return o;
}

// ------------------------------------------------------------------ 10

Outcome hygiene() {
  constexpr double spectral_norm_tol = 1e-10, cn_norm_tol = 1e-8, scheme_tol = 1e-4, stationary_tol = 1e-6;
  Outcome o;
  const BoxDomain unit(-1.0, 1.0, 1.0), shifted(-0.75, 1.25, 1.0);
  const std::vector<double> ladder = log_time_ladder(1e-5, 1e-3, 12);

  double spectral_drift = 0.0;
  {
    const PiecewiseState s = truncated_well(1.0, 0.75, shifted).normalized();
    const Grid1D g(shifted, 16384);
    const Eigen::VectorXcd psi0 = s.sample(g);
    const double n0 = grid_norm(psi0, g);
    const EvolutionTrace tr = spectral_propagate(SpectralPropagator(g), psi0, ladder);
    for (double nv : tr.norm) spectral_drift = std::max(spectral_drift, std::abs(nv - n0));
  }
  add(o, spectral_drift <= spectral_norm_tol, fmt("spectral norm drift %.1e", spectral_drift));

  constexpr int n_small = 1024, steps = 100000;
  constexpr double t_end = 1e-3;
  double cn_drift = 0.0, worst_l2 = 0.0;
  const std::pair<PiecewiseState, BoxDomain> states[] = {
      {truncated_well(1.0, 0.75, shifted).normalized(), shifted},
      {wall_removed(1.0, unit), unit},
      {phase_jump_state(pi / 2.0, box_ground_state(unit)), unit},
      {kink_state(2.0, 2.5, cplx{1.0, 0.0}, unit, 5.0), unit},
  };
  for (const auto& [s, dom] : states) {
    const Grid1D g(dom, n_small);
    const Eigen::VectorXcd psi0 = s.sample(g);
    const double n0 = grid_norm(psi0, g);
    const EvolutionTrace cn = crank_nicolson_propagate(psi0, g, t_end / steps, steps, steps / 10);
    for (double nv : cn.norm) cn_drift = std::max(cn_drift, std::abs(nv - n0));
    const Eigen::VectorXcd ref = SpectralPropagator(g).evolve(psi0, t_end);
    worst_l2 = std::max(worst_l2, l2_distance(cn.final_field, ref, g));
  }
  add(o, cn_drift <= cn_norm_tol, fmt("CN norm drift %.1e", cn_drift));
  add(o, worst_l2 <= scheme_tol,
      fmt("spectral vs CN L2 at n=%d, t=%g, %d steps: max %.1e over 4 states", n_small, t_end, steps, worst_l2));

  double stationary = 0.0;
  {
    const PiecewiseState s = box_ground_state(unit);
    const Grid1D g(unit, 16384);
    const EvolutionTrace tr = spectral_propagate(s, g, ladder);
    const double p0 = p_right(s.sample(g), g);
    for (double p : tr.p_right) stationary = std::max(stationary, std::abs(p - p0));
    const Grid1D gs(unit, n_small);
    const Eigen::VectorXcd psi0 = s.sample(gs);
    const double q0 = p_right(psi0, gs);
    const EvolutionTrace cn = crank_nicolson_propagate(psi0, gs, t_end / 1000, 1000, 100);
    for (double p : cn.p_right) stationary = std::max(stationary, std::abs(p - q0));
  }
  add(o, stationary <= stationary_tol, fmt("ground state max |dP_R| = %.1e", stationary));
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"moment identities", moment_identities},
      {"boundary values", boundary_values},
      {"far field", far_field},
      {"smoothing", smoothing},
      {"fig1 reproduction", fig1},
      {"scaling laws", scaling},
      {"phase-jump law", phase_jump},
      {"FPT exactness", fpt_exactness},
      {"commutator", commutator},
      {"propagator hygiene", hygiene},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", index, name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed;
}
