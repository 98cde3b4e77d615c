// Command-line runner: moments, kernel, fig1, scaling, decompose, evolve.
// Exit codes: 0 pass, 1 usage or config error, 2 tolerance failure, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "discoflux/asymptotics.hpp"
#include "discoflux/config.hpp"
#include "discoflux/fpt.hpp"
#include "discoflux/io.hpp"
#include "discoflux/propagate.hpp"
#include "discoflux/quadrature.hpp"
#include "discoflux/source_wave.hpp"

using namespace discoflux;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, usage = 1, tolerance = 2, numerical = 3 };

// Usage errors are reported as std::invalid_argument / std::domain_error /
// ConfigError; anything else thrown by the numerics maps to exit 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> g_argv;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void emit(const std::string& path, const std::string& content, const json& extra = json::object()) {
  write_file_atomic(path, content);
  write_meta_sidecar(path, g_argv, extra);
  std::cerr << "wrote " << path << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- moments

struct MomentsArgs {
  double mass = 1.0, time = 1.0, tol = 1e-10;
  bool as_json = false;
};

int cmd_moments(const MomentsArgs& a) {
  const MassTime mt(a.mass, a.time);
  const MomentSet s = moments(mt);
  const std::pair<MomentWeight, cplx> rows[] = {
      {MomentWeight::one, s.int_dpsi},
      {MomentWeight::x, s.int_x_dpsi},
      {MomentWeight::x_prime, s.int_x_dpsi_prime},
      {MomentWeight::abs2, s.int_abs2_dpsi},
      {MomentWeight::abs2_prime, s.int_abs2_dpsi_prime},
      {MomentWeight::prime, s.int_dpsi_prime},
  };
  constexpr double limit = 1e-7;
  bool pass = true;
  json report;
  report["mass"] = a.mass;
  report["time"] = a.time;
  json table = json::array();
  if (!a.as_json) std::printf("%-20s %-44s %-44s %s\n", "moment", "closed", "quadrature", "|diff|");
  for (const auto& [w, closed] : rows) {
    const MomentQuadrature q = quad_moment(w, mt, a.tol);
    const double diff = std::abs(q.value - closed);
    pass = pass && diff <= limit;
    json row;
    row["name"] = std::string(to_string(w));
    row["closed_re"] = closed.real();
    row["closed_im"] = closed.imag();
    row["quad_re"] = q.value.real();
    row["quad_im"] = q.value.imag();
    row["quad_error"] = q.error;
    row["diff"] = diff;
    table.push_back(row);
    if (!a.as_json) {
      std::printf("%-20s %+.15e%+.15ei %+.15e%+.15ei %.3e\n", std::string(to_string(w)).c_str(), closed.real(),
                  closed.imag(), q.value.real(), q.value.imag(), diff);
    }
  }
  report["moments"] = table;
  report["tolerance"] = limit;
  report["pass"] = pass;
  if (a.as_json) std::cout << dump(report);
  return pass ? ok : tolerance;
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
  double mass = 1.0, time = 1.0, x_max = 0.0;
  int n = 401;
  std::string out = "out";
};

int cmd_kernel(const KernelArgs& a) {
  const MassTime mt(a.mass, a.time);
  const double x_max = a.x_max > 0.0 ? a.x_max : 15.0 * mt.length();
  if (a.n < 2) throw UsageError("--n must be at least 2");
  CsvTable t;
  t.comments = {"source wave delta_psi, its x-derivative and the far-field form",
                "mass = " + format_double(a.mass) + ", time = " + format_double(a.time),
                "derivative and far field are nan at x = 0"};
  t.columns = {"x", "re_dpsi", "im_dpsi", "re_dpsi_prime", "im_dpsi_prime", "re_far", "im_far"};
  for (int i = 0; i < a.n; ++i) {
    const double x = -x_max + 2.0 * x_max * i / (a.n - 1);
    const cplx v = delta_psi(x, mt);
    const double nan = std::nan("");
    cplx d{nan, nan}, f{nan, nan};
    if (x != 0.0) {
      d = delta_psi_prime(x, mt);
      f = delta_psi_far_field(x, mt);
    }
    t.rows.push_back({x, v.real(), v.imag(), d.real(), d.imag(), f.real(), f.imag()});
  }
  emit(join(output_dir(a.out), "kernel.csv"), t.str());
  return ok;
}

// ---------------------------------------------------------------- fig1

struct Fig1Args {
  std::string which = "truncated";
  double t_over_t0 = 0.001;
  std::string config;
  int n_cells = 0;
  bool svg = false;
};

int cmd_fig1(const Fig1Args& a) {
  if (!(a.t_over_t0 > 0.0)) throw UsageError("--t-over-t0 must be positive");
  const Fig1Case which = fig1_case_from_string(a.which);
  RunConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  } else {
    // Truncated well: [-3/4, 5/4] puts the cut at 0 and keeps the discarded part's room.
    cfg.grid.a = which == Fig1Case::truncated ? -0.75 : -1.0;
    cfg.grid.b = which == Fig1Case::truncated ? 1.25 : 1.0;
  }
  if (a.n_cells > 0) cfg.grid.n_cells = a.n_cells;
  if (cfg.grid.mass != 1.0) throw UsageError("fig1 uses M = 1");
  const Grid1D grid = make_grid(cfg);
  const Fig1Curves c = fig1_curves(which, a.t_over_t0, grid);

  CsvTable t;
  t.comments = {"case = " + to_string(which) + ", t/t0 = " + format_double(a.t_over_t0) + ", t = " +
                    format_double(c.time),
                "numerical: exact-in-time spectral evolution on " + std::to_string(grid.n_cells()) + " cells",
                "approx = initial + hamiltonian + value_source + slope_source",
                "l2_distance = " + format_double(c.l2_distance) + ", threshold = " + format_double(c.threshold)};
  t.columns = {"x",          "re_num",        "im_num",        "re_approx",       "im_approx",      "re_initial",
               "im_initial", "re_hamiltonian", "im_hamiltonian", "re_value_source", "im_value_source",
               "re_slope_source", "im_slope_source"};
  std::vector<double> abs_num, abs_approx, abs_value_src, abs_slope_src;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    const ShortTimeTerms& s = c.terms[i];
    const cplx n = c.numerical[static_cast<Eigen::Index>(i)], ap = s.total();
    t.rows.push_back({c.x[i], n.real(), n.imag(), ap.real(), ap.imag(), s.initial.real(), s.initial.imag(),
                      s.hamiltonian.real(), s.hamiltonian.imag(), s.value_source.real(), s.value_source.imag(),
                      s.slope_source.real(), s.slope_source.imag()});
    abs_num.push_back(std::abs(n));
    abs_approx.push_back(std::abs(ap));
    abs_value_src.push_back(std::abs(s.value_source));
    abs_slope_src.push_back(std::abs(s.slope_source));
  }
  const std::string dir = output_dir(cfg.output.dir);
  const std::string stem = "fig1_" + to_string(which);
  if (cfg.wants("csv")) emit(join(dir, stem + ".csv"), t.str());
  json report;
  report["case"] = to_string(which);
  report["t_over_t0"] = a.t_over_t0;
  report["time"] = c.time;
  report["n_cells"] = grid.n_cells();
  report["l2_distance"] = c.l2_distance;
  report["threshold"] = c.threshold;
  report["pass"] = c.pass();
  if (cfg.wants("json")) emit(join(dir, stem + ".json"), dump(report));
  if (a.svg || cfg.wants("svg")) {
    emit(join(dir, stem + ".svg"),
         svg_line_plot(to_string(which) + ", t/t0 = " + format_double(a.t_over_t0), "x", c.x,
                       {{"|numerical|", abs_num},
                        {"|approximation|", abs_approx},
                        {"|value source|", abs_value_src},
                        {"|slope source|", abs_slope_src}}));
  }
  std::cout << dump(report);
  return c.pass() ? ok : tolerance;
}

// ---------------------------------------------------------------- scaling

int cmd_scaling(const std::string& config_path) {
  const RunConfig cfg = load_config(config_path);
  const PiecewiseState state = make_state(cfg);
  check_time_window(cfg, state);
  const Grid1D grid = make_grid(cfg);
  const Potential pot = make_potential(cfg);
  if (!grid.resolves(cfg.time.t_min)) {
    std::cerr << "warning: dx exceeds sqrt(t_min/M)/8; the shortest times are under-resolved\n";
  }
  const CurrentLaw law = current_law(state);
  const std::vector<double> times = log_time_ladder(cfg.time.t_min, cfg.time.t_max, cfg.time.n_points);
  const EvolutionTrace tr = spectral_propagate(state, grid, times, pot);
  const PowerLawFit free_fit = fit_power_law(tr.times, tr.current);
  const LeadingFit pinned = fit_leading_coefficient(tr.times, tr.current, law.exponent);

  constexpr double exponent_band = 0.05, prefactor_band = 0.05;
  const double rel_err = law.prefactor != 0.0 ? std::abs(pinned.leading - law.prefactor) / std::abs(law.prefactor)
                                              : std::abs(pinned.leading);
  const bool pass = std::abs(free_fit.exponent - law.exponent) <= exponent_band && rel_err <= prefactor_band;

  json report;
  report["case"] = std::string(1, to_char(law.case_label));
  report["marginal"] = law.marginal;
  report["exp_fit"] = free_fit.exponent;
  report["exp_theory"] = law.exponent;
  report["prefactor_fit"] = pinned.leading;
  report["prefactor_theory"] = law.prefactor;
  report["rel_err"] = rel_err;
  report["pass"] = pass;
  report["fit_residual"] = free_fit.residual;
  report["subleading"] = pinned.subleading;
  report["n_cells"] = grid.n_cells();
  report["times"] = tr.times;
  report["current"] = tr.current;
  report["p_right"] = tr.p_right;

  const std::string dir = output_dir(cfg.output.dir);
  const std::string stem = "scaling_" + cfg.state.kind;
  if (cfg.wants("json")) emit(join(dir, stem + ".json"), dump(report));
  if (cfg.wants("csv")) {
    CsvTable t;
    t.comments = {"case " + std::string(1, to_char(law.case_label)) + ", law J = " + format_double(law.prefactor) +
                  " t^" + format_double(law.exponent)};
    t.columns = {"t", "p_right", "current", "law"};
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      t.rows.push_back({tr.times[k], tr.p_right[k], tr.current[k], law.at(tr.times[k])});
    }
    emit(join(dir, stem + ".csv"), t.str());
  }
  if (cfg.wants("svg")) {
    std::vector<double> lj, ll;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      lj.push_back(std::log10(std::abs(tr.current[k])));
      ll.push_back(std::log10(std::abs(law.at(tr.times[k]))));
    }
    emit(join(dir, stem + ".svg"),
         svg_line_plot("log10 |J| vs log10 t", "t", tr.times, {{"numerical", lj}, {"leading law", ll}}, true));
  }
  json brief = report;
  brief.erase("times");
  brief.erase("current");
  brief.erase("p_right");
  std::cout << dump(brief);
  return pass ? ok : tolerance;
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string config;
  std::vector<double> thetas;
  double time = 0.0;
  int n_quad = 2048;
  int n_cells = 2048;
};

int cmd_decompose(const DecomposeArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  } else {
    cfg.grid.a = -0.75;
    cfg.grid.b = 1.25;
  }
  cfg.grid.n_cells = a.n_cells;
  if (!(a.time > 0.0)) throw UsageError("--time must be positive");
  if (a.n_quad < 8) throw UsageError("--n-quad must be at least 8");
  const PiecewiseState state = make_state(cfg);
  const Potential pot = make_potential(cfg);
  const Grid1D coarse = make_grid(cfg);
  cfg.grid.n_cells = 2 * a.n_cells;
  const Grid1D fine = make_grid(cfg);

  const StateDecomposition r1 = decompose_state(state, coarse, a.time, a.n_quad, std::nullopt, pot);
  const StateDecomposition r2 = decompose_state(state, fine, a.time, 2 * a.n_quad, std::nullopt, pot);
  const double ratio = r2.residual > 0.0 ? r1.residual / r2.residual : INFINITY;

  // Commutator check with test functions vanishing at the left wall.
  const double wall = coarse.domain().a();
  const auto f = [wall](double x) { return cplx{std::sin(pi * (x - wall) / (-wall))}; };
  const auto g = [wall](double x) { return cplx{std::sin(pi * (x - wall) / (-2.0 * wall))}; };
  const cplx exact = commutator_boundary_formula(f(0.0), pi / (-wall) * std::cos(pi), g(0.0),
                                                 pi / (-2.0 * wall) * std::cos(pi / 2.0), coarse.domain().mass());
  std::vector<double> thetas = a.thetas;
  if (thetas.empty()) thetas = {0.3, 1.2};
  json comm = json::array();
  std::vector<cplx> values;
  for (double th : thetas) {
    const cplx v = commutator_element(f, g, th, coarse, pot);
    values.push_back(v);
    json e;
    e["theta"] = th;
    e["re"] = v.real();
    e["im"] = v.imag();
    comm.push_back(e);
  }
  double spread = 0.0;
  for (const cplx& v : values) spread = std::max(spread, std::abs(v - values.front()) / std::abs(values.front()));

  constexpr double residual_limit = 1e-3, ratio_limit = 2.0, commutator_band = 0.01;
  const bool pass = r1.residual <= residual_limit && ratio >= ratio_limit && spread <= commutator_band;

  json report;
  report["theta1"] = r1.theta1.theta;
  report["theta2"] = r1.theta2.degenerate ? json(nullptr) : json(r1.theta2.theta);
  report["residual"] = r1.residual;
  report["n_cells"] = coarse.n_cells();
  report["n_quad"] = a.n_quad;
  report["convergence_ratio"] = ratio;
  report["residual_refined"] = r2.residual;
  report["residual_half_quad"] = r1.residual_half_quad;
  report["under_resolved"] = r1.under_resolved;
  report["time"] = a.time;
  report["commutator"] = comm;
  report["commutator_spread"] = spread;
  report["commutator_continuum_re"] = exact.real();
  report["commutator_continuum_im"] = exact.imag();
  report["pass"] = pass;
  if (cfg.wants("json")) emit(join(output_dir(cfg.output.dir), "decompose.json"), dump(report));
  std::cout << dump(report);
  return pass ? ok : tolerance;
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(const std::string& config_path) {
  const RunConfig cfg = load_config(config_path);
  const PiecewiseState state = make_state(cfg);
  check_time_window(cfg, state);
  const Grid1D grid = make_grid(cfg);
  const Potential pot = make_potential(cfg);
  EvolutionTrace tr;
  if (cfg.evolve.scheme == "crank_nicolson") {
    if (!(cfg.evolve.dt > 0.0) || cfg.evolve.n_steps < 1) {
      throw UsageError("crank_nicolson needs evolve.dt > 0 and evolve.n_steps >= 1");
    }
    tr = crank_nicolson_propagate(state, grid, cfg.evolve.dt, cfg.evolve.n_steps, cfg.evolve.record_every, pot);
    if (tr.accuracy_warning) std::cerr << "warning: dt > M dx^2, phase errors of the fastest modes are large\n";
  } else {
    tr = spectral_propagate(state, grid, log_time_ladder(cfg.time.t_min, cfg.time.t_max, cfg.time.n_points), pot);
  }
  const std::string dir = output_dir(cfg.output.dir);
  const std::string stem = "evolve_" + cfg.state.kind;
  CsvTable t;
  t.comments = {"scheme = " + cfg.evolve.scheme + ", n_cells = " + std::to_string(grid.n_cells())};
  t.columns = {"t", "p_right", "current", "norm"};
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    t.rows.push_back({tr.times[k], tr.p_right[k], tr.current[k], tr.norm[k]});
  }
  if (cfg.wants("csv")) emit(join(dir, stem + ".csv"), t.str());
  json report;
  report["scheme"] = cfg.evolve.scheme;
  report["n_cells"] = grid.n_cells();
  report["final_time"] = tr.times.back();
  report["final_p_right"] = tr.p_right.back();
  report["final_norm"] = tr.norm.back();
  report["accuracy_warning"] = tr.accuracy_warning;
  if (cfg.wants("json")) emit(join(dir, stem + ".json"), dump(report));
  if (cfg.wants("svg")) {
    emit(join(dir, stem + ".svg"), svg_line_plot("P_R(t)", "t", tr.times, {{"p_right", tr.p_right}},
                                                 cfg.evolve.scheme != "crank_nicolson"));
  }
  std::cout << dump(report);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);
  CLI::App app{"Short-time probability flow from discontinuous wave functions"};
  app.require_subcommand(1);

  MomentsArgs ma;
  auto* moments_cmd = app.add_subcommand("moments", "closed-form moments against adaptive quadrature");
  moments_cmd->add_option("--mass", ma.mass, "particle mass")->check(CLI::PositiveNumber);
  moments_cmd->add_option("--time", ma.time, "elapsed time")->check(CLI::PositiveNumber);
  moments_cmd->add_option("--tol", ma.tol, "quadrature tolerance")->check(CLI::Range(1e-12, 1e-4));
  moments_cmd->add_flag("--json", ma.as_json, "print a JSON report");

  KernelArgs ka;
  auto* kernel_cmd = app.add_subcommand("kernel", "sample the source wave and its far field");
  kernel_cmd->add_option("--mass", ka.mass)->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--time", ka.time)->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--x-max", ka.x_max, "half-width of the window (default 15 sqrt(t/M))");
  kernel_cmd->add_option("--n", ka.n, "number of samples");
  kernel_cmd->add_option("--out", ka.out, "output directory");

  Fig1Args fa;
  auto* fig1_cmd = app.add_subcommand("fig1", "numerical field against the short-time reconstruction");
  fig1_cmd->add_option("--case", fa.which, "truncated or wall_removed")
      ->check(CLI::IsMember({"truncated", "wall_removed"}));
  fig1_cmd->add_option("--t-over-t0", fa.t_over_t0, "time in units of M x0^2");
  fig1_cmd->add_option("--config", fa.config, "grid and output settings")->check(CLI::ExistingFile);
  fig1_cmd->add_option("--n-cells", fa.n_cells, "override the grid size");
  fig1_cmd->add_flag("--svg", fa.svg, "also write an SVG overlay");

  std::string scaling_config;
  auto* scaling_cmd = app.add_subcommand("scaling", "fit the short-time current and compare with the leading law");
  scaling_cmd->add_option("--config", scaling_config)->required()->check(CLI::ExistingFile);

  DecomposeArgs da;
  auto* decompose_cmd = app.add_subcommand("decompose", "first-crossing decomposition residual");
  decompose_cmd->add_option("--config", da.config)->check(CLI::ExistingFile);
  decompose_cmd->add_option("--theta", da.thetas, "angles for the commutator check (repeatable)");
  decompose_cmd->add_option("--time", da.time)->required();
  decompose_cmd->add_option("--n-quad", da.n_quad, "time nodes of the product trapezoid");
  decompose_cmd->add_option("--n-cells", da.n_cells, "coarse grid size; the check also runs at twice this");

  std::string evolve_config;
  auto* evolve_cmd = app.add_subcommand("evolve", "propagate a configured state and record P_R, J and the norm");
  evolve_cmd->add_option("--config", evolve_config)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*moments_cmd) return cmd_moments(ma);
    if (*kernel_cmd) return cmd_kernel(ka);
    if (*fig1_cmd) return cmd_fig1(fa);
    if (*scaling_cmd) return cmd_scaling(scaling_config);
    if (*decompose_cmd) return cmd_decompose(da);
    if (*evolve_cmd) return cmd_evolve(evolve_config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
  return usage;
}
