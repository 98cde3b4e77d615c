#include "discoflux/propagate.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>

namespace discoflux {

SpectralPropagator::SpectralPropagator(const Grid1D& grid, const Potential& potential) : grid_(grid) {
  const int n = grid.n_cells();
  const double scale = 1.0 / (grid.domain().mass() * grid.dx() * grid.dx());
  if (potential.is_zero()) {
    extended_energies_.resize(2 * n);
    for (int k = 0; k < 2 * n; ++k) extended_energies_[k] = scale * (1.0 - std::cos(pi * k / n));
  } else {
    const DiscreteHamiltonian h(grid, potential);
    dense_ = tridiagonal_eigen(h.diagonal, h.off_diagonal);
  }
}

Eigen::VectorXcd SpectralPropagator::evolve(const Eigen::VectorXcd& psi, double t) const {
  const int n = grid_.n_cells();
  if (psi.size() != n) throw std::invalid_argument("evolve: field does not match the grid");
  if (!uses_fft()) {
    Eigen::VectorXcd c = dense_.vectors.transpose() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -dense_.values[k] * t);
    return dense_.vectors * c;
  }
  // The odd extension [psi, -reverse(psi)] is periodic with period 2n and its
  // DFT only contains the sine modes, each an eigenvector with energy E_k.
  std::vector<cplx> y(2 * n), spectrum;
  for (int i = 0; i < n; ++i) {
    y[i] = psi[i];
    y[2 * n - 1 - i] = -psi[i];
  }
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, y);
  for (int k = 0; k < 2 * n; ++k) spectrum[k] *= std::polar(1.0, -extended_energies_[k] * t);
  fft.inv(y, spectrum);
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) out[i] = y[i];
  return out;
}

Eigen::VectorXd SpectralPropagator::energies() const {
  if (!uses_fft()) return dense_.values;
  const int n = grid_.n_cells();
  return extended_energies_.segment(1, n);
}

Eigen::MatrixXd SpectralPropagator::eigenvectors() const {
  if (!uses_fft()) return dense_.vectors;
  const int n = grid_.n_cells();
  Eigen::MatrixXd u(n, n);
  const double amp = std::sqrt(2.0 / n);
  for (int k = 1; k <= n; ++k) {
    const double a = k == n ? amp / std::sqrt(2.0) : amp;
    for (int i = 0; i < n; ++i) u(i, k - 1) = a * std::sin(pi * k * (i + 0.5) / n);
  }
  return u;
}

std::vector<double> log_time_ladder(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !(t_max >= t_min) || n < 1) throw std::invalid_argument("log_time_ladder: bad range");
  std::vector<double> t(static_cast<std::size_t>(n));
  if (n == 1) {
    t[0] = t_min;
    return t;
  }
  const double step = std::log(t_max / t_min) / (n - 1);
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_min * std::exp(step * i);
  t.back() = t_max;
  return t;
}

EvolutionTrace spectral_propagate(const SpectralPropagator& propagator, const Eigen::VectorXcd& psi0,
                                  const std::vector<double>& times) {
  const Grid1D& grid = propagator.grid();
  EvolutionTrace trace;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (!(t > 0.0)) throw std::invalid_argument("spectral_propagate: times must be positive");
    const double h = t / 20.0;
    const Eigen::VectorXcd psi = propagator.evolve(psi0, t);
    const double forward = p_right(propagator.evolve(psi0, t + h), grid);
    const double backward = p_right(propagator.evolve(psi0, t - h), grid);
    trace.times.push_back(t);
    trace.p_right.push_back(p_right(psi, grid));
    trace.current.push_back((forward - backward) / (2.0 * h));
    trace.norm.push_back(grid_norm(psi, grid));
    if (k + 1 == times.size()) trace.final_field = psi;
  }
  return trace;
}

EvolutionTrace spectral_propagate(const PiecewiseState& state, const Grid1D& grid, const std::vector<double>& times,
                                  const Potential& potential) {
  const SpectralPropagator propagator(grid, potential);
  return spectral_propagate(propagator, state.sample(grid), times);
}

EvolutionTrace crank_nicolson_propagate(const Eigen::VectorXcd& psi0, const Grid1D& grid, double dt, int n_steps,
                                        int record_every, const Potential& potential) {
  if (!(dt > 0.0) || n_steps < 1 || record_every < 1) throw std::invalid_argument("crank_nicolson: bad step parameters");
  const DiscreteHamiltonian h(grid, potential);
  const int n = grid.n_cells();
  const cplx half{0.0, 0.5 * dt};
  const Eigen::VectorXcd off = half * h.off_diagonal.cast<cplx>();
  const Eigen::VectorXcd diag = Eigen::VectorXcd::Ones(n) + half * h.diagonal.cast<cplx>();
  const ThomasFactor<cplx> solver(off, diag, off);

  EvolutionTrace trace;
  trace.accuracy_warning = dt > grid.domain().mass() * grid.dx() * grid.dx();
  std::vector<double> pr(static_cast<std::size_t>(n_steps) + 1);
  std::vector<int> recorded;
  Eigen::VectorXcd psi = psi0;
  pr[0] = p_right(psi, grid);
  auto record = [&](int step) {
    recorded.push_back(step);
    trace.times.push_back(step * dt);
    trace.p_right.push_back(pr[static_cast<std::size_t>(step)]);
    trace.norm.push_back(grid_norm(psi, grid));
  };
  record(0);
  for (int step = 1; step <= n_steps; ++step) {
    Eigen::VectorXcd rhs = psi - half * h.apply(psi);
    solver.solve_in_place(rhs);
    psi.swap(rhs);
    pr[static_cast<std::size_t>(step)] = p_right(psi, grid);
    if (step % record_every == 0 || step == n_steps) record(step);
  }
  for (int step : recorded) {
    const auto s = static_cast<std::size_t>(step);
    double j;
    if (step == 0) {
      j = (pr[1] - pr[0]) / dt;
    } else if (step == n_steps) {
      j = (pr[s] - pr[s - 1]) / dt;
    } else {
      j = (pr[s + 1] - pr[s - 1]) / (2.0 * dt);
    }
    trace.current.push_back(j);
  }
  trace.final_field = psi;
  return trace;
}

EvolutionTrace crank_nicolson_propagate(const PiecewiseState& state, const Grid1D& grid, double dt, int n_steps,
                                        int record_every, const Potential& potential) {
  return crank_nicolson_propagate(state.sample(grid), grid, dt, n_steps, record_every, potential);
}

double l2_distance(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, const Grid1D& grid) {
  return std::sqrt(grid.dx() * (u - v).squaredNorm());
}

Fig1Case fig1_case_from_string(const std::string& name) {
  if (name == "truncated") return Fig1Case::truncated;
  if (name == "wall_removed") return Fig1Case::wall_removed;
  throw std::invalid_argument("unknown fig1 case: " + name);
}

std::string to_string(Fig1Case c) { return c == Fig1Case::truncated ? "truncated" : "wall_removed"; }

Fig1Curves fig1_curves(Fig1Case which, double t_over_t0, const Grid1D& grid) {
  if (!(t_over_t0 > 0.0 && t_over_t0 <= 0.1)) throw std::invalid_argument("fig1: t/t0 must lie in (0, 0.1]");
  const double x0 = 1.0;
  const PiecewiseState state =
      which == Fig1Case::truncated ? truncated_well(x0, 0.75, grid.domain()) : wall_removed(x0, grid.domain());
  Fig1Curves c;
  c.which = which;
  c.time = t_over_t0 * state.t0();
  c.threshold = which == Fig1Case::truncated ? 0.02 : 0.10;
  const SpectralPropagator propagator(grid);
  c.numerical = propagator.evolve(state.sample(grid), c.time);
  const Eigen::VectorXd nodes = grid.nodes();
  c.x.assign(nodes.data(), nodes.data() + nodes.size());
  const ShortTimeField field = short_time_state(state, c.time, c.x);
  c.terms = field.terms;
  Eigen::VectorXcd approx(grid.n_cells());
  for (int i = 0; i < grid.n_cells(); ++i) approx[i] = c.terms[static_cast<std::size_t>(i)].total();
  c.l2_distance = l2_distance(c.numerical, approx, grid);
  return c;
}

}  // namespace discoflux
