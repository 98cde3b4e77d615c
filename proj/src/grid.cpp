#include "discoflux/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace discoflux {

BoxDomain::BoxDomain(double a, double b, double mass) : a_(a), b_(b), mass_(mass) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("box domain needs finite a < 0 < b");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("mass must be positive");
}

Grid1D::Grid1D(const BoxDomain& domain, int n_cells) : domain_(domain), n_cells_(n_cells) {
  if (n_cells < 64) throw std::invalid_argument("grid needs at least 64 cells");
  dx_ = domain.length() / n_cells;
  const double cells_left = -domain.a() / dx_;
  n_left_ = static_cast<int>(std::lround(cells_left));
  if (std::abs(cells_left - n_left_) > 1e-9 * std::max(1.0, cells_left) || n_left_ <= 0 || n_left_ >= n_cells) {
    throw std::invalid_argument("x = 0 does not fall on a cell edge of this grid");
  }
}

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd x(n_cells_);
  for (int i = 0; i < n_cells_; ++i) x[i] = this->x(i);
  return x;
}

bool Grid1D::resolves(double t_min) const { return dx_ <= std::sqrt(t_min / domain_.mass()) / 8.0; }

bool Potential::is_zero() const {
  switch (kind) {
    case Kind::zero: return true;
    case Kind::harmonic: return kappa == 0.0;
    case Kind::step: return height == 0.0;
    case Kind::tabulated:
      return std::all_of(table_v.begin(), table_v.end(), [](double v) { return v == 0.0; });
  }
  return false;
}

double Potential::operator()(double x) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::harmonic: return 0.5 * kappa * x * x;
    case Kind::step: return x > position ? height : 0.0;
    case Kind::tabulated: {
      if (table_x.empty()) return 0.0;
      if (x <= table_x.front()) return table_v.front();
      if (x >= table_x.back()) return table_v.back();
      const auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - table_x.begin());
      const double s = (x - table_x[j - 1]) / (table_x[j] - table_x[j - 1]);
      return (1.0 - s) * table_v[j - 1] + s * table_v[j];
    }
  }
  return 0.0;
}

Eigen::VectorXd Potential::sample(const Grid1D& grid) const {
  Eigen::VectorXd v(grid.n_cells());
  for (int i = 0; i < grid.n_cells(); ++i) v[i] = (*this)(grid.x(i));
  return v;
}

Potential::Kind potential_kind_from_string(const std::string& name) {
  if (name == "zero") return Potential::Kind::zero;
  if (name == "harmonic") return Potential::Kind::harmonic;
  if (name == "step") return Potential::Kind::step;
  if (name == "tabulated") return Potential::Kind::tabulated;
  throw std::invalid_argument("unknown potential kind: " + name);
}

DiscreteHamiltonian::DiscreteHamiltonian(const Grid1D& grid, const Potential& potential) {
  const int n = grid.n_cells();
  const double c = -1.0 / (2.0 * grid.domain().mass() * grid.dx() * grid.dx());
  diagonal = Eigen::VectorXd::Constant(n, -2.0 * c) + potential.sample(grid);
  diagonal[0] += -c;
  diagonal[n - 1] += -c;
  off_diagonal = Eigen::VectorXd::Constant(n - 1, c);
}

Eigen::VectorXcd DiscreteHamiltonian::apply(const Eigen::VectorXcd& v) const {
  const Eigen::Index n = diagonal.size();
  Eigen::VectorXcd out = diagonal.cwiseProduct(v);
  out.head(n - 1) += off_diagonal.cwiseProduct(v.tail(n - 1));
  out.tail(n - 1) += off_diagonal.cwiseProduct(v.head(n - 1));
  return out;
}

double p_right(const Eigen::VectorXcd& psi, const Grid1D& grid) {
  return grid.dx() * psi.tail(grid.n_right()).squaredNorm();
}

double grid_norm(const Eigen::VectorXcd& psi, const Grid1D& grid) { return grid.dx() * psi.squaredNorm(); }

double edge_flux(const Eigen::VectorXcd& psi, const Grid1D& grid) {
  const int l = grid.n_left();
  return std::imag(std::conj(psi[l - 1]) * psi[l]) / (grid.domain().mass() * grid.dx());
}

}  // namespace discoflux
