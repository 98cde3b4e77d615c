#include "discoflux/fpt.hpp"

#include <cmath>
#include <stdexcept>

#include "discoflux/tridiagonal.hpp"

namespace discoflux {
namespace {

struct Parts {
  Eigen::VectorXcd lhs, rhs;
};

// LHS and RHS of the identity for a left component at n_quad time nodes.
Parts identity_sides(const Eigen::VectorXd& component, const RobinBasis& basis, const SpectralPropagator& full,
                     const Eigen::MatrixXd& u, const Eigen::VectorXd& energies, double t, int n_quad) {
  const Grid1D& grid = full.grid();
  const int n = grid.n_cells();
  const int nl = grid.n_left();
  const double dx = grid.dx();
  const double mass = grid.domain().mass();

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  psi.head(nl) = component.head(nl).cast<cplx>();

  Parts p;
  p.lhs = full.evolve(psi, t);

  // Reduced evolution coefficients and the three edge rows of the basis.
  const Eigen::VectorXd coeff = basis.vectors.transpose() * component.head(nl);
  const Eigen::Index nm = basis.energies.size();
  Eigen::MatrixXd edge(3, nm);
  for (int r = 0; r < 3; ++r) edge.row(r) = basis.vectors.row(nl - 1 - r);

  const double h = t / (n_quad - 1);
  std::vector<cplx> value0(static_cast<std::size_t>(n_quad)), slope0(static_cast<std::size_t>(n_quad));
  for (int j = 0; j < n_quad; ++j) {
    const double tj = j * h;
    cplx v1{0.0}, v2{0.0}, v3{0.0};
    for (Eigen::Index m = 0; m < nm; ++m) {
      const cplx c = coeff[m] * std::polar(1.0, -basis.energies[m] * tj);
      v1 += edge(0, m) * c;
      v2 += edge(1, m) * c;
      v3 += edge(2, m) * c;
    }
    value0[static_cast<std::size_t>(j)] = 1.5 * v1 - 0.5 * v2;
    slope0[static_cast<std::size_t>(j)] = (2.0 * v1 - 3.0 * v2 + v3) / dx;
  }

  // Product trapezoid per full-box mode: traces linear in t1 on each panel,
  // exp(-iE(t - t1)) integrated exactly.
  const cplx i{0.0, 1.0};
  Eigen::VectorXcd coef(n);
  for (Eigen::Index k = 0; k < energies.size(); ++k) {
    const double e = energies[k];
    const double theta = e * h;
    cplx a0, a1;
    if (std::abs(theta) < 1e-2) {
      a1 = 0.5 + i * theta / 3.0 - theta * theta / 8.0;
      a0 = 0.5 + i * theta / 6.0 - theta * theta / 24.0;
    } else {
      const cplx it = i * theta;
      const cplx eit = std::exp(it);
      a1 = eit / it - (eit - 1.0) / (it * it);
      a0 = (eit - 1.0) / it - a1;
    }
    const cplx back = std::polar(1.0, -theta) * a1;
    cplx i0{0.0}, i1{0.0};
    for (int j = 0; j < n_quad; ++j) {
      cplx w{0.0};
      if (j < n_quad - 1) w += a0;
      if (j > 0) w += back;
      w *= h * std::polar(1.0, -e * (t - j * h));
      i0 += w * value0[static_cast<std::size_t>(j)];
      i1 += w * slope0[static_cast<std::size_t>(j)];
    }
    const double gd = (u(nl, k) - u(nl - 1, k)) / (dx * dx);
    const double gv = (u(nl - 1, k) + u(nl, k)) / (2.0 * dx);
    coef[k] = i / (2.0 * mass) * (gd * i0 - gv * i1);
  }

  Eigen::VectorXcd reduced(nm);
  for (Eigen::Index m = 0; m < nm; ++m) reduced[m] = coeff[m] * std::polar(1.0, -basis.energies[m] * t);
  p.rhs = u * coef;
  p.rhs.head(nl) += basis.vectors * reduced;
  return p;
}

}  // namespace

BcAngle alpha_from_component(double value0, double slope0) {
  BcAngle b;
  if (value0 == 0.0 && slope0 == 0.0) {
    b.degenerate = true;
    return b;
  }
  double theta = std::atan2(-value0, slope0);
  if (theta < 0.0) theta += pi;
  if (theta >= pi) theta -= pi;
  b.theta = theta;
  return b;
}

std::pair<cplx, cplx> RobinBasis::traces(const Eigen::VectorXcd& left_field) const {
  const Eigen::Index n = left_field.size();
  if (n < 3) throw std::invalid_argument("traces: need at least three nodes");
  const cplx v1 = left_field[n - 1], v2 = left_field[n - 2], v3 = left_field[n - 3];
  return {1.5 * v1 - 0.5 * v2, (2.0 * v1 - 3.0 * v2 + v3) / dx};
}

RobinBasis robin_eigensolve(const Grid1D& grid, double theta, const Potential& potential) {
  if (!(theta >= 0.0 && theta < pi)) throw std::invalid_argument("robin_eigensolve: theta must lie in [0, pi)");
  const int nl = grid.n_left();
  const double dx = grid.dx();
  const double denom = 2.0 * std::sin(theta) + dx * std::cos(theta);
  if (std::abs(denom) < 1e-12) throw std::invalid_argument("robin_eigensolve: closure singular at this theta and dx");
  RobinBasis basis;
  basis.theta = theta;
  basis.n_left = nl;
  basis.dx = dx;
  basis.ghost_ratio = (2.0 * std::sin(theta) - dx * std::cos(theta)) / denom;

  const double c = -1.0 / (2.0 * grid.domain().mass() * dx * dx);
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(nl, -2.0 * c);
  for (int i = 0; i < nl; ++i) diag[i] += potential(grid.x(i));
  diag[0] += -c;
  diag[nl - 1] += basis.ghost_ratio * c;
  const Eigen::VectorXd off = Eigen::VectorXd::Constant(nl - 1, c);
  TridiagonalEigen eig = tridiagonal_eigen(diag, off);
  basis.energies = std::move(eig.values);
  basis.vectors = std::move(eig.vectors);
  return basis;
}

Eigen::VectorXcd apply_projector(const RobinBasis& basis, const Eigen::VectorXcd& f) {
  const int nl = basis.n_left;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.size());
  const Eigen::VectorXcd c = basis.vectors.transpose() * f.head(nl);
  out.head(nl) = basis.vectors * c;
  return out;
}

cplx commutator_element(const std::function<cplx(double)>& f, const std::function<cplx(double)>& g, double theta,
                        const Grid1D& grid, const Potential& potential) {
  const double a = grid.domain().a();
  if (std::abs(f(a)) > 1e-10 || std::abs(g(a)) > 1e-10) {
    throw std::invalid_argument("commutator_element: test functions must vanish at a");
  }
  const int n = grid.n_cells();
  Eigen::VectorXcd fv(n), gv(n);
  for (int i = 0; i < n; ++i) {
    fv[i] = f(grid.x(i));
    gv[i] = g(grid.x(i));
  }
  const RobinBasis basis = robin_eigensolve(grid, theta, potential);
  const DiscreteHamiltonian h(grid, potential);
  const Eigen::VectorXcd hpg = h.apply(apply_projector(basis, gv));
  const Eigen::VectorXcd pf = apply_projector(basis, fv);
  const Eigen::VectorXcd hg = h.apply(gv);
  return grid.dx() * (fv.dot(hpg) - pf.dot(hg));
}

cplx commutator_boundary_formula(cplx f0, cplx df0, cplx g0, cplx dg0, double mass) {
  return -(std::conj(df0) * g0 - std::conj(f0) * dg0) / (2.0 * mass);
}

DecompositionResult decomposition_residual(const Eigen::VectorXd& component, double theta, const Grid1D& grid,
                                           double t, int n_quad, const Potential& potential) {
  if (!(t > 0.0)) throw std::invalid_argument("decomposition_residual: t must be positive");
  if (n_quad < 4) throw std::invalid_argument("decomposition_residual: n_quad must be at least 4");
  if (component.size() != grid.n_cells()) throw std::invalid_argument("decomposition_residual: grid mismatch");
  if (component.tail(grid.n_right()).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("decomposition_residual: component must vanish on the right cells");
  }
  const RobinBasis basis = robin_eigensolve(grid, theta, potential);
  const SpectralPropagator full(grid, potential);
  const Eigen::MatrixXd u = full.eigenvectors();
  const Eigen::VectorXd energies = full.energies();

  DecompositionResult r;
  Parts p = identity_sides(component, basis, full, u, energies, t, n_quad);
  const double scale = p.lhs.norm();
  r.residual = scale > 0.0 ? (p.lhs - p.rhs).norm() / scale : 0.0;
  const Parts half = identity_sides(component, basis, full, u, energies, t, n_quad / 2);
  r.residual_half_quad = scale > 0.0 ? (half.lhs - half.rhs).norm() / scale : 0.0;
  r.under_resolved = std::abs(r.residual_half_quad - r.residual) > 0.5 * r.residual;
  r.lhs = std::move(p.lhs);
  r.rhs = std::move(p.rhs);
  r.rhs_half_quad = std::move(half.rhs);
  return r;
}

StateDecomposition decompose_state(const PiecewiseState& state, const Grid1D& grid, double t, int n_quad,
                                   std::optional<double> theta_override, const Potential& potential) {
  if (state.norm_right() > 1e-24) throw std::invalid_argument("decompose_state: right part must vanish");
  const BoundaryData& bd = state.boundary();
  StateDecomposition d;
  d.theta1 = alpha_from_component(bd.psi_minus.real(), bd.dpsi_minus.real());
  d.theta2 = alpha_from_component(bd.psi_minus.imag(), bd.dpsi_minus.imag());
  if (theta_override) d.theta1.theta = d.theta2.theta = *theta_override;

  const Eigen::VectorXcd psi = state.sample(grid);
  Eigen::VectorXcd lhs = Eigen::VectorXcd::Zero(psi.size());
  Eigen::VectorXcd rhs = lhs, rhs_half = lhs;
  const cplx i{0.0, 1.0};
  for (int part = 0; part < 2; ++part) {
    const Eigen::VectorXd comp = part == 0 ? Eigen::VectorXd(psi.real()) : Eigen::VectorXd(psi.imag());
    if (comp.cwiseAbs().maxCoeff() == 0.0) continue;
    const double theta = part == 0 ? d.theta1.theta : d.theta2.theta;
    const DecompositionResult full = decomposition_residual(comp, theta, grid, t, n_quad, potential);
    const cplx w = part == 0 ? cplx{1.0} : i;
    lhs += w * full.lhs;
    rhs += w * full.rhs;
    rhs_half += w * full.rhs_half_quad;
  }
  const double scale = lhs.norm();
  d.residual = scale > 0.0 ? (lhs - rhs).norm() / scale : 0.0;
  d.residual_half_quad = scale > 0.0 ? (lhs - rhs_half).norm() / scale : 0.0;
  d.under_resolved = std::abs(d.residual_half_quad - d.residual) > 0.5 * d.residual;
  return d;
}

}  // namespace discoflux
