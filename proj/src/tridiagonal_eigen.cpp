#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "discoflux/tridiagonal.hpp"

namespace discoflux {
namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Number of eigenvalues strictly below x (Sturm sequence of LDL^T pivots).
int sturm_count(const Eigen::VectorXd& d, const Eigen::VectorXd& e2, double x, double pivmin) {
  int count = 0;
  double q = d[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (Eigen::Index i = 1; i < d.size(); ++i) {
    q = d[i] - x - e2[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

// LU with partial pivoting of T - lambda I, then solves with it. Pivots
// smaller than pivmin (here eps ||T||) are replaced by +-pivmin, which keeps a
// solve at an almost exact eigenvalue finite (growth at most ~1/eps).
class ShiftedLU {
 public:
  ShiftedLU(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double lambda, double pivmin)
      : n_(d.size()), d_(d.array() - lambda), du_(e), dl_(e), du2_(Eigen::VectorXd::Zero(std::max<Eigen::Index>(n_ - 2, 0))),
        swap_(n_ > 1 ? n_ - 1 : 0, false), pivmin_(pivmin) {
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (std::abs(d_[i]) < pivmin_) d_[i] = d_[i] < 0.0 ? -pivmin_ : pivmin_;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swap_[i] = true;
      }
    }
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (std::abs(d_[i]) < pivmin_) d_[i] = d_[i] < 0.0 ? -pivmin_ : pivmin_;
    }
  }

  void solve(Eigen::VectorXd& b) const {
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (!swap_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (Eigen::Index i = n_ - 3; i >= 0; --i) {
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
  }

 private:
  Eigen::Index n_;
  Eigen::VectorXd d_, du_, dl_, du2_;
  std::vector<bool> swap_;
  double pivmin_;
};

double residual_norm(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double lambda, const Eigen::VectorXd& v) {
  const Eigen::Index n = d.size();
  Eigen::VectorXd r = (d.array() - lambda).matrix().cwiseProduct(v);
  if (n > 1) {
    r.head(n - 1) += e.cwiseProduct(v.tail(n - 1));
    r.tail(n - 1) += e.cwiseProduct(v.head(n - 1));
  }
  return r.norm();
}

}  // namespace

TridiagonalEigen tridiagonal_eigen(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& off_diagonal,
                                   bool compute_vectors) {
  const Eigen::Index n = diagonal.size();
  if (n == 0) throw std::invalid_argument("tridiagonal_eigen: empty matrix");
  if (off_diagonal.size() != n - 1) throw std::invalid_argument("tridiagonal_eigen: size mismatch");

  // Gershgorin bounds.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off_diagonal[i - 1]);
    if (i + 1 < n) r += std::abs(off_diagonal[i]);
    lo = std::min(lo, diagonal[i] - r);
    hi = std::max(hi, diagonal[i] + r);
  }
  const double tnorm = std::max(std::abs(lo), std::abs(hi));
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, tnorm * tnorm);
  const double pad = 2.0 * eps * tnorm + 2.0 * pivmin;
  lo -= pad;
  hi += pad;

  const Eigen::VectorXd e2 = off_diagonal.array().square();
  TridiagonalEigen out;
  out.values.resize(n);

  // Bisection for each index k, reusing brackets: every Sturm count taken
  // while hunting eigenvalue k tightens the brackets of later indices.
  std::vector<double> lower(n, lo), upper(n, hi);
  for (Eigen::Index k = 0; k < n; ++k) {
    double a = lower[k];
    double b = upper[k];
    if (k > 0) a = std::max(a, out.values[k - 1]);
    while (b - a > 2.0 * eps * std::max(std::abs(a), std::abs(b)) + pivmin) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const int count = sturm_count(diagonal, e2, mid, pivmin);
      if (count > k) {
        b = mid;
        for (Eigen::Index j = k + 1; j < std::min<Eigen::Index>(count, n); ++j) upper[j] = std::min(upper[j], mid);
      } else {
        a = mid;
        for (Eigen::Index j = count; j < n; ++j) {
          if (lower[j] >= mid) break;
          lower[j] = mid;
        }
      }
    }
    out.values[k] = 0.5 * (a + b);
  }
  if (!compute_vectors) return out;

  out.vectors.resize(n, n);
  if (n == 1) {
    out.vectors(0, 0) = 1.0;
    return out;
  }
  const double cluster_gap = 1e-5 * tnorm;
  const double separation = 10.0 * eps * tnorm;
  const double target = 10.0 * static_cast<double>(n) * eps * tnorm + pivmin;
  Eigen::Index cluster_start = 0;
  double shifted_prev = -std::numeric_limits<double>::infinity();

  for (Eigen::Index k = 0; k < n; ++k) {
    double lambda = out.values[k];
    if (k > 0 && out.values[k] - out.values[k - 1] >= cluster_gap) cluster_start = k;
    // Perturb coincident eigenvalues so inverse iteration sees distinct shifts.
    if (lambda - shifted_prev < separation) lambda = shifted_prev + separation;
    shifted_prev = lambda;

    const ShiftedLU lu(diagonal, off_diagonal, lambda, std::max(eps * tnorm, pivmin));
    std::mt19937 rng(static_cast<unsigned>(k) * 2654435761u + 12345u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uni(rng);
    v.normalize();

    bool converged = false;
    for (int iter = 0; iter < 8; ++iter) {
      for (Eigen::Index j = cluster_start; j < k; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
      lu.solve(v);
      for (Eigen::Index j = cluster_start; j < k; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
      const double norm = v.norm();
      if (!std::isfinite(norm) || norm == 0.0) throw std::runtime_error("tridiagonal_eigen: inverse iteration broke down");
      v /= norm;
      if (iter >= 1 && residual_norm(diagonal, off_diagonal, out.values[k], v) <= target) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("tridiagonal_eigen: inverse iteration did not converge");

    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

}  // namespace discoflux
