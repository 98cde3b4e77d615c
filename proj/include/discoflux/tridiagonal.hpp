#pragma once

// Tridiagonal linear solves and the symmetric tridiagonal eigenproblem.

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace discoflux {

/// Thomas algorithm for sub/diag/sup tridiagonal systems, any scalar type.
/// sub[i] couples row i+1 to column i, sup[i] couples row i to column i+1.
/// Throws std::runtime_error on a vanishing pivot.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> thomas_solve(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& sub,
                                                      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
                                                      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& sup,
                                                      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = diag.size();
  if (rhs.size() != n || sub.size() != n - 1 || sup.size() != n - 1) {
    throw std::invalid_argument("thomas_solve: size mismatch");
  }
  Vec c(n), d(n);
  Scalar pivot = diag[0];
  if (std::abs(pivot) == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
  c[0] = n > 1 ? sup[0] / pivot : Scalar(0);
  d[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i - 1] * c[i - 1];
    if (std::abs(pivot) == 0.0 || !std::isfinite(std::abs(pivot))) {
      throw std::runtime_error("thomas_solve: pivot breakdown");
    }
    c[i] = i + 1 < n ? sup[i] / pivot : Scalar(0);
    d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

/// Pre-factored Thomas solver for repeated solves with one matrix (Crank-Nicolson).
template <typename Scalar>
class ThomasFactor {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ThomasFactor(const Vec& sub, const Vec& diag, const Vec& sup) : sub_(sub) {
    const Eigen::Index n = diag.size();
    if (sub.size() != n - 1 || sup.size() != n - 1) throw std::invalid_argument("ThomasFactor: size mismatch");
    c_.resize(n);
    inv_pivot_.resize(n);
    Scalar pivot = diag[0];
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i > 0) pivot = diag[i] - sub[i - 1] * c_[i - 1];
      if (std::abs(pivot) == 0.0 || !std::isfinite(std::abs(pivot))) {
        throw std::runtime_error("ThomasFactor: pivot breakdown");
      }
      inv_pivot_[i] = Scalar(1) / pivot;
      c_[i] = i + 1 < n ? sup[i] * inv_pivot_[i] : Scalar(0);
    }
  }

  void solve_in_place(Vec& x) const {
    const Eigen::Index n = c_.size();
    x[0] *= inv_pivot_[0];
    for (Eigen::Index i = 1; i < n; ++i) x[i] = (x[i] - sub_[i - 1] * x[i - 1]) * inv_pivot_[i];
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c_[i] * x[i + 1];
  }

 private:
  Vec sub_, c_, inv_pivot_;
};

/// Eigenpairs of a real symmetric tridiagonal matrix, eigenvalues ascending,
/// eigenvectors orthonormal columns.
struct TridiagonalEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Sturm-sequence bisection for the eigenvalues and inverse iteration (with
/// reorthogonalization inside clusters of close eigenvalues) for the vectors.
/// O(n^2) work. Throws std::runtime_error if inverse iteration fails to converge.
TridiagonalEigen tridiagonal_eigen(const Eigen::VectorXd& diagonal, const Eigen::VectorXd& off_diagonal,
                                   bool compute_vectors = true);

}  // namespace discoflux
