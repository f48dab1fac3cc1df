#pragma once

#include <Eigen/Sparse>

#include <cmath>

namespace polymix {

template <typename Scalar>
struct CgResult {
  int iterations = 0;
  Scalar relative_residual = 0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// (semi-)definite sparse matrix. Stops when ||b - A x|| <= tol ||b||; x is
/// used as the initial guess.
template <typename Scalar, int Options, typename Index>
CgResult<Scalar> conjugate_gradient(const Eigen::SparseMatrix<Scalar, Options, Index>& A,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                    Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Scalar tol,
                                    int max_iterations) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  CgResult<Scalar> res;
  const Scalar b_norm = b.norm();
  if (b_norm == 0) {
    x.setZero();
    res.converged = true;
    return res;
  }

  Vector inv_diag = A.diagonal();
  for (Eigen::Index i = 0; i < inv_diag.size(); ++i)
    inv_diag[i] = inv_diag[i] > 0 ? 1 / inv_diag[i] : 1;

  Vector r = b - A * x;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  Vector q(b.size());
  Scalar rz = r.dot(z);
  res.relative_residual = r.norm() / b_norm;
  while (res.relative_residual > tol && res.iterations < max_iterations) {
    q.noalias() = A * p;
    const Scalar alpha = rz / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    ++res.iterations;
    res.relative_residual = r.norm() / b_norm;
    z = inv_diag.cwiseProduct(r);
    const Scalar rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  // Report the true residual rather than the recursively updated one.
  res.relative_residual = (b - A * x).norm() / b_norm;
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace polymix
