#pragma once

// Reference computations used only by tests. Each one takes a different
// numerical route from the library code it checks.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "bsk/block.hpp"

namespace bsk::oracle {

/// Largest singular value by power iteration on A^H A.
inline double power_iteration_norm(const Matrix& A, int iterations = 5000) {
  const Matrix G = A.adjoint() * A;
  Vector v = Vector::Ones(A.cols());
  v.normalize();
  double lambda = 0.0;
  for (int i = 0; i < iterations; ++i) {
    Vector w = G * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

/// Largest singular value from the eigenvalues of the Hermitian A^H A.
inline double eigen_spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.adjoint() * A);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Moore-Penrose pseudo-inverse from an explicit SVD.
inline Matrix svd_pinv(const Matrix& A, double rel_tol = 1e-12) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Matrix Sinv = Matrix::Zero(A.cols(), A.rows());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) Sinv(i, i) = 1.0 / s(i);
  return svd.matrixV() * Sinv * svd.matrixU().adjoint();
}

/// Numerical rank from singular values.
inline Index svd_rank(const Matrix& A, double rel_tol = 1e-10) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

/// rho_c written out with eigenvalue-based block norms.
inline double rho_c_reference(const Matrix& A, Index d) {
  double best = 0.0;
  for (Index l = 0; l < A.cols() / d; ++l) {
    double sum = 0.0;
    for (Index r = 0; r < A.rows() / d; ++r)
      sum += eigen_spectral_norm(A.block(r * d, l * d, d, d));
    best = std::max(best, sum);
  }
  return best;
}

/// Mixed norm by explicit summation over entries.
inline double mixed_l21_reference(const Vector& x, Index d) {
  double total = 0.0;
  for (Index l = 0; l < x.size() / d; ++l) {
    double s = 0.0;
    for (Index i = 0; i < d; ++i) s += std::norm(x(l * d + i));
    total += std::sqrt(s);
  }
  return total;
}

inline double mixed_l2inf_reference(const Vector& x, Index d) {
  double best = 0.0;
  for (Index l = 0; l < x.size() / d; ++l) {
    double s = 0.0;
    for (Index i = 0; i < d; ++i) s += std::norm(x(l * d + i));
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

}  // namespace bsk::oracle
