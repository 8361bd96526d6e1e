#include "folmi/matrix.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace folmi {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix null_space_basis(const Matrix& m, double tol) {
  detail::require(tol > 0, "null_space_basis: tol must be positive");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

Spectrum spectrum(const Matrix& m) {
  detail::require(m.rows() == m.cols(), "spectrum: matrix must be square");
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigenvalue iteration failed");
  Spectrum out;
  out.eigenvalues = es.eigenvalues();
  double mn = M_PI;
  for (Index i = 0; i < out.eigenvalues.size(); ++i) {
    const auto& ev = out.eigenvalues(i);
    mn = std::min(mn, std::abs(std::atan2(ev.imag(), ev.real())));
  }
  out.min_abs_arg = mn;
  return out;
}

bool is_positive_definite(const Matrix& m, double tol) {
  detail::require(m.rows() == m.cols(), "is_positive_definite: matrix must be square");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("is_positive_definite: matrix asymmetric beyond tol");
  Matrix s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > tol;
}

Matrix complete_lyapunov(const Matrix& x, const Matrix& y, Index n_c, double tol) {
  const Index n = x.rows();
  detail::require(x.cols() == n && y.rows() == n && y.cols() == n,
                  "complete_lyapunov: x, y must be square of equal size");
  detail::require(n_c >= n, "complete_lyapunov: n_c must be at least n");
  detail::require(tol > 0, "complete_lyapunov: tol must be positive");
  if (!is_positive_definite(x, 0.0) || !is_positive_definite(y, 0.0))
    throw std::invalid_argument("complete_lyapunov: x and y must be positive definite");

  Matrix coupling(2 * n, 2 * n);
  coupling << x, Matrix::Identity(n, n), Matrix::Identity(n, n), y;
  Eigen::SelfAdjointEigenSolver<Matrix> ces(0.5 * (coupling + coupling.transpose()),
                                            Eigen::EigenvaluesOnly);
  if (ces.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("complete_lyapunov: coupling condition [x, I; I, y] >= 0 violated");

  Matrix d = x - y.inverse();
  d = 0.5 * (d + d.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> des(d);
  Vector w = des.eigenvalues();
  if (w.minCoeff() < -tol)
    throw std::invalid_argument("complete_lyapunov: x - y^{-1} has an eigenvalue below -tol");
  for (Index i = 0; i < w.size(); ++i) w(i) = std::sqrt(std::max(w(i), 0.0));

  Matrix x2 = Matrix::Zero(n, n_c);
  x2.leftCols(n) = des.eigenvectors() * w.asDiagonal();

  Matrix x_cl(n + n_c, n + n_c);
  x_cl << x, x2, x2.transpose(), Matrix::Identity(n_c, n_c);
  Eigen::SelfAdjointEigenSolver<Matrix> es(x_cl, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < tol)
    x_cl.bottomRightCorner(n_c, n_c) += tol * Matrix::Identity(n_c, n_c);
  return x_cl;
}

}  // namespace folmi
