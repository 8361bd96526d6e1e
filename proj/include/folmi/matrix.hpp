#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace folmi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigenvalues of a square matrix together with the smallest |arg| over the
/// spectrum, arg taken in (-pi, pi]. A zero eigenvalue has arg 0.
struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  double min_abs_arg = 0.0;
};

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Orthonormal basis of the kernel of m, computed by SVD. Singular values
/// below tol * sigma_max are treated as zero. A trivial kernel yields a
/// matrix with zero columns.
Matrix null_space_basis(const Matrix& m, double tol);

Spectrum spectrum(const Matrix& m);

/// True iff the symmetrized matrix has smallest eigenvalue > tol.
/// Throws if m is asymmetric beyond tol relative scale.
bool is_positive_definite(const Matrix& m, double tol);

/// Lyapunov completion: given X, Y symmetric positive definite n x n with
/// [X, I; I, Y] >= -tol, return X_cl = [X, X2; X2', I] of size (n+n_c)
/// whose inverse has leading n x n block equal to Y. X2 X2' = X - Y^{-1}
/// via eigendecomposition; eigenvalues in [-tol, 0) are clipped to zero.
/// If the completed matrix has minimum eigenvalue in [0, tol], a ridge
/// tol*I is added to the trailing block.
Matrix complete_lyapunov(const Matrix& x, const Matrix& y, Index n_c, double tol);

namespace detail {
inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}
}  // namespace detail

}  // namespace folmi
