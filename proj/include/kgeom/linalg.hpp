#pragma once

#include <Eigen/Dense>
#include <complex>

namespace kgeom {

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

/// Lower-triangular Cholesky factor of a Hermitian matrix. Throws
/// NotPositiveDefinite when a pivot drops to 1e-12 or below (the engine-wide
/// pivot tolerance).
MatrixXcd cholesky_factor(const MatrixXcd& a);

/// Inverse of a Hermitian positive definite matrix through its Cholesky
/// factor.
MatrixXcd hermitian_inverse(const MatrixXcd& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const MatrixXcd& a);

/// Eigenvalue range of the Hermitian pencil (a, b) with b positive definite:
/// generalized eigenvalues of a v = lambda b v.
std::pair<double, double> generalized_eigen_range(const MatrixXcd& a, const MatrixXcd& b);

/// Max absolute entry.
double max_abs(const MatrixXcd& a);

}  // namespace kgeom
