#include "kgeom/linalg.hpp"

#include <cmath>

#include "kgeom/errors.hpp"

namespace kgeom {

namespace {
constexpr double kPivotTolerance = 1e-12;
}

MatrixXcd cholesky_factor(const MatrixXcd& a) {
  const auto n = a.rows();
  MatrixXcd l = MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::complex<double> diag = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
    const double pivot = diag.real();
    if (!(pivot > kPivotTolerance))
      throw NotPositiveDefinite("Cholesky pivot " + std::to_string(pivot) + " at index " +
                                std::to_string(j));
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      std::complex<double> s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
  }
  return l;
}

MatrixXcd hermitian_inverse(const MatrixXcd& a) {
  const MatrixXcd l = cholesky_factor(a);
  const auto n = a.rows();
  const MatrixXcd linv =
      l.triangularView<Eigen::Lower>().solve(MatrixXcd::Identity(n, n));
  return linv.adjoint() * linv;
}

double min_eigenvalue(const MatrixXcd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success)
    throw Error("eigen-failure", "self-adjoint eigensolver did not converge");
  return solver.eigenvalues().minCoeff();
}

std::pair<double, double> generalized_eigen_range(const MatrixXcd& a, const MatrixXcd& b) {
  if (a.rows() == 0) return {0.0, 0.0};
  // Reduce through the Cholesky factor of b so the pivot-tolerance policy is
  // shared with every other positive-definiteness check.
  const MatrixXcd l = cholesky_factor(b);
  const auto n = a.rows();
  const MatrixXcd linv =
      l.triangularView<Eigen::Lower>().solve(MatrixXcd::Identity(n, n));
  const MatrixXcd reduced = linv * a * linv.adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(reduced);
  if (solver.info() != Eigen::Success)
    throw Error("eigen-failure", "self-adjoint eigensolver did not converge");
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

double max_abs(const MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

}  // namespace kgeom
