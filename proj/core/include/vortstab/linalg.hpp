#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace vortstab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace linalg {

struct EigenResult {
  /// Sorted by real part, then imaginary part.
  std::vector<cplx> eigenvalues;
  /// Unit-norm columns matching `eigenvalues`, when requested.
  std::optional<CMatrix> eigenvectors;
  /// max_i ||M v_i - l_i v_i|| with vectors, else n * eps * ||M||_F.
  double backward_error = 0.0;
};

/// Dense complex eigen-decomposition. Throws ConvergenceError on QR failure.
EigenResult eig(const CMatrix& m, bool with_vectors = false);

/// Eigen-decomposition of a Hermitian matrix (only the lower triangle is read).
/// Eigenvalues ascending, columns of `vectors` orthonormal.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};
HermitianEigen eig_hermitian(const CMatrix& m);

/// LU solve with a reciprocal-condition check; throws SingularSystem when the
/// condition estimate exceeds `max_condition`.
CMatrix solve(const CMatrix& m, const CMatrix& rhs, double max_condition = 1e12);
CVector solve(const CMatrix& m, const CVector& rhs, double max_condition = 1e12);

/// LU factorization reused across right-hand sides.
class LuSolver {
 public:
  explicit LuSolver(const CMatrix& m, double max_condition = 1e12);
  CMatrix solve(const CMatrix& rhs) const;
  double condition_estimate() const noexcept { return condition_; }

 private:
  Eigen::PartialPivLU<CMatrix> lu_;
  double condition_ = 0.0;
};

struct Norms {
  double two_norm = 0.0;
  double frobenius_norm = 0.0;
  double max_norm = 0.0;
};

Norms norms(const CMatrix& m);
double two_norm(const CMatrix& m);
double max_norm(const CMatrix& m);

/// Deterministic ordering used for every eigenvalue list.
bool spectral_less(const cplx& a, const cplx& b);

}  // namespace linalg
}  // namespace vortstab
