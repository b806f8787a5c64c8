#include "vortstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "vortstab/errors.hpp"

namespace vortstab::linalg {

bool spectral_less(const cplx& a, const cplx& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

EigenResult eig(const CMatrix& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw InvalidArgument("eig needs a square matrix");
  EigenResult out;
  const auto n = static_cast<std::size_t>(m.rows());
  if (n == 0) return out;

  Eigen::ComplexEigenSolver<CMatrix> solver(m, with_vectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "complex QR iteration did not converge for a " << n << "x" << n
        << " matrix (max iterations " << solver.getMaxIterations() << ")";
    throw ConvergenceError(msg.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return spectral_less(values(static_cast<Eigen::Index>(a)), values(static_cast<Eigen::Index>(b)));
  });

  out.eigenvalues.reserve(n);
  for (auto i : order) out.eigenvalues.push_back(values(static_cast<Eigen::Index>(i)));

  if (with_vectors) {
    CMatrix v(m.rows(), m.cols());
    double worst = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      CVector col = solver.eigenvectors().col(static_cast<Eigen::Index>(order[c]));
      col.normalize();
      v.col(static_cast<Eigen::Index>(c)) = col;
      worst = std::max(worst, (m * col - out.eigenvalues[c] * col).norm());
    }
    out.eigenvectors = std::move(v);
    out.backward_error = worst;
  } else {
    out.backward_error = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * m.norm();
  }
  return out;
}

HermitianEigen eig_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("eig_hermitian needs a square matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigen-iteration did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

LuSolver::LuSolver(const CMatrix& m, double max_condition) {
  if (m.rows() != m.cols()) throw InvalidArgument("solve needs a square matrix");
  lu_.compute(m);
  const double rcond = m.rows() == 0 ? 1.0 : lu_.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition_ <= max_condition)) {
    std::ostringstream msg;
    msg << "matrix is singular to working precision (condition estimate " << condition_ << ")";
    throw SingularSystem(msg.str(), condition_);
  }
}

CMatrix LuSolver::solve(const CMatrix& rhs) const { return lu_.solve(rhs); }

CMatrix solve(const CMatrix& m, const CMatrix& rhs, double max_condition) {
  if (rhs.rows() != m.rows()) throw InvalidArgument("solve: right-hand side has the wrong row count");
  return LuSolver(m, max_condition).solve(rhs);
}

CVector solve(const CMatrix& m, const CVector& rhs, double max_condition) {
  if (rhs.size() != m.rows()) throw InvalidArgument("solve: right-hand side has the wrong length");
  return LuSolver(m, max_condition).solve(rhs);
}

double two_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double max_norm(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Norms norms(const CMatrix& m) { return {two_norm(m), m.norm(), max_norm(m)}; }

}  // namespace vortstab::linalg
