#include <doctest.h>

#include <cmath>

#include "vortstab/errors.hpp"
#include "vortstab/linalg.hpp"

using namespace vortstab;

TEST_CASE("eig on small closed-form matrices") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  auto r = linalg::eig(d);
  REQUIRE(r.eigenvalues.size() == 3);
  CHECK(std::abs(r.eigenvalues[0] - 1.0) < 1e-14);
  CHECK(std::abs(r.eigenvalues[1] - 2.0) < 1e-14);
  CHECK(std::abs(r.eigenvalues[2] - 3.0) < 1e-14);

  CMatrix nil = CMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  for (const auto& z : linalg::eig(nil).eigenvalues) CHECK(std::abs(z) < 1e-14);

  CMatrix companion(2, 2);
  companion << 0.0, 1.0, 1.0, 1.0;  // x^2 - x - 1
  r = linalg::eig(companion, true);
  CHECK(std::abs(r.eigenvalues[0] - (1.0 - std::sqrt(5.0)) / 2.0) < 1e-14);
  CHECK(std::abs(r.eigenvalues[1] - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-14);
  REQUIRE(r.eigenvectors.has_value());
  CHECK(r.backward_error < 1e-13);
}

TEST_CASE("eigenvalues are ordered by real then imaginary part") {
  CMatrix rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  const auto r = linalg::eig(rot);
  CHECK(r.eigenvalues[0].imag() < 0.0);
  CHECK(r.eigenvalues[1].imag() > 0.0);
  CHECK(linalg::spectral_less({1.0, 5.0}, {2.0, -5.0}));
  CHECK(linalg::spectral_less({1.0, -5.0}, {1.0, 5.0}));
}

TEST_CASE("hermitian eigensolver") {
  CMatrix h(2, 2);
  h << 2.0, cplx{0.0, 1.0}, cplx{0.0, -1.0}, 2.0;
  const auto e = linalg::eig_hermitian(h);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(3.0));
  CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("solve") {
  const CMatrix b = CMatrix::Random(3, 2);
  CHECK((linalg::solve(CMatrix(CMatrix::Identity(3, 3)), b) - b).norm() == 0.0);

  CMatrix two(1, 1);
  two(0, 0) = 2.0;
  CVector four(1);
  four(0) = 4.0;
  CHECK(std::abs(linalg::solve(two, four)(0) - 2.0) < 1e-15);

  CMatrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(linalg::solve(singular, CMatrix(CMatrix::Identity(2, 2))), SingularSystem);
  try {
    linalg::solve(singular, CMatrix(CMatrix::Identity(2, 2)));
  } catch (const SingularSystem& e) {
    CHECK(e.condition_estimate() > 1e12);
  }

  const linalg::LuSolver lu(two);
  CHECK(std::abs(lu.solve(CMatrix::Constant(1, 1, 6.0))(0, 0) - 3.0) < 1e-15);
}

TEST_CASE("norms") {
  auto n = linalg::norms(CMatrix::Identity(3, 3));
  CHECK(n.two_norm == doctest::Approx(1.0));
  CHECK(n.frobenius_norm == doctest::Approx(std::sqrt(3.0)));
  CHECK(n.max_norm == doctest::Approx(1.0));

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = cplx{0.0, -4.0};
  n = linalg::norms(d);
  CHECK(n.two_norm == doctest::Approx(4.0));
  CHECK(n.frobenius_norm == doctest::Approx(5.0));
  CHECK(n.max_norm == doctest::Approx(4.0));

  n = linalg::norms(CMatrix::Zero(4, 4));
  CHECK(n.two_norm == 0.0);
  CHECK(n.frobenius_norm == 0.0);
  CHECK(n.max_norm == 0.0);
}
