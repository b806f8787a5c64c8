#include <doctest.h>

#include <set>

#include "vortstab/errors.hpp"
#include "vortstab/spectral_grid.hpp"

using namespace vortstab;

TEST_CASE("subspace lattice enumerates n = j + m p") {
  const auto b = build_basis(Subspace{4, 1, 3, 1});
  REQUIRE(b->size() == 3);
  CHECK(b->lattice() == std::vector<int>{-1, 0, 1});
  const auto& s = b->subspace();
  CHECK(s.wavenumber(-1) == -3);
  CHECK(s.wavenumber(0) == 1);
  CHECK(s.wavenumber(1) == 5);
  CHECK(b->index_of_p(0) == 1);
  CHECK(b->index_of_p(2) == -1);
  for (std::size_t i = 0; i < b->size(); ++i) CHECK(b->x_wavenumber(i) == 3);
}

TEST_CASE("full2d counts the grid minus the origin") {
  const auto b = build_basis(Full2D{1, 1});
  CHECK(b->size() == 8);
  CHECK(b->index_of(WaveIndex{0, 0}) == -1);
  CHECK(b->index_of(WaveIndex{2, 0}) == -1);

  const auto& w = b->waves();
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i - 1] < w[i]);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(b->index_of(w[i]) == static_cast<long>(i));

  const auto big = build_basis(Full2D{8, 5});
  CHECK(big->size() == 17 * 11 - 1);
}

TEST_CASE("laplacian eigenvalues") {
  const auto s = build_basis(Subspace{4, 1, 3, 1});
  CHECK(s->laplacian(0) == 18.0);
  CHECK(s->laplacian(1) == 10.0);
  CHECK(s->laplacian(2) == 34.0);

  const auto f = build_basis(Full2D{1, 1});
  CHECK(f->laplacian(static_cast<std::size_t>(f->index_of({1, 0}))) == 1.0);
  CHECK(f->laplacian(static_cast<std::size_t>(f->index_of({1, 1}))) == 2.0);
  CHECK(f->laplacian(static_cast<std::size_t>(f->index_of({-1, 1}))) == 2.0);
}

TEST_CASE("subspace wavenumbers have distinct magnitudes") {
  for (int m : {3, 4, 5, 7, 8}) {
    for (int j = 1; 2 * j <= m; ++j) {
      if (2 * j == m) continue;
      const auto b = build_basis(Subspace{m, j, 1, 6});
      std::set<int> mags;
      for (int p : b->lattice()) mags.insert(std::abs(b->subspace().wavenumber(p)));
      CHECK(mags.size() == b->size());
    }
  }
}

TEST_CASE("invalid truncations are rejected") {
  CHECK_THROWS_AS(validate(Subspace{4, 2, 1, 2}), InvalidArgument);  // j = m/2
  CHECK_THROWS_AS(validate(Subspace{4, 3, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(validate(Subspace{4, 0, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(validate(Subspace{1, 1, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(validate(Subspace{4, 1, 0, 2}), InvalidArgument);
  CHECK_THROWS_AS(validate(Subspace{4, 1, 3, 0}), InvalidArgument);
  CHECK_THROWS_AS(validate(Full2D{0, 3}), InvalidArgument);
  CHECK_THROWS_AS(validate(Full2D{3, -1}), InvalidArgument);
  CHECK_NOTHROW(validate(Subspace{7, 2, 6, 4}));
  CHECK_NOTHROW(validate(Subspace{5, 2, 1, 1}));

  const auto full = build_basis(Full2D{2, 2});
  CHECK_THROWS(full->lattice());
  const auto sub = build_basis(Subspace{4, 1, 3, 2});
  CHECK_THROWS(sub->waves());
}
