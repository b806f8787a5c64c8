#include "vortstab/spectral_grid.hpp"

#include <cstdlib>
#include <type_traits>
#include <set>
#include <string>

#include "vortstab/errors.hpp"

namespace vortstab {

namespace {

void validate_full(const Full2D& f) {
  if (f.n1 <= 0 || f.n2 <= 0) {
    throw InvalidArgument("Full2D truncation needs N1 > 0 and N2 > 0 (got N1=" +
                          std::to_string(f.n1) + ", N2=" + std::to_string(f.n2) + ")");
  }
}

void validate_subspace(const Subspace& s) {
  if (s.m < 2) throw InvalidArgument("Subspace truncation needs m >= 2, got " + std::to_string(s.m));
  if (s.j < 1 || s.j > s.m / 2) {
    throw InvalidArgument("Subspace truncation needs j in [1, floor(m/2)] = [1, " +
                          std::to_string(s.m / 2) + "], got " + std::to_string(s.j));
  }
  if (s.m % 2 == 0 && 2 * s.j == s.m) {
    throw InvalidArgument("Subspace truncation with even m excludes j = m/2 (sin(n y) modes collide up to sign)");
  }
  if (s.k <= 0) throw InvalidArgument("Subspace truncation needs k > 0, got " + std::to_string(s.k));
  if (s.p_max <= 0) throw InvalidArgument("Subspace truncation needs P > 0, got " + std::to_string(s.p_max));

  std::set<int> seen;
  for (int p = -s.p_max; p <= s.p_max; ++p) {
    if (!seen.insert(std::abs(s.wavenumber(p))).second) {
      throw InvalidArgument("Subspace lattice has repeated |n| = " + std::to_string(std::abs(s.wavenumber(p))));
    }
  }
}

}  // namespace

void validate(const Truncation& t) {
  std::visit(
      [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Full2D>) {
          validate_full(v);
        } else {
          validate_subspace(v);
        }
      },
      t);
}

ModeBasis::ModeBasis(const Truncation& t) : truncation_(t) {
  validate(t);
  if (const auto* f = std::get_if<Full2D>(&t)) {
    waves_.reserve(static_cast<std::size_t>((2 * f->n1 + 1) * (2 * f->n2 + 1) - 1));
    for (int a = -f->n1; a <= f->n1; ++a) {
      for (int b = -f->n2; b <= f->n2; ++b) {
        if (a == 0 && b == 0) continue;
        wave_lookup_.emplace(WaveIndex{a, b}, waves_.size());
        waves_.push_back({a, b});
      }
    }
  } else {
    const auto& s = std::get<Subspace>(t);
    for (int p = -s.p_max; p <= s.p_max; ++p) lattice_.push_back(p);
  }
}

std::size_t ModeBasis::size() const noexcept { return is_subspace() ? lattice_.size() : waves_.size(); }

const std::vector<WaveIndex>& ModeBasis::waves() const {
  if (is_subspace()) throw InvalidArgument("waves() requested on a Subspace basis");
  return waves_;
}

const std::vector<int>& ModeBasis::lattice() const {
  if (!is_subspace()) throw InvalidArgument("lattice() requested on a Full2D basis");
  return lattice_;
}

long ModeBasis::index_of(const WaveIndex& w) const {
  auto it = wave_lookup_.find(w);
  return it == wave_lookup_.end() ? -1 : static_cast<long>(it->second);
}

long ModeBasis::index_of_p(int p) const {
  if (!is_subspace()) return -1;
  const int pm = subspace().p_max;
  return (p < -pm || p > pm) ? -1 : static_cast<long>(p + pm);
}

int ModeBasis::x_wavenumber(std::size_t i) const {
  return is_subspace() ? subspace().k : waves_.at(i).k1;
}

double ModeBasis::laplacian(std::size_t i) const {
  if (is_subspace()) {
    const auto& s = subspace();
    const double n = s.wavenumber(lattice_.at(i));
    return n * n + static_cast<double>(s.k) * s.k;
  }
  const auto& w = waves_.at(i);
  return static_cast<double>(w.k1) * w.k1 + static_cast<double>(w.k2) * w.k2;
}

BasisPtr build_basis(const Truncation& t) { return std::make_shared<const ModeBasis>(t); }

}  // namespace vortstab
