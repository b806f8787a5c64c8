#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <variant>
#include <vector>

namespace vortstab {

/// Fourier wave vector (k1, k2) of e^{i(k1 x + k2 y)}; never (0, 0).
struct WaveIndex {
  int k1 = 0;
  int k2 = 0;

  friend auto operator<=>(const WaveIndex&, const WaveIndex&) = default;
};

/// Full 2D lattice |k1| <= n1, |k2| <= n2 with the mean mode removed.
struct Full2D {
  int n1 = 0;
  int n2 = 0;

  friend bool operator==(const Full2D&, const Full2D&) = default;
};

/// Invariant subspace X_{k,j}: sin((j + m p) y) e^{ikx} for p in [-P, P].
struct Subspace {
  int m = 0;
  int j = 0;
  int k = 0;
  int p_max = 0;

  /// Sine wavenumber of lattice index p.
  int wavenumber(int p) const noexcept { return j + m * p; }

  friend bool operator==(const Subspace&, const Subspace&) = default;
};

using Truncation = std::variant<Full2D, Subspace>;

/// Throws InvalidArgument if the truncation violates its invariants.
void validate(const Truncation& t);

/// Ordered, immutable set of modes spanning a truncated space.
///
/// Full2D labels are WaveIndex values in lexicographic (k1, k2) order.
/// Subspace labels are the lattice indices p = -P..P in increasing order;
/// the mode for p is sin((j + m p) y) e^{ikx}.
class ModeBasis {
 public:
  explicit ModeBasis(const Truncation& t);

  const Truncation& truncation() const noexcept { return truncation_; }
  bool is_subspace() const noexcept { return std::holds_alternative<Subspace>(truncation_); }
  const Subspace& subspace() const { return std::get<Subspace>(truncation_); }
  const Full2D& full2d() const { return std::get<Full2D>(truncation_); }

  std::size_t size() const noexcept;

  /// Full2D only.
  const std::vector<WaveIndex>& waves() const;
  /// Subspace only.
  const std::vector<int>& lattice() const;

  /// Position of a label, or -1 when it lies outside the truncation.
  long index_of(const WaveIndex& w) const;
  long index_of_p(int p) const;

  /// x-wavenumber of mode i (k for every Subspace mode).
  int x_wavenumber(std::size_t i) const;
  /// Eigenvalue of -Delta on mode i: k1^2 + k2^2 or n_p^2 + k^2.
  double laplacian(std::size_t i) const;

 private:
  Truncation truncation_;
  std::vector<WaveIndex> waves_;
  std::vector<int> lattice_;
  std::map<WaveIndex, std::size_t> wave_lookup_;
};

using BasisPtr = std::shared_ptr<const ModeBasis>;

/// Validates and builds a shared basis.
BasisPtr build_basis(const Truncation& t);

}  // namespace vortstab
