#include "vortstab/operators.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "vortstab/errors.hpp"

namespace vortstab {

namespace {

constexpr cplx kI{0.0, 1.0};

std::string mode_name(const ModeBasis& b, Eigen::Index i) {
  std::ostringstream os;
  if (b.is_subspace()) {
    const int p = b.lattice()[static_cast<std::size_t>(i)];
    os << "p=" << p << " (n=" << b.subspace().wavenumber(p) << ", k=" << b.subspace().k << ")";
  } else {
    const auto& w = b.waves()[static_cast<std::size_t>(i)];
    os << "(k1=" << w.k1 << ", k2=" << w.k2 << ")";
  }
  return os.str();
}

// Adds the Galerkin image of multiplication by sum_q c[q] cos(q y), scaled per
// source column by `column_scale(i)`, into `out`.
template <class ColumnScale>
void add_cosine_multiplier(const ModeBasis& b, const std::vector<double>& c, ColumnScale column_scale, CMatrix& out) {
  const auto n = static_cast<Eigen::Index>(b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx scale = column_scale(i);
    if (scale == 0.0) continue;
    for (std::size_t q = 0; q < c.size(); ++q) {
      if (c[q] == 0.0) continue;
      if (q == 0) {
        out(i, i) += scale * c[0];
        continue;
      }
      const cplx half = 0.5 * c[q] * scale;
      const int qi = static_cast<int>(q);
      if (b.is_subspace()) {
        // cos(q y) sin(n y) = (sin((n+q) y) + sin((n-q) y)) / 2 with q = r m.
        const int r = qi / b.subspace().m;
        const int p = b.lattice()[static_cast<std::size_t>(i)];
        for (int shift : {r, -r}) {
          const long t = b.index_of_p(p + shift);
          if (t >= 0) out(t, i) += half;
        }
      } else {
        const auto& w = b.waves()[static_cast<std::size_t>(i)];
        for (int shift : {qi, -qi}) {
          const long t = b.index_of(WaveIndex{w.k1, w.k2 + shift});
          if (t >= 0) out(t, i) += half;
        }
      }
    }
  }
}

CMatrix gprime_matrix(const ModeBasis& b, const SteadyState& s) {
  const auto n = static_cast<Eigen::Index>(b.size());
  CMatrix g = CMatrix::Zero(n, n);
  add_cosine_multiplier(b, s.gprime, [](Eigen::Index) { return cplx{1.0, 0.0}; }, g);
  return g;
}

CMatrix l0_matrix(const ModeBasis& b, const SteadyState& s) {
  const auto n = static_cast<Eigen::Index>(b.size());
  CMatrix l0 = CMatrix::Zero(n, n);
  add_cosine_multiplier(
      b, s.u_profile, [&](Eigen::Index i) { return -kI * static_cast<double>(b.x_wavenumber(static_cast<std::size_t>(i))); },
      l0);
  return l0;
}

CMatrix resolvent_matrix(const CMatrix& l0, cplx lambda) {
  if (lambda.real() == 0.0) throw InvalidArgument("resolvent of L0 needs Re(lambda) != 0");
  const auto n = l0.rows();
  try {
    return linalg::solve(lambda * CMatrix::Identity(n, n) - l0, CMatrix(CMatrix::Identity(n, n)));
  } catch (const SingularSystem& e) {
    throw Error(std::string("internal error: lambda - L0 singular although Re(lambda) != 0: ") + e.what());
  }
}

CMatrix p0_matrix(const ModeBasis& b, const SteadyState& s) {
  const auto n = static_cast<Eigen::Index>(b.size());
  if (s.at_rest()) return CMatrix::Identity(n, n);
  CMatrix p = CMatrix::Zero(n, n);
  if (b.is_subspace()) return p;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b.waves()[static_cast<std::size_t>(i)].k1 == 0) p(i, i) = 1.0;
  }
  return p;
}

// Right-multiplication by diag(1 / (d - mu)).
CMatrix scale_columns_by_inverse_shifted(const CMatrix& m, const RVector& d, cplx mu) {
  CMatrix out = m;
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) /= (d(c) - mu);
  return out;
}

SpectralMatrix wrap(BasisPtr b, CMatrix m) { return SpectralMatrix{std::move(b), std::move(m)}; }

}  // namespace

void require_compatible(const ModeBasis& b, const SteadyState& s) {
  if (!b.is_subspace()) return;
  const auto& sub = b.subspace();
  if (sub.m != s.m) {
    throw InvalidArgument("basis/state mismatch: subspace m=" + std::to_string(sub.m) + " but state m=" +
                          std::to_string(s.m));
  }
  auto check = [&](const std::vector<double>& c, const char* name) {
    for (std::size_t q = 1; q < c.size(); ++q) {
      if (c[q] != 0.0 && static_cast<int>(q) % sub.m != 0) {
        throw InvalidArgument(std::string("state harmonic q=") + std::to_string(q) + " in " + name +
                              " does not preserve X_{k,j} (needs q divisible by m=" + std::to_string(sub.m) + ")");
      }
    }
  };
  check(s.u_profile, "u_profile");
  check(s.gprime, "gprime");
}

RVector minus_laplacian_diagonal(const ModeBasis& b) {
  RVector d(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) d(static_cast<Eigen::Index>(i)) = b.laplacian(i);
  return d;
}

void require_off_laplacian(const ModeBasis& b, cplx mu) {
  const RVector d = minus_laplacian_diagonal(b);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::abs(d(i) - mu) <= 1e-12 * std::max(1.0, d(i))) {
      std::ostringstream os;
      os << "mu = " << mu.real() << (mu.imag() < 0 ? "" : "+") << mu.imag()
         << "i lies on the truncated -Delta spectrum (eigenvalue " << d(i) << " of mode " << mode_name(b, i) << ")";
      throw InvalidArgument(os.str());
    }
  }
}

SpectralMatrix op_minus_laplacian(BasisPtr b) {
  CMatrix m = minus_laplacian_diagonal(*b).cast<cplx>().asDiagonal();
  return wrap(std::move(b), std::move(m));
}

SpectralMatrix op_L0(BasisPtr b, const SteadyState& s) {
  require_compatible(*b, s);
  CMatrix m = l0_matrix(*b, s);
  return wrap(std::move(b), std::move(m));
}

SpectralMatrix op_multiplier_gprime(BasisPtr b, const SteadyState& s) {
  require_compatible(*b, s);
  CMatrix m = gprime_matrix(*b, s);
  return wrap(std::move(b), std::move(m));
}

SpectralMatrix op_resolvent_L0(BasisPtr b, const SteadyState& s, cplx lambda) {
  require_compatible(*b, s);
  CMatrix r = resolvent_matrix(l0_matrix(*b, s), lambda);
  return wrap(std::move(b), std::move(r));
}

SpectralMatrix op_P0(BasisPtr b, const SteadyState& s) {
  require_compatible(*b, s);
  CMatrix p = p0_matrix(*b, s);
  return wrap(std::move(b), std::move(p));
}

SpectralMatrix op_P0_discrete(BasisPtr b, const SteadyState& s, double rel_tol) {
  require_compatible(*b, s);
  const CMatrix l0 = l0_matrix(*b, s);
  const auto n = l0.rows();
  // i L0 is Hermitian.
  const auto he = linalg::eig_hermitian(kI * l0);
  const double scale = std::max(1.0, he.values.size() ? he.values.cwiseAbs().maxCoeff() : 0.0);
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    if (std::abs(he.values(c)) <= rel_tol * scale) p += he.vectors.col(c) * he.vectors.col(c).adjoint();
  }
  return wrap(std::move(b), std::move(p));
}

SpectralMatrix op_A_lambda(BasisPtr b, const SteadyState& s, cplx lambda) {
  require_compatible(*b, s);
  const CMatrix g = gprime_matrix(*b, s);
  const CMatrix r = resolvent_matrix(l0_matrix(*b, s), lambda);
  CMatrix a = minus_laplacian_diagonal(*b).cast<cplx>().asDiagonal();
  a -= g;
  a += g * (lambda * r);
  return wrap(std::move(b), std::move(a));
}

SpectralMatrix op_A_lambda_commutator_form(BasisPtr b, const SteadyState& s, cplx lambda) {
  require_compatible(*b, s);
  const CMatrix g = gprime_matrix(*b, s);
  const CMatrix l0 = l0_matrix(*b, s);
  const CMatrix r = resolvent_matrix(l0, lambda);
  CMatrix a = minus_laplacian_diagonal(*b).cast<cplx>().asDiagonal();
  a += g * (l0 * r);
  return wrap(std::move(b), std::move(a));
}

SpectralMatrix op_A0(BasisPtr b, const SteadyState& s) {
  require_compatible(*b, s);
  const CMatrix g = gprime_matrix(*b, s);
  CMatrix a = minus_laplacian_diagonal(*b).cast<cplx>().asDiagonal();
  a -= g;
  a += g * p0_matrix(*b, s);
  return wrap(std::move(b), std::move(a));
}

SpectralMatrix op_K_lambda(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu) {
  require_compatible(*b, s);
  require_off_laplacian(*b, mu);
  const CMatrix g = gprime_matrix(*b, s);
  const CMatrix r = resolvent_matrix(l0_matrix(*b, s), lambda);
  CMatrix k = scale_columns_by_inverse_shifted(g - g * (lambda * r), minus_laplacian_diagonal(*b), mu);
  return wrap(std::move(b), std::move(k));
}

SpectralMatrix op_K_lambda_commutator_form(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu) {
  require_compatible(*b, s);
  require_off_laplacian(*b, mu);
  const CMatrix g = gprime_matrix(*b, s);
  const CMatrix l0 = l0_matrix(*b, s);
  const CMatrix r = resolvent_matrix(l0, lambda);
  CMatrix k = scale_columns_by_inverse_shifted(-(g * (l0 * r)), minus_laplacian_diagonal(*b), mu);
  return wrap(std::move(b), std::move(k));
}

SpectralMatrix op_K0(BasisPtr b, const SteadyState& s, cplx mu) {
  require_compatible(*b, s);
  require_off_laplacian(*b, mu);
  const CMatrix g = gprime_matrix(*b, s);
  CMatrix k = scale_columns_by_inverse_shifted(g - g * p0_matrix(*b, s), minus_laplacian_diagonal(*b), mu);
  return wrap(std::move(b), std::move(k));
}

SpectralMatrix op_K_tilde(BasisPtr b, const SteadyState& s, cplx lambda) {
  require_compatible(*b, s);
  const CMatrix g = gprime_matrix(*b, s);
  const CMatrix l0 = l0_matrix(*b, s);
  const CMatrix r = resolvent_matrix(l0, lambda);
  // Delta^{-1} = -(-Delta)^{-1}
  const CMatrix a = -scale_columns_by_inverse_shifted(l0 * g, minus_laplacian_diagonal(*b), 0.0);
  CMatrix k = a * r;
  return wrap(std::move(b), std::move(k));
}

SpectralMatrix op_Lvor(BasisPtr b, const SteadyState& s) {
  require_compatible(*b, s);
  const CMatrix g = gprime_matrix(*b, s);
  const CMatrix l0 = l0_matrix(*b, s);
  const auto n = l0.rows();
  const CMatrix inner =
      CMatrix::Identity(n, n) - scale_columns_by_inverse_shifted(g, minus_laplacian_diagonal(*b), 0.0);
  CMatrix lv = l0 * inner;
  return wrap(std::move(b), std::move(lv));
}

}  // namespace vortstab
