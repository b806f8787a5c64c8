#pragma once

#include "vortstab/linalg.hpp"
#include "vortstab/spectral_grid.hpp"
#include "vortstab/steady_state.hpp"

namespace vortstab {

/// Dense Galerkin matrix of an operator on a truncated mode basis.
struct SpectralMatrix {
  BasisPtr basis;
  CMatrix entries;

  Eigen::Index dim() const noexcept { return entries.rows(); }
};

struct SpectralVector {
  BasisPtr basis;
  CVector coeffs;
};

/// Throws InvalidArgument if `s` cannot act on `b`: Subspace bases need a
/// matching m and velocity / g' harmonics that are multiples of m.
void require_compatible(const ModeBasis& b, const SteadyState& s);

// Diagonal of -Delta on the basis.
RVector minus_laplacian_diagonal(const ModeBasis& b);

SpectralMatrix op_minus_laplacian(BasisPtr b);

/// L0 phi = -f(y) d/dx phi. Couplings leaving the truncation are dropped;
/// the result is exactly anti-Hermitian.
SpectralMatrix op_L0(BasisPtr b, const SteadyState& s);

/// Multiplication by y -> g'(psi0(y)).
SpectralMatrix op_multiplier_gprime(BasisPtr b, const SteadyState& s);

/// (lambda - L0)^{-1}; requires Re lambda != 0.
SpectralMatrix op_resolvent_L0(BasisPtr b, const SteadyState& s, cplx lambda);

/// Orthogonal projection onto ker L0 of the continuum operator: selects k1 = 0
/// modes on Full2D, vanishes on X_{k,j}, and is the identity for the rest state.
SpectralMatrix op_P0(BasisPtr b, const SteadyState& s);

/// Orthogonal projection onto the null space of the assembled (truncated) L0.
/// Contains the continuum kernel plus truncation-induced kernel vectors.
SpectralMatrix op_P0_discrete(BasisPtr b, const SteadyState& s, double rel_tol = 1e-10);

/// A_lambda = -Delta - G + G lambda R.
SpectralMatrix op_A_lambda(BasisPtr b, const SteadyState& s, cplx lambda);
/// Same operator assembled as -Delta + G L0 R.
SpectralMatrix op_A_lambda_commutator_form(BasisPtr b, const SteadyState& s, cplx lambda);

/// A_0 = -Delta - G + G P0.
SpectralMatrix op_A0(BasisPtr b, const SteadyState& s);

/// K_lambda(mu) = (G - G lambda R)(-Delta - mu)^{-1}.
SpectralMatrix op_K_lambda(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu);
/// K_lambda(mu) = -G L0 R (-Delta - mu)^{-1}.
SpectralMatrix op_K_lambda_commutator_form(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu);

/// K_0(mu) = (G - G P0)(-Delta - mu)^{-1}.
SpectralMatrix op_K0(BasisPtr b, const SteadyState& s, cplx mu);

/// K~_lambda(0) = (L0 G Delta^{-1}) (lambda - L0)^{-1}, the AB partner of K_lambda(0).
/// Satisfies lambda - L_vor = (I - K~)(lambda - L0) exactly.
SpectralMatrix op_K_tilde(BasisPtr b, const SteadyState& s, cplx lambda);

/// L_vor = L0 (I + G Delta^{-1}) with Delta^{-1} = -(-Delta)^{-1}.
SpectralMatrix op_Lvor(BasisPtr b, const SteadyState& s);

/// Throws InvalidArgument naming the mode when mu hits the truncated -Delta spectrum.
void require_off_laplacian(const ModeBasis& b, cplx mu);

}  // namespace vortstab
