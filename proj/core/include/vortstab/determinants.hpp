#pragma once

#include <vector>

#include "vortstab/operators.hpp"

namespace vortstab {

/// det2(I - K) with the eigenvalues of K it was formed from.
struct DetResult {
  cplx value{1.0, 0.0};
  double log_modulus = 0.0;
  /// Sum of principal arguments; not unwrapped.
  double phase = 0.0;
  std::vector<cplx> kappa;
  /// Some kappa lies within 1e-12 of 1; value is reported as exactly 0.
  bool zero_to_precision = false;
};

/// 2-modified Fredholm determinant prod (1 - kappa) e^kappa, accumulated as
/// exp(sum [log(1 - kappa) + kappa]) in descending |kappa| order.
DetResult det2(const CMatrix& k);

/// Product formula from an eigenvalue list (no eigensolve).
cplx det2_product(const std::vector<cplx>& kappa);

struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(cplx z) const {
    return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
  }
  /// Euclidean distance from z to the rectangle boundary.
  double boundary_distance(cplx z) const;
};

/// Birman-Schwinger family mu -> K(mu) = M (-Delta - mu)^{-1} at a fixed lambda.
///
/// lambda = 0 selects the limit operators A_0 / K_0 (M = G - G P0); any other
/// lambda needs Re(lambda) != 0 and uses M = G - G lambda (lambda - L0)^{-1}.
/// Factor matrices are assembled once, so evaluations at many mu are cheap.
class DispersionFamily {
 public:
  DispersionFamily(BasisPtr basis, const SteadyState& s, cplx lambda);

  cplx lambda() const noexcept { return lambda_; }
  bool is_limit() const noexcept { return lambda_ == cplx{0.0, 0.0}; }
  const BasisPtr& basis() const noexcept { return basis_; }
  const RVector& laplacian() const noexcept { return laplacian_; }

  CMatrix K(cplx mu) const;
  /// A - mu, assembled as (-Delta - mu) - M.
  CMatrix A_minus(cplx mu) const;
  DetResult D(cplx mu) const;
  /// d/dmu log D = -Tr((I - K)^{-1} K dK/dmu), dK/dmu = K (-Delta - mu)^{-1}.
  cplx logderiv_mu(cplx mu) const;
  /// d/dlambda log D at this family's lambda (Re lambda != 0 only).
  cplx logderiv_lambda(cplx mu) const;

 private:
  BasisPtr basis_;
  cplx lambda_;
  RVector laplacian_;
  CMatrix g_;
  CMatrix m_;
  CMatrix resolvent_;  // empty in the limit case
};

DetResult evaluate_D(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu);
cplx logderiv_mu(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu);

struct ContourOptions {
  int max_levels = 8;
  double agreement = 0.1;
  double integer_slack = 0.25;
  double boundary_clearance = 1e-6;
};

struct CountReport {
  Rect rectangle;
  int winding = 0;
  /// Zero-count estimate: raw winding plus enclosed -Delta eigenvalues.
  double quadrature_estimate = 0.0;
  /// (1 / 2 pi i) times the contour integral of the log-derivative.
  cplx raw_winding{0.0, 0.0};
  int laplacian_poles_inside = 0;
  int edge_samples = 0;
  int levels = 0;
};

/// Number of zeros of mu -> D(lambda, mu) inside `rect`, i.e. of eigenvalues
/// of the truncated A_lambda (A_0 when lambda = 0), by the argument principle.
CountReport contour_count(BasisPtr b, const SteadyState& s, cplx lambda, const Rect& rect,
                          const ContourOptions& opts = {});
CountReport contour_count(const DispersionFamily& family, const Rect& rect, const ContourOptions& opts = {});

/// Number of zeros of lambda -> D(lambda, 0) inside `rect` (which must avoid
/// Re lambda = 0); these are the eigenvalues of the truncated L_vor there.
CountReport contour_count_lambda(BasisPtr b, const SteadyState& s, const Rect& rect, const ContourOptions& opts = {});

}  // namespace vortstab
