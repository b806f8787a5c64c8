#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vortstab/determinants.hpp"

namespace vortstab {

// ---------------------------------------------------------------------------
// Lin's criterion on A_0

struct LinOptions {
  /// Full2D bases carry kernel modes |k|^2 = m^2 for constant g'; the check is
  /// refused there unless explicitly allowed.
  bool allow_full2d = false;
  /// Eigenvalues with |mu| < kernel_rel * ||A_0||_2 count as kernel.
  double kernel_rel = 1e-8;
  std::size_t head = 5;
};

struct LinReport {
  int negative_count = 0;
  double min_abs_eigenvalue = 0.0;
  double kernel_threshold = 0.0;
  bool has_kernel = false;
  /// negative_count odd and no kernel.
  bool criterion_fires = false;
  std::vector<double> spectrum_head;
};

LinReport lin_check(BasisPtr b, const SteadyState& s, const LinOptions& opts = {});

/// m^2 - j^2 > k^2 > m^2 - (j - m)^2: A_0 on X_{k,j} then has exactly one
/// negative eigenvalue and no kernel.
bool subspace_condition(int m, int j, int k);

// ---------------------------------------------------------------------------
// Negative eigenvalues of A_lambda along a lambda grid

struct NegativeCountOptions {
  /// Thin rectangle [-a, eps] x [-eps, eps]; a <= 0 selects 2 * sup|g'| + 1.
  double a = -1.0;
  double eps = 0.05;
  /// Real-axis tolerance |Im mu| < imag_rel * ||A_lambda||_2.
  double imag_rel = 1e-6;
  double kernel_rel = 1e-8;
  bool with_contour = true;
  ContourOptions contour;
};

struct NegativeCountPoint {
  double lambda = 0.0;
  /// Real eigenvalues below -kernel threshold.
  int count = 0;
  /// Eigenvalues of A_lambda inside the thin rectangle.
  int eig_in_rect = 0;
  std::optional<int> winding;
  bool skipped = false;
  std::string note;
};

std::vector<NegativeCountPoint> negative_count_vs_lambda(BasisPtr b, const SteadyState& s,
                                                         const std::vector<double>& lambda_grid,
                                                         const NegativeCountOptions& opts = {});

// ---------------------------------------------------------------------------
// Scan of lambda -> D(lambda, 0) for unstable eigenvalues of L_vor

struct ScanOptions {
  double lambda_min = 0.01;
  /// <= 0 selects 4 * sup|g'| (or 1 when that does not exceed lambda_min).
  double lambda_max = -1.0;
  int grid_points = 256;
  /// Bisection stops once the bracket is narrower than this.
  double tol = 1e-10;
  /// |Im D| must stay below imag_rel * |D| on the real grid.
  double imag_rel = 1e-6;
  bool geometric = true;
  bool complex_search = false;
  int complex_tiles_re = 4;
  int complex_tiles_im = 8;  // rounded up to odd
  ContourOptions contour;
};

struct ScanRoot {
  double lambda_star = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

struct ComplexBox {
  Rect rect;
  int winding = 0;
  std::string status;  // "ok" or the reason the box was not counted
};

struct ScanSample {
  double lambda = 0.0;
  cplx d{1.0, 0.0};
};

struct ScanReport {
  std::vector<ScanRoot> roots;
  std::vector<ComplexBox> complex_boxes;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int grid_points = 0;
  std::vector<ScanSample> samples;
};

ScanReport scan_unstable(BasisPtr b, const SteadyState& s, const ScanOptions& opts = {});

/// Resolves the default lambda_max of `opts` against the state.
double scan_lambda_max(const SteadyState& s, const ScanOptions& opts);

// ---------------------------------------------------------------------------
// L_vor eigenvalues vs. determinant zeros vs. kernel of A_lambda

struct ValidationOptions {
  double tol = 1e-6;
  /// L_vor eigenvalues with Re above this are treated as unstable.
  double real_tol = 1e-6;
  ScanOptions scan;
};

struct ValidationEntry {
  cplx lvor_eigenvalue;
  double abs_d = 0.0;
  /// min |sigma(A_lambda)| / ||A_lambda||_2 at lambda = the eigenvalue.
  double kernel_gap = 0.0;
  std::optional<double> matched_root;
  double root_rel_diff = 0.0;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  std::vector<ScanRoot> roots;
  double max_mismatch = 0.0;
  bool passed = true;
  std::vector<std::string> failures;
};

ValidationReport cross_validate(BasisPtr b, const SteadyState& s, const ValidationOptions& opts = {});

// ---------------------------------------------------------------------------
// lambda -> 0+ limits

struct LimitOptions {
  std::uint64_t seed = 20240917;
  /// Gate on the last ||(lambda R - P0) phi|| / ||phi||.
  double final_proj_rel = 0.01;
  /// Gate on last / first ||K_lambda - K_0||_F.
  double final_k_ratio = 0.05;
};

struct LimitReport {
  std::vector<double> lambdas;
  cplx mu{0.0, 0.0};
  double phi_norm = 0.0;
  std::vector<double> proj_dist;
  std::vector<double> k_dist;
  std::vector<double> det_dist;
  /// Same sequences with P0 replaced by the projection onto ker of the assembled L0.
  std::vector<double> proj_dist_discrete;
  std::vector<double> k_dist_discrete;
  /// dim ker(assembled L0) - rank P0.
  int spurious_kernel_dim = 0;
  /// Limits of proj_dist and k_dist at this truncation: ||(Pker - P0) phi||, ||G (Pker - P0)(-Delta - mu)^{-1}||_F.
  double proj_plateau = 0.0;
  double k_plateau = 0.0;
  bool proj_monotone = true;
  bool k_monotone = true;
  bool proj_final_ok = true;
  bool k_final_ok = true;
  bool passed = true;
  std::vector<std::string> failures;
};

LimitReport limit_studies(BasisPtr b, const SteadyState& s, const std::vector<double>& lambdas, cplx mu,
                          const LimitOptions& opts = {});

/// Seeded random coefficient vector, uniform in [-1, 1] + i[-1, 1]. Portable:
/// derived from raw mt19937_64 output only.
CVector seeded_random_vector(Eigen::Index n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Truncation refinement

enum class RefineQuantity { LambdaStar, NegativeCount, DetAt };

struct RefineOptions {
  /// Lambda at which DetAt evaluates D(lambda, 0).
  double det_lambda = 0.5;
  double threshold = 1e-6;
  ScanOptions scan;
  LinOptions lin;
};

struct RefineLevel {
  Truncation truncation;
  std::size_t dimension = 0;
  cplx value{0.0, 0.0};
  /// |value - previous| / |value|; absent on the first level.
  std::optional<double> rel_diff;
};

struct RefinementReport {
  RefineQuantity quantity = RefineQuantity::LambdaStar;
  std::vector<RefineLevel> levels;
  bool converged = false;
  std::string verdict;
};

RefinementReport refinement_study(const SteadyState& s, const std::vector<Truncation>& ladder, RefineQuantity quantity,
                                  const RefineOptions& opts = {});

std::string to_string(RefineQuantity q);
RefineQuantity parse_refine_quantity(const std::string& name);

}  // namespace vortstab
