#include "vortstab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "vortstab/errors.hpp"

namespace vortstab {

namespace {

std::string format_sequence(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(10);
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

// Strictly decreasing, except that a run of (numerically) zero values is accepted.
bool strictly_decreasing(const std::vector<double>& v, double zero) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= zero && v[i - 1] <= zero) continue;
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

double real_part_D(const BasisPtr& b, const SteadyState& s, double lambda) {
  return DispersionFamily(b, s, lambda).D(0.0).value.real();
}

}  // namespace

// ---------------------------------------------------------------------------

bool subspace_condition(int m, int j, int k) {
  const long long m2 = static_cast<long long>(m) * m;
  const long long k2 = static_cast<long long>(k) * k;
  const long long upper = m2 - static_cast<long long>(j) * j;
  const long long lower = m2 - static_cast<long long>(j - m) * (j - m);
  return upper > k2 && k2 > lower;
}

LinReport lin_check(BasisPtr b, const SteadyState& s, const LinOptions& opts) {
  if (!b->is_subspace() && !opts.allow_full2d) {
    throw InvalidArgument(
        "lin_check on a Full2D basis: with constant g' = m^2 every mode with |k|^2 = m^2 and k1 != 0 lies in "
        "ker A_0, so the criterion cannot apply on the full space; use a Subspace basis or allow_full2d");
  }
  const CMatrix a0 = op_A0(b, s).entries;
  const auto spectrum = linalg::eig(a0).eigenvalues;
  LinReport out;
  out.kernel_threshold = opts.kernel_rel * linalg::two_norm(a0);
  out.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& mu : spectrum) {
    out.min_abs_eigenvalue = std::min(out.min_abs_eigenvalue, std::abs(mu));
    if (std::abs(mu) < out.kernel_threshold) {
      out.has_kernel = true;
    } else if (mu.real() < -out.kernel_threshold) {
      ++out.negative_count;
    }
  }
  for (std::size_t i = 0; i < std::min(opts.head, spectrum.size()); ++i) out.spectrum_head.push_back(spectrum[i].real());
  out.criterion_fires = (out.negative_count % 2 == 1) && !out.has_kernel;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<NegativeCountPoint> negative_count_vs_lambda(BasisPtr b, const SteadyState& s,
                                                         const std::vector<double>& lambda_grid,
                                                         const NegativeCountOptions& opts) {
  const double a = opts.a > 0.0 ? opts.a : 2.0 * s.gprime_sup + 1.0;
  const Rect rect{-a, opts.eps, -opts.eps, opts.eps};
  std::vector<NegativeCountPoint> out;
  out.reserve(lambda_grid.size());
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double lambda = lambda_grid[i];
    if (!(lambda > 0.0)) throw InvalidArgument("negative_count_vs_lambda needs a positive lambda grid");
    if (i > 0 && !(lambda > lambda_grid[i - 1])) {
      throw InvalidArgument("negative_count_vs_lambda needs an increasing lambda grid");
    }
    const DispersionFamily family(b, s, lambda);
    const CMatrix a_l = family.A_minus(0.0);
    const double scale = linalg::two_norm(a_l);
    const auto spectrum = linalg::eig(a_l).eigenvalues;

    NegativeCountPoint pt;
    pt.lambda = lambda;
    for (const auto& mu : spectrum) {
      if (mu.real() < -opts.kernel_rel * scale && std::abs(mu.imag()) < opts.imag_rel * scale) ++pt.count;
      if (rect.contains(mu)) ++pt.eig_in_rect;
      if (rect.boundary_distance(mu) < opts.contour.boundary_clearance) {
        pt.skipped = true;
        std::ostringstream os;
        os.precision(12);
        os << "eigenvalue " << mu.real() << "+" << mu.imag() << "i within " << opts.contour.boundary_clearance
           << " of the counting rectangle";
        pt.note = os.str();
      }
    }
    if (opts.with_contour && !pt.skipped) pt.winding = contour_count(family, rect, opts.contour).winding;
    out.push_back(std::move(pt));
  }
  return out;
}

// ---------------------------------------------------------------------------

double scan_lambda_max(const SteadyState& s, const ScanOptions& opts) {
  if (opts.lambda_max > 0.0) return opts.lambda_max;
  const double guess = 4.0 * s.gprime_sup;
  return guess > opts.lambda_min ? guess : 1.0;
}

ScanReport scan_unstable(BasisPtr b, const SteadyState& s, const ScanOptions& opts) {
  ScanReport rep;
  rep.lambda_min = opts.lambda_min;
  rep.lambda_max = scan_lambda_max(s, opts);
  rep.grid_points = opts.grid_points;
  if (!(rep.lambda_min > 0.0) || !(rep.lambda_max > rep.lambda_min)) {
    throw InvalidArgument("scan range must satisfy 0 < lambda_min < lambda_max");
  }
  if (opts.grid_points < 2) throw InvalidArgument("scan needs at least 2 grid points");

  const int n = opts.grid_points;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    double lambda = opts.geometric ? rep.lambda_min * std::pow(rep.lambda_max / rep.lambda_min, t)
                                   : rep.lambda_min + t * (rep.lambda_max - rep.lambda_min);
    if (i == n - 1) lambda = rep.lambda_max;
    const DetResult d = DispersionFamily(b, s, lambda).D(0.0);
    if (std::abs(d.value.imag()) > opts.imag_rel * std::abs(d.value) + std::numeric_limits<double>::min()) {
      std::ostringstream os;
      os.precision(12);
      os << "conjugation symmetry violated: D(" << lambda << ", 0) = " << d.value.real() << "+" << d.value.imag()
         << "i is not real";
      throw Error(os.str());
    }
    rep.samples.push_back({lambda, d.value});
  }

  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& cur = rep.samples[i];
    if (cur.d == cplx{0.0, 0.0}) {
      rep.roots.push_back({cur.lambda, 0.0, cur.lambda, cur.lambda});
      continue;
    }
    if (i == 0) continue;
    const auto& prev = rep.samples[i - 1];
    if (prev.d == cplx{0.0, 0.0}) continue;
    if ((prev.d.real() < 0.0) == (cur.d.real() < 0.0)) continue;

    double lo = prev.lambda;
    double hi = cur.lambda;
    double f_lo = prev.d.real();
    while (hi - lo > opts.tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f_mid = real_part_D(b, s, mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    const double star = 0.5 * (lo + hi);
    rep.roots.push_back({star, std::abs(DispersionFamily(b, s, star).D(0.0).value), prev.lambda, cur.lambda});
  }

  if (opts.complex_search) {
    const double re0 = rep.lambda_min;
    const double re_step = (rep.lambda_max - re0) / opts.complex_tiles_re;
    // An odd row count keeps the real axis, where real roots sit, inside the middle row.
    const int rows = opts.complex_tiles_im % 2 == 0 ? opts.complex_tiles_im + 1 : opts.complex_tiles_im;
    const double im_step = 2.0 * rep.lambda_max / rows;
    for (int r = 0; r < opts.complex_tiles_re; ++r) {
      for (int c = 0; c < rows; ++c) {
        ComplexBox box;
        box.rect = {re0 + r * re_step, re0 + (r + 1) * re_step, -rep.lambda_max + c * im_step,
                    -rep.lambda_max + (c + 1) * im_step};
        try {
          box.winding = contour_count_lambda(b, s, box.rect, opts.contour).winding;
          box.status = "ok";
        } catch (const Error& e) {
          box.winding = 0;
          box.status = e.what();
        }
        rep.complex_boxes.push_back(std::move(box));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

ValidationReport cross_validate(BasisPtr b, const SteadyState& s, const ValidationOptions& opts) {
  ValidationReport rep;
  const auto lvor = linalg::eig(op_Lvor(b, s).entries).eigenvalues;
  const ScanReport scan = scan_unstable(b, s, opts.scan);
  rep.roots = scan.roots;

  auto fail = [&](const std::string& msg) {
    rep.passed = false;
    rep.failures.push_back(msg);
  };

  std::vector<cplx> unstable;
  for (const auto& z : lvor) {
    if (z.real() > opts.real_tol) unstable.push_back(z);
  }

  for (const auto& z : unstable) {
    ValidationEntry e;
    e.lvor_eigenvalue = z;
    const DispersionFamily family(b, s, z);
    e.abs_d = std::abs(family.D(0.0).value);
    const CMatrix a = family.A_minus(0.0);
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& mu : linalg::eig(a).eigenvalues) gap = std::min(gap, std::abs(mu));
    e.kernel_gap = gap / linalg::two_norm(a);

    std::ostringstream id;
    id.precision(12);
    id << "L_vor eigenvalue " << z.real() << "+" << z.imag() << "i";
    if (e.abs_d > opts.tol) fail(id.str() + ": |D(lambda,0)| = " + std::to_string(e.abs_d));
    if (e.kernel_gap > opts.tol) fail(id.str() + ": 0 not in sigma(A_lambda), relative gap " + std::to_string(e.kernel_gap));
    rep.max_mismatch = std::max({rep.max_mismatch, e.abs_d, e.kernel_gap});

    const bool real = std::abs(z.imag()) <= opts.tol * std::abs(z);
    const bool in_range = z.real() >= scan.lambda_min && z.real() <= scan.lambda_max;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : scan.roots) {
      const double d = std::abs(r.lambda_star - z) / std::abs(z);
      if (d < best) {
        best = d;
        e.matched_root = r.lambda_star;
      }
    }
    if (e.matched_root) e.root_rel_diff = best;
    if (real && in_range) {
      if (!e.matched_root || best > opts.tol) fail(id.str() + ": no matching scan root");
      rep.max_mismatch = std::max(rep.max_mismatch, best);
    }
    rep.entries.push_back(std::move(e));
  }

  for (const auto& r : scan.roots) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : unstable) best = std::min(best, std::abs(r.lambda_star - z) / r.lambda_star);
    if (best > opts.tol) {
      std::ostringstream os;
      os.precision(12);
      os << "scan root " << r.lambda_star << " has no partner in sigma(L_vor)";
      fail(os.str());
    }
    if (std::isfinite(best)) rep.max_mismatch = std::max(rep.max_mismatch, best);
  }
  return rep;
}

// ---------------------------------------------------------------------------

CVector seeded_random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&] { return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0; };
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = uniform();
    const double im = uniform();
    v(i) = cplx{re, im};
  }
  return v;
}

LimitReport limit_studies(BasisPtr b, const SteadyState& s, const std::vector<double>& lambdas, cplx mu,
                          const LimitOptions& opts) {
  if (lambdas.empty()) throw InvalidArgument("limit_studies needs a non-empty lambda sequence");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] < lambdas[i - 1]))) {
      throw InvalidArgument("limit_studies needs a strictly decreasing positive lambda sequence");
    }
  }
  require_off_laplacian(*b, mu);

  LimitReport rep;
  rep.lambdas = lambdas;
  rep.mu = mu;
  const auto n = static_cast<Eigen::Index>(b->size());
  const CVector phi = seeded_random_vector(n, opts.seed);
  rep.phi_norm = phi.norm();

  const CMatrix g = op_multiplier_gprime(b, s).entries;
  const CMatrix p0 = op_P0(b, s).entries;
  const CMatrix pker = op_P0_discrete(b, s).entries;
  const CMatrix l0 = op_L0(b, s).entries;
  const RVector lap = minus_laplacian_diagonal(*b);

  auto shifted_inverse = [&](const CMatrix& m) {
    CMatrix out = m;
    for (Eigen::Index c = 0; c < n; ++c) out.col(c) /= (lap(c) - mu);
    return out;
  };
  const CMatrix k0 = op_K0(b, s, mu).entries;
  const CMatrix k0_discrete = shifted_inverse(g - g * pker);
  const cplx d0 = det2(k0).value;

  rep.spurious_kernel_dim =
      static_cast<int>(std::lround(pker.trace().real())) - static_cast<int>(std::lround(p0.trace().real()));
  rep.proj_plateau = ((pker - p0) * phi).norm();
  rep.k_plateau = shifted_inverse(g * (pker - p0)).norm();

  for (double lambda : lambdas) {
    const CMatrix t = lambda * linalg::solve(lambda * CMatrix::Identity(n, n) - l0, CMatrix(CMatrix::Identity(n, n)));
    const CMatrix k = shifted_inverse(g - g * t);
    rep.proj_dist.push_back(((t - p0) * phi).norm());
    rep.k_dist.push_back((k - k0).norm());
    rep.det_dist.push_back(std::abs(det2(k).value - d0));
    rep.proj_dist_discrete.push_back(((t - pker) * phi).norm());
    rep.k_dist_discrete.push_back((k - k0_discrete).norm());
  }

  const double zero = 1e-13 * std::max(1.0, rep.phi_norm);
  rep.proj_monotone = strictly_decreasing(rep.proj_dist, zero);
  rep.k_monotone = strictly_decreasing(rep.k_dist, 1e-13 * std::max(1.0, rep.k_dist.front()));
  rep.proj_final_ok = rep.proj_dist.back() < opts.final_proj_rel * rep.phi_norm;
  rep.k_final_ok = rep.k_dist.front() <= zero || rep.k_dist.back() < opts.final_k_ratio * rep.k_dist.front();

  if (!rep.proj_monotone) rep.failures.push_back("||(lambda R - P0) phi|| not strictly decreasing: " + format_sequence(rep.proj_dist));
  if (!rep.k_monotone) rep.failures.push_back("||K_lambda - K_0||_F not strictly decreasing: " + format_sequence(rep.k_dist));
  if (!rep.proj_final_ok) {
    rep.failures.push_back("final ||(lambda R - P0) phi|| / ||phi|| = " + std::to_string(rep.proj_dist.back() / rep.phi_norm) +
                           " not below " + std::to_string(opts.final_proj_rel));
  }
  if (!rep.k_final_ok) {
    rep.failures.push_back("final/initial ||K_lambda - K_0||_F = " +
                           std::to_string(rep.k_dist.back() / rep.k_dist.front()) + " not below " +
                           std::to_string(opts.final_k_ratio));
  }
  rep.passed = rep.failures.empty();
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(RefineQuantity q) {
  switch (q) {
    case RefineQuantity::LambdaStar: return "lambda_star";
    case RefineQuantity::NegativeCount: return "negative_count";
    case RefineQuantity::DetAt: return "det";
  }
  return "unknown";
}

RefineQuantity parse_refine_quantity(const std::string& name) {
  if (name == "lambda_star") return RefineQuantity::LambdaStar;
  if (name == "negative_count") return RefineQuantity::NegativeCount;
  if (name == "det") return RefineQuantity::DetAt;
  throw InvalidArgument("unknown refinement quantity '" + name + "' (expected lambda_star, negative_count or det)");
}

RefinementReport refinement_study(const SteadyState& s, const std::vector<Truncation>& ladder, RefineQuantity quantity,
                                  const RefineOptions& opts) {
  if (ladder.size() < 2) throw InvalidArgument("refinement ladder needs at least two levels");
  RefinementReport rep;
  rep.quantity = quantity;
  std::size_t previous_dim = 0;
  for (const auto& t : ladder) {
    auto basis = build_basis(t);
    if (basis->size() <= previous_dim) throw InvalidArgument("refinement ladder must be strictly increasing");
    previous_dim = basis->size();

    RefineLevel level;
    level.truncation = t;
    level.dimension = basis->size();
    switch (quantity) {
      case RefineQuantity::LambdaStar: {
        const auto scan = scan_unstable(basis, s, opts.scan);
        if (scan.roots.empty()) {
          level.value = std::numeric_limits<double>::quiet_NaN();
        } else {
          double best = 0.0;
          for (const auto& r : scan.roots) best = std::max(best, r.lambda_star);
          level.value = best;
        }
        break;
      }
      case RefineQuantity::NegativeCount:
        level.value = static_cast<double>(lin_check(basis, s, opts.lin).negative_count);
        break;
      case RefineQuantity::DetAt:
        level.value = DispersionFamily(basis, s, opts.det_lambda).D(0.0).value;
        break;
    }
    if (!rep.levels.empty()) {
      const cplx prev = rep.levels.back().value;
      const double diff = std::abs(level.value - prev);
      const double scale = std::abs(level.value);
      level.rel_diff = diff == 0.0 ? 0.0 : diff / scale;
    }
    rep.levels.push_back(std::move(level));
  }

  bool finite = true;
  for (const auto& l : rep.levels) finite = finite && std::isfinite(l.value.real()) && std::isfinite(l.value.imag());
  if (!finite) {
    rep.verdict = "not converged: quantity undefined at some level (no root found)";
    return rep;
  }
  bool non_increasing = true;
  for (std::size_t i = 2; i < rep.levels.size(); ++i) {
    if (*rep.levels[i].rel_diff > *rep.levels[i - 1].rel_diff) non_increasing = false;
  }
  const double last = *rep.levels.back().rel_diff;
  rep.converged = non_increasing && last < opts.threshold;
  std::ostringstream os;
  os.precision(3);
  if (rep.converged) {
    os << "converged (last relative difference " << last << ")";
  } else if (!non_increasing) {
    os << "not converged: successive differences increase";
  } else {
    os << "not converged: last relative difference " << last << " >= " << opts.threshold;
  }
  rep.verdict = os.str();
  return rep;
}

}  // namespace vortstab
