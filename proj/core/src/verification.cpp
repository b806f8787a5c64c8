#include "vortstab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortstab/errors.hpp"

namespace vortstab {

namespace {

bool on_laplacian(const RVector& lap, cplx mu) {
  for (Eigen::Index i = 0; i < lap.size(); ++i) {
    if (std::abs(lap(i) - mu) < 1e-9 * std::max(1.0, lap(i))) return true;
  }
  return false;
}

double min_distance(const std::vector<cplx>& pts, cplx z) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) d = std::min(d, std::abs(p - z));
  return d;
}

std::string seq(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

class Recorder {
 public:
  void add(std::string name, double value, double threshold, bool passed, std::string detail = {}, bool gating = true) {
    report_.checks.push_back({std::move(name), value, threshold, passed, gating, std::move(detail)});
  }
  void at_most(std::string name, double value, double threshold, std::string detail = {}) {
    add(std::move(name), value, threshold, value <= threshold, std::move(detail));
  }
  VerificationReport take() { return std::move(report_); }

 private:
  VerificationReport report_;
};

// Median |D| over a grid spanning `targets`, kept away from eigenvalues and poles.
double reference_median(const DispersionFamily& fam, const std::vector<cplx>& targets, const std::vector<cplx>& avoid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& t : targets) {
    lo = std::min(lo, t.real());
    hi = std::max(hi, t.real());
  }
  std::vector<double> mags;
  for (int i = 0; i <= 12; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const cplx mu{lo - 1.0 + (hi - lo + 2.0) * i / 12.0, 0.5 * j + 0.25};
      if (min_distance(avoid, mu) < 0.2) continue;
      mags.push_back(std::abs(fam.D(mu).value));
    }
  }
  if (mags.empty()) return 1.0;
  std::nth_element(mags.begin(), mags.begin() + static_cast<long>(mags.size() / 2), mags.end());
  return mags[mags.size() / 2];
}

void birman_schwinger_checks(Recorder& rec, const DispersionFamily& fam, const std::string& tag) {
  const auto spectrum = linalg::eig(fam.A_minus(0.0)).eigenvalues;
  std::vector<cplx> poles;
  for (Eigen::Index i = 0; i < fam.laplacian().size(); ++i) poles.emplace_back(fam.laplacian()(i), 0.0);

  std::vector<cplx> targets;
  for (const auto& mu : spectrum) {
    if (targets.size() == 5) break;
    if (min_distance(poles, mu) > 1e-6) targets.push_back(mu);
  }
  std::vector<cplx> avoid = spectrum;
  avoid.insert(avoid.end(), poles.begin(), poles.end());
  if (targets.empty()) {
    rec.add("birman_schwinger_zeros_" + tag, 0.0, 1e-6, true, "no eigenvalue of " + tag + " off the -Delta spectrum");
  } else {
  const double median = reference_median(fam, targets, avoid);
  double worst = 0.0;
  for (const auto& mu : targets) worst = std::max(worst, std::abs(fam.D(mu).value) / median);
  rec.at_most("birman_schwinger_zeros_" + tag, worst, 1e-6, std::to_string(targets.size()) + " eigenvalues of " + tag);
  }

  // Rectangle around the lowest distinct real part.
  std::vector<double> reals;
  for (const auto& mu : spectrum) reals.push_back(mu.real());
  std::sort(reals.begin(), reals.end());
  reals.erase(std::unique(reals.begin(), reals.end(), [](double a, double b) { return std::abs(a - b) < 1e-6; }),
              reals.end());
  const double right = reals.size() > 1 ? 0.5 * (reals[0] + reals[1]) : reals[0] + 1.0;
  for (double nudge : {0.0, 0.0137, -0.0213, 0.0311}) {
    Rect rect{reals[0] - 1.0, right + nudge * (right - reals[0]), -0.5, 0.5};
    try {
      const auto count = contour_count(fam, rect);
      const auto expected = std::count_if(spectrum.begin(), spectrum.end(), [&](cplx z) { return rect.contains(z); });
      rec.add("contour_count_" + tag, count.winding, static_cast<double>(expected), count.winding == expected,
              "eigensolve count " + std::to_string(expected));
      return;
    } catch (const InvalidArgument&) {
    }
  }
  rec.add("contour_count_" + tag, -1, 0, false, "no admissible rectangle found");
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || !c.gating; });
}

double conjugation_mismatch(const std::vector<cplx>& values) {
  std::vector<bool> used(values.size(), false);
  double worst = 0.0;
  for (const auto& v : values) {
    const cplx target = std::conj(v);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(values[j] - target);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    if (!values.empty()) used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

VerificationReport run_verification(BasisPtr b, const SteadyState& s, const VerifyOptions& opts) {
  require_compatible(*b, s);
  Recorder rec;
  const auto n = static_cast<Eigen::Index>(b->size());
  const CMatrix id = CMatrix::Identity(n, n);
  const RVector lap = minus_laplacian_diagonal(*b);
  const CMatrix l0 = op_L0(b, s).entries;
  const CMatrix p0 = op_P0(b, s).entries;

  auto identity_threshold = [&](cplx mu) {
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(lap(i) - mu));
    return opts.identity_tol * std::max(1.0, scale / 1000.0);
  };
  auto d_mu = [&](cplx mu) -> CMatrix { return (lap.cast<cplx>().array() - mu).matrix().asDiagonal(); };

  // Exact factorizations.
  {
    double worst_a = 0.0, worst_a0 = 0.0, worst_forms = 0.0, worst_k_forms = 0.0, worst_lvor = 0.0;
    bool ok_a = true, ok_a0 = true, ok_forms = true, ok_k = true, ok_lvor = true;
    const CMatrix lvor = op_Lvor(b, s).entries;
    for (const auto& mu : opts.mus) {
      if (on_laplacian(lap, mu)) continue;
      const double thr = identity_threshold(mu);
      const double r0 = linalg::max_norm((op_A0(b, s).entries - mu * id) - (id - op_K0(b, s, mu).entries) * d_mu(mu));
      worst_a0 = std::max(worst_a0, r0);
      ok_a0 = ok_a0 && r0 <= thr;
      for (const auto& lambda : opts.lambdas) {
        const CMatrix a = op_A_lambda(b, s, lambda).entries;
        const CMatrix k = op_K_lambda(b, s, lambda, mu).entries;
        const double r = linalg::max_norm((a - mu * id) - (id - k) * d_mu(mu));
        worst_a = std::max(worst_a, r);
        ok_a = ok_a && r <= thr;
        const double rk = linalg::max_norm(k - op_K_lambda_commutator_form(b, s, lambda, mu).entries);
        worst_k_forms = std::max(worst_k_forms, rk);
        ok_k = ok_k && rk <= opts.identity_tol;
      }
    }
    for (const auto& lambda : opts.lambdas) {
      const double rf = linalg::max_norm(op_A_lambda(b, s, lambda).entries - op_A_lambda_commutator_form(b, s, lambda).entries);
      worst_forms = std::max(worst_forms, rf);
      ok_forms = ok_forms && rf <= identity_threshold(0.0);
      const CMatrix lhs = lambda * id - lvor;
      const CMatrix rhs = (id - op_K_tilde(b, s, lambda).entries) * (lambda * id - l0);
      const double rl = linalg::max_norm(lhs - rhs);
      worst_lvor = std::max(worst_lvor, rl);
      ok_lvor = ok_lvor && rl <= opts.identity_tol;
    }
    rec.add("factorization_A_lambda", worst_a, opts.identity_tol, ok_a, "(A_l - mu) = (I - K_l(mu))(-Delta - mu)");
    rec.add("factorization_A0", worst_a0, opts.identity_tol, ok_a0, "(A_0 - mu) = (I - K_0(mu))(-Delta - mu)");
    rec.add("factorization_Lvor", worst_lvor, opts.identity_tol, ok_lvor, "lambda - L_vor = (I - K~)(lambda - L0)");
    rec.add("A_lambda_two_forms", worst_forms, opts.identity_tol, ok_forms);
    rec.add("K_lambda_two_forms", worst_k_forms, opts.identity_tol, ok_k);
  }

  // L0 structure.
  const double l0_norm = linalg::two_norm(l0);
  rec.at_most("L0_antihermitian", linalg::max_norm(l0 + l0.adjoint()), 0.0);
  {
    double worst = 0.0;
    for (const auto& z : linalg::eig(l0).eigenvalues) worst = std::max(worst, std::abs(z.real()));
    rec.at_most("L0_spectrum_imaginary", worst, 1e-10 * std::max(l0_norm, 1e-300));
  }
  {
    double worst = -1.0;
    std::string detail;
    for (cplx lambda : {cplx{0.1, 0.0}, cplx{1.0, 0.0}, cplx{0.5, 2.0}, cplx{3.0, -1.0}}) {
      const double excess = linalg::two_norm(op_resolvent_L0(b, s, lambda).entries) * std::abs(lambda.real()) - 1.0;
      worst = std::max(worst, excess);
    }
    rec.at_most("resolvent_bound", worst, 1e-10, "max(||R(lambda)|| |Re lambda|) - 1");
  }
  rec.at_most("P0_idempotent", linalg::max_norm(p0 * p0 - p0), 0.0);
  rec.at_most("P0_hermitian", linalg::max_norm(p0 - p0.adjoint()), 0.0);
  rec.at_most("L0_P0_zero", linalg::max_norm(l0 * p0), 0.0);

  // Conjugation symmetry for real lambda.
  {
    const CMatrix a = op_A_lambda(b, s, 0.5).entries;
    rec.at_most("conjugation_A_lambda", conjugation_mismatch(linalg::eig(a).eigenvalues),
                1e-8 * std::max(1.0, linalg::two_norm(a)));
    const CMatrix k = op_K_lambda(b, s, 0.5, 0.0).entries;
    rec.at_most("conjugation_K_lambda0", conjugation_mismatch(linalg::eig(k).eigenvalues),
                1e-8 * std::max(1.0, linalg::two_norm(k)));
  }

  // lambda R -> projection onto the kernel.
  {
    const CVector phi = seeded_random_vector(n, opts.seed);
    const CMatrix pker = op_P0_discrete(b, s).entries;
    std::vector<double> to_kernel, to_p0;
    for (double lambda : {1.0, 0.1, 0.01, 0.001}) {
      const CMatrix t = lambda * op_resolvent_L0(b, s, lambda).entries;
      to_kernel.push_back(((t - pker) * phi).norm() / phi.norm());
      to_p0.push_back(((t - p0) * phi).norm() / phi.norm());
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < to_kernel.size(); ++i) decreasing = decreasing && (to_kernel[i] < to_kernel[i - 1] || to_kernel[i] < 1e-14);
    rec.add("strong_limit_discrete_kernel", to_kernel.back(), 0.01, decreasing && to_kernel.back() < 0.01,
            "||(lR - Pker) phi||/||phi|| at l=1,.1,.01,.001: " + seq(to_kernel));
    const int spurious =
        static_cast<int>(std::lround(pker.trace().real())) - static_cast<int>(std::lround(p0.trace().real()));
    rec.add("strong_limit_continuum_P0_gap", to_p0.back(), 0.01, to_p0.back() < 0.01,
            "||(lR - P0) phi||/||phi||: " + seq(to_p0) + "; truncation adds " + std::to_string(spurious) +
                " kernel vectors to L0",
            false);
  }

  {
    const double lambda = 10.0 * std::max(s.gprime_sup, 1.0);
    double min_re = std::numeric_limits<double>::infinity();
    for (const auto& z : linalg::eig(op_A_lambda(b, s, lambda).entries).eigenvalues) min_re = std::min(min_re, z.real());
    rec.add("large_lambda_positivity", min_re, 0.0, min_re > 0.0, "min Re sigma(A_lambda) at lambda = 10 sup|g'|");
  }

  // Determinants.
  const DispersionFamily fam(b, s, 0.5);
  const DispersionFamily fam0(b, s, 0.0);
  {
    const CMatrix k = fam.K(-1.0);
    const DetResult d = det2(k);
    const cplx independent = det2_product(linalg::eig(k.transpose()).eigenvalues);
    rec.at_most("det2_product_formula", std::abs(d.value - independent) / std::max(std::abs(d.value), 1e-300), 1e-8);
    const cplx recon = std::exp(cplx{d.log_modulus, d.phase});
    rec.at_most("det2_log_decomposition", std::abs(d.value - recon) / std::max(std::abs(d.value), 1e-300), 1e-10);
  }
  birman_schwinger_checks(rec, fam, "A_lambda");
  birman_schwinger_checks(rec, fam0, "A0");
  {
    const cplx mu{2.5, 0.75};
    if (!on_laplacian(lap, mu)) {
      const cplx d = fam.D(mu).value;
      const cplx dc = fam.D(std::conj(mu)).value;
      rec.at_most("conjugation_D", std::abs(dc - std::conj(d)) / std::max(std::abs(d), 1e-300), 1e-8);
    }
    const cplx d0 = fam.D(0.0).value;
    rec.at_most("D_real_on_real_axis", std::abs(d0.imag()) / std::max(std::abs(d0), 1e-300), 1e-8);
  }
  {
    const CMatrix k0 = fam0.K(-1.0);
    const cplx d0 = det2(k0).value;
    std::vector<double> kd, dd;
    for (double lambda : {1.0, 0.1, 0.01, 0.001}) {
      const CMatrix k = DispersionFamily(b, s, lambda).K(-1.0);
      kd.push_back((k - k0).norm());
      dd.push_back(std::abs(det2(k).value - d0));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < kd.size(); ++i) decreasing = decreasing && (kd[i] < kd[i - 1] || kd[i] < 1e-14);
    rec.add("hs_convergence", kd.back(), kd.front(), decreasing, "||K_l(-1) - K_0(-1)||_F: " + seq(kd));
    rec.add("hs_det_distance", dd.back(), dd.front(), dd.back() <= dd.front(), "|D(l,-1) - D(0,-1)|: " + seq(dd), false);
  }
  {
    double worst = 0.0;
    for (cplx mu : {cplx{-1.0, 0.0}, cplx{2.5, 0.75}, cplx{-4.0, 1.5}}) {
      if (on_laplacian(lap, mu)) continue;
      const double h = 1e-5;
      const cplx fd = (fam.D(mu + h).value - fam.D(mu - h).value) / (2.0 * h * fam.D(mu).value);
      const cplx tr = fam.logderiv_mu(mu);
      worst = std::max(worst, std::abs(tr - fd) / std::max(std::abs(fd), 1e-300));
    }
    rec.at_most("logderiv_trace_formula", worst, 1e-6, "trace formula vs central difference of D");
  }
  return rec.take();
}

}  // namespace vortstab
