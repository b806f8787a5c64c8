// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vortstab/analysis.hpp"
#include "vortstab/determinants.hpp"
#include "vortstab/operators.hpp"

using namespace vortstab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
  std::vector<std::string> notes;  // informational lines printed under the verdict
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v, int digits = 12) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double maxabs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CMatrix eye(Eigen::Index n) { return CMatrix::Identity(n, n); }

// ---------------------------------------------------------------------------

Outcome closed_form_spectrum() {
  const int m = 4, j = 1, k = 3, P = 16;
  const auto ev = linalg::eig(op_A0(build_basis(Subspace{m, j, k, P}), make_single_mode_shear(m)).entries).eigenvalues;
  std::vector<double> expected;
  for (int p = -P; p <= P; ++p) {
    const int n = j + m * p;
    expected.push_back(n * n + k * k - m * m);
  }
  std::sort(expected.begin(), expected.end());
  double err = 0.0;
  for (std::size_t i = 0; i < ev.size(); ++i) err = std::max(err, std::abs(ev[i] - expected[i]));
  const bool head = std::abs(ev[0] - (-6.0)) <= 1e-10 && std::abs(ev[1] - 2.0) <= 1e-10 && std::abs(ev[2] - 18.0) <= 1e-10;
  Outcome o;
  o.passed = ev.size() == expected.size() && err <= 1e-10 && head;
  o.detail = "max |eig - (n^2+k^2-m^2)| = " + sci(err) + " (tol 1e-10); smallest " + fixed(ev[0].real()) + ", " +
             fixed(ev[1].real()) + ", " + fixed(ev[2].real());
  return o;
}

Outcome lin_criterion() {
  struct Case {
    int m, j, k;
    int count;
    bool fires;
  };
  Outcome o;
  o.passed = true;
  for (const Case c : {Case{4, 1, 3, 1, true}, Case{7, 2, 6, 1, true}, Case{4, 1, 4, 0, false}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = lin_check(build_basis(Subspace{c.m, c.j, c.k, 16}), make_single_mode_shear(c.m));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = rep.criterion_fires == c.fires && (!c.fires || rep.negative_count == c.count) && secs < 1.0;
    o.passed = o.passed && ok;
    std::ostringstream os;
    os << "(" << c.m << "," << c.j << "," << c.k << "): negativeCount " << rep.negative_count << ", fires "
       << (rep.criterion_fires ? "yes" : "no") << ", " << sci(secs) << " s";
    o.detail += (o.detail.empty() ? "" : "; ") + os.str();
  }
  return o;
}

Outcome main_theorem() {
  const int m = 4;
  const auto s = make_single_mode_shear(m);
  const auto b = build_basis(Subspace{m, 1, 3, 32});
  ScanOptions so;
  so.lambda_min = 0.01;
  so.lambda_max = 4.0 * m * m;
  const auto scan = scan_unstable(b, s, so);

  Outcome o;
  if (scan.roots.size() != 1) {
    o.detail = "expected exactly one real root in (0, 64), found " + std::to_string(scan.roots.size());
    return o;
  }
  const double star = scan.roots[0].lambda_star;
  const double abs_d = scan.roots[0].residual;

  const auto lvor = linalg::eig(op_Lvor(b, s).entries).eigenvalues;
  const auto top = *std::max_element(lvor.begin(), lvor.end(), [](cplx a, cplx c) { return a.real() < c.real(); });
  const double rel = std::abs(star - top.real()) / std::abs(top.real());

  const CMatrix a = op_A_lambda(b, s, star).entries;
  const auto aev = linalg::eig(a).eigenvalues;
  double min_abs = INFINITY;
  for (const auto& z : aev) min_abs = std::min(min_abs, std::abs(z));
  const double a_norm = linalg::two_norm(a);

  o.passed = star > 0.0 && star < 64.0 && abs_d <= 1e-6 && rel <= 1e-6 && std::abs(top.imag()) <= 1e-8 &&
             min_abs <= 1e-6 * a_norm;
  o.detail = "lambda* = " + fixed(star) + ", |D(lambda*,0)| = " + sci(abs_d) + " (tol 1e-6), max Re sigma(L_vor) = " +
             fixed(top.real()) + " (rel diff " + sci(rel) + ", tol 1e-6), min|sigma(A_lambda*)| / ||A|| = " +
             sci(min_abs / a_norm) + " (tol 1e-6)";
  return o;
}

Outcome factorizations() {
  const int m = 4;
  const auto s = make_single_mode_shear(m);
  const auto b = build_basis(Subspace{m, 1, 3, 16});
  const auto n = static_cast<Eigen::Index>(b->size());
  const CMatrix l0 = op_L0(b, s).entries;
  const CMatrix lvor = op_Lvor(b, s).entries;
  const CMatrix lap = op_minus_laplacian(b).entries;

  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> lambdas, mus;
  for (int i = 0; i < 5; ++i) {
    const double re = (0.1 + 2.9 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0);
    lambdas.emplace_back(re, -2.0 + 4.0 * u(rng));
  }
  for (int i = 0; i < 5; ++i) mus.emplace_back(-5.0 + 45.0 * u(rng), -3.0 + 6.0 * u(rng));

  double worst_a = 0.0, worst_v = 0.0;
  for (const auto& lambda : lambdas) {
    const CMatrix a = op_A_lambda(b, s, lambda).entries;
    for (const auto& mu : mus) {
      const CMatrix k = op_K_lambda(b, s, lambda, mu).entries;
      const CMatrix dmu = lap - mu * eye(n);
      worst_a = std::max(worst_a, maxabs((a - mu * eye(n)) - (eye(n) - k) * dmu));
    }
    const CMatrix kt = op_K_tilde(b, s, lambda).entries;
    worst_v = std::max(worst_v, maxabs((lambda * eye(n) - lvor) - (eye(n) - kt) * (lambda * eye(n) - l0)));
  }
  Outcome o;
  o.passed = worst_a <= 1e-12 && worst_v <= 1e-12;
  o.detail = "max ||(A-mu) - (I-K)(-Delta-mu)||_max = " + sci(worst_a) + ", max ||(lambda-L_vor) - (I-K~)(lambda-L0)||_max = " +
             sci(worst_v) + " over 5x5 (lambda,mu) (tol 1e-12)";
  return o;
}

Outcome resolvent_bound() {
  Outcome o;
  o.passed = true;
  const auto s = make_single_mode_shear(4);
  for (const Truncation t : {Truncation{Subspace{4, 1, 3, 16}}, Truncation{Full2D{8, 8}}}) {
    const auto b = build_basis(t);
    const CMatrix l0 = op_L0(b, s).entries;
    const double skew = maxabs(l0 + l0.adjoint());
    double worst = 0.0;
    for (cplx lambda : {cplx{0.1, 0.0}, cplx{0.5, 2.0}, cplx{3.0, -1.0}}) {
      const double r = linalg::two_norm(op_resolvent_L0(b, s, lambda).entries);
      worst = std::max(worst, r * std::abs(lambda.real()));
    }
    o.passed = o.passed && skew == 0.0 && worst <= 1.0 + 1e-10;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + (std::holds_alternative<Subspace>(t) ? "X_{3,1} P=16" : "Full2D{8,8}") +
                ": ||L0+L0^*|| = " + sci(skew) + ", max |Re lambda| ||R|| = " + fixed(worst, 15);
  }
  return o;
}

Outcome birman_schwinger() {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, 16});
  const cplx lambda = 0.5;
  const DispersionFamily fam(b, s, lambda);
  const auto ev = linalg::eig(op_A_lambda(b, s, lambda).entries).eigenvalues;

  // Reference grid of |D| away from the spectrum.
  std::vector<double> ref;
  for (int i = 0; i <= 10; ++i) {
    for (double im : {-2.0, -1.0, 1.0, 2.0}) ref.push_back(std::abs(fam.D(cplx{-5.0 + 8.5 * i, im}).value));
  }
  std::nth_element(ref.begin(), ref.begin() + static_cast<long>(ref.size() / 2), ref.end());
  const double median = ref[ref.size() / 2];

  double worst = 0.0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(fam.D(ev[static_cast<std::size_t>(i)]).value));

  const double re0 = ev[0].real(), re1 = ev[1].real(), re2 = ev[2].real(), re3 = ev[3].real();
  struct Box {
    Rect r;
    int want;
  };
  const std::vector<Box> boxes{{Rect{re0 + 0.5, re1 - 0.5, -1.0, 1.0}, 0},
                               {Rect{re0 - 1.0, 0.5 * (re0 + re1), -1.0, 1.0}, 1},
                               {Rect{re0 - 1.0, 0.5 * (re2 + re3), -1.0, 1.0}, 3}};
  bool counts_ok = true;
  std::string counts;
  for (const auto& box : boxes) {
    const auto inside = std::count_if(ev.begin(), ev.end(), [&](cplx z) { return box.r.contains(z); });
    const auto c = contour_count(fam, box.r);
    counts_ok = counts_ok && inside == box.want && c.winding == box.want;
    counts += (counts.empty() ? "" : ", ") + std::to_string(c.winding) + " (eig " + std::to_string(inside) + ", poles " +
              std::to_string(c.laplacian_poles_inside) + ")";
  }
  Outcome o;
  o.passed = worst <= 1e-6 * median && counts_ok;
  o.detail = "max |D(0.5, mu_i)| over 5 smallest = " + sci(worst) + " vs 1e-6 * median " + sci(median) +
             "; windings " + counts + ", expected 0, 1, 3";
  return o;
}

Outcome convergence_lemmas() {
  const auto rep = limit_studies(build_basis(Full2D{8, 8}), make_single_mode_shear(4), {1.0, 0.1, 0.01, 0.001}, -1.0);
  auto seq = [](const std::vector<double>& v) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : ", ") + fixed(x, 6);
    return "[" + out + "]";
  };
  auto strictly_decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] < v[i - 1])) return false;
    }
    return true;
  };
  const double ratio = rep.k_dist.back() / rep.k_dist.front();
  Outcome o;
  o.passed = strictly_decreasing(rep.proj_dist) && strictly_decreasing(rep.k_dist) && ratio < 0.05;
  o.detail = "||(lambda R - P0) phi|| = " + seq(rep.proj_dist) + ", ||K_lambda - K_0||_F = " + seq(rep.k_dist) +
             ", final/initial = " + fixed(ratio, 6) + " (need < 0.05)";
  const double dratio = rep.k_dist_discrete.back() / rep.k_dist_discrete.front();
  o.notes.push_back("info: assembled L0 has " + std::to_string(rep.spurious_kernel_dim) +
                    " kernel modes with k1 != 0 beyond the continuum P0; K-distance plateau ||G(P_ker - P0)(-Delta-mu)^-1||_F = " +
                    fixed(rep.k_plateau, 6));
  o.notes.push_back("info: against the projection onto ker(assembled L0): proj " + seq(rep.proj_dist_discrete) + ", K " +
                    seq(rep.k_dist_discrete) + ", final/initial = " + sci(dratio));
  return o;
}

Outcome trace_formula() {
  const auto s = make_single_mode_shear(4);
  const auto b = build_basis(Subspace{4, 1, 3, 16});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  int done = 0;
  while (done < 10) {
    const cplx lambda{(0.1 + 2.0 * u(rng)) * (u(rng) < 0.5 ? -1.0 : 1.0), -2.0 + 4.0 * u(rng)};
    const cplx mu{-8.0 + 48.0 * u(rng), -3.0 + 6.0 * u(rng)};
    // Regular point: well away from sigma(A_lambda) and from the poles of (-Delta - mu)^{-1}.
    const auto ev = linalg::eig(op_A_lambda(b, s, lambda).entries).eigenvalues;
    double gap = INFINITY;
    for (const auto& z : ev) gap = std::min(gap, std::abs(z - mu));
    for (std::size_t i = 0; i < b->size(); ++i) gap = std::min(gap, std::abs(b->laplacian(i) - mu));
    if (gap < 0.5) continue;
    const DispersionFamily fam(b, s, lambda);
    const cplx exact = fam.logderiv_mu(mu);
    const cplx fd = std::log(fam.D(mu + h).value / fam.D(mu - h).value) / (2.0 * h);
    worst = std::max(worst, std::abs(exact - fd) / std::abs(exact));
    ++done;
  }
  Outcome o;
  o.passed = worst <= 1e-6;
  o.detail = "max relative |trace formula - central difference| over 10 points = " + sci(worst) + " (tol 1e-6, h = 1e-5)";
  return o;
}

Outcome count_continuity() {
  const int m = 4;
  const auto s = make_single_mode_shear(m);
  const auto b = build_basis(Subspace{m, 1, 3, 16});
  const double hi = 10.0 * m * m;
  std::vector<double> grid;
  const int n = 40;
  for (int i = 0; i < n; ++i) grid.push_back(0.01 * std::pow(hi / 0.01, static_cast<double>(i) / (n - 1)));
  grid.back() = hi;
  const auto pts = negative_count_vs_lambda(b, s, grid);
  const int a0 = lin_check(b, s).negative_count;

  int mismatches = 0, skipped = 0;
  for (const auto& p : pts) {
    if (p.skipped || !p.winding) {
      ++skipped;
      continue;
    }
    if (*p.winding != p.eig_in_rect) ++mismatches;
  }
  int drop_at = -1;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].count != pts[i - 1].count) drop_at = static_cast<int>(i);
  }
  Outcome o;
  o.passed = pts.front().count == 1 && pts.front().count == a0 && pts.back().count == 0 && mismatches == 0 && skipped == 0;
  o.detail = "count(0.01) = " + std::to_string(pts.front().count) + " (A0: " + std::to_string(a0) + "), count(" +
             fixed(hi, 6) + ") = " + std::to_string(pts.back().count) + ", winding/eig mismatches " +
             std::to_string(mismatches) + ", skipped " + std::to_string(skipped) + " of " + std::to_string(pts.size());
  if (drop_at > 0) {
    o.notes.push_back("info: count changes between lambda = " + fixed(pts[static_cast<std::size_t>(drop_at) - 1].lambda, 6) +
                      " and " + fixed(pts[static_cast<std::size_t>(drop_at)].lambda, 6));
  }
  return o;
}

Outcome refinement() {
  const auto s = make_single_mode_shear(4);
  std::vector<Truncation> ladder;
  for (int p : {8, 16, 32, 64}) ladder.push_back(Subspace{4, 1, 3, p});
  const auto rep = refinement_study(s, ladder, RefineQuantity::LambdaStar);
  std::string values;
  for (const auto& l : rep.levels) {
    values += (values.empty() ? "" : ", ") + fixed(l.value.real(), 13);
    if (l.rel_diff) values += " (" + sci(*l.rel_diff) + ")";
  }
  const double last = rep.levels.back().rel_diff.value_or(INFINITY);
  Outcome o;
  o.passed = rep.converged && last < 1e-6;
  o.detail = "lambda* along P = 8,16,32,64: " + values + "; final rel diff " + sci(last) + " (tol 1e-6)";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form A0 spectrum on X_{k,j}", 1.0, closed_form_spectrum},
      {2, "Lin criterion", 3.0, lin_criterion},
      {3, "unstable eigenvalue via det2 and L_vor", 120.0, main_theorem},
      {4, "exact factorizations", 10.0, factorizations},
      {5, "skew-adjointness and resolvent bound", 5.0, resolvent_bound},
      {6, "Birman-Schwinger zeros and contour counts", 60.0, birman_schwinger},
      {7, "convergence lemmas (continuum P0)", 60.0, convergence_lemmas},
      {8, "log-derivative trace formula", 30.0, trace_formula},
      {9, "eigenvalue-count continuity in lambda", 120.0, count_continuity},
      {10, "refinement of lambda*", 600.0, refinement},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool ok = o.passed && in_time;
    if (!ok) ++failed;
    std::printf("%s [%d] %s: %s; %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.time_limit_s, in_time ? "" : " TIME EXCEEDED");
    for (const auto& note : o.notes) std::printf("       %s\n", note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
