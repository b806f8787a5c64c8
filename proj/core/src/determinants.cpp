#include "vortstab/determinants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "vortstab/errors.hpp"

namespace vortstab {

namespace {

constexpr double kZeroFactor = 1e-12;

std::string format_cplx(cplx z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string format_rect(const Rect& r) {
  std::ostringstream os;
  os << "[" << r.re_min << ", " << r.re_max << "] x [" << r.im_min << ", " << r.im_max << "]";
  return os.str();
}

void validate_rect(const Rect& r) {
  if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max)) {
    throw InvalidArgument("degenerate rectangle " + format_rect(r));
  }
}

// Panel breakpoints along the segment a -> b, graded so that every panel is at
// most kStepPerDistance times its start point's distance to the nearest
// singularity. A panel of length h then stays at least h/2 away from every
// singularity, which keeps 16-point Gauss-Legendre in its geometric regime.
constexpr double kStepPerDistance = 0.6;
constexpr int kMaxPanelsPerEdge = 1 << 16;

std::vector<double> graded_nodes(cplx a, cplx b, const std::vector<cplx>& singular) {
  const double len = std::abs(b - a);
  const double floor = len / kMaxPanelsPerEdge;
  std::vector<double> nodes{0.0};
  double t = 0.0;
  while (t < len) {
    const cplx z = a + (b - a) * (t / len);
    double d = std::numeric_limits<double>::infinity();
    for (const auto& w : singular) d = std::min(d, std::abs(z - w));
    const double step = std::max(kStepPerDistance * d, floor);
    t = (len - t <= step) ? len : t + step;
    nodes.push_back(t / len);
  }
  return nodes;
}

struct Contour {
  std::array<cplx, 5> corners;
  std::array<std::vector<double>, 4> nodes;  // fractions of each edge
};

Contour make_contour(const Rect& r, const std::vector<cplx>& singular) {
  Contour c;
  c.corners = {cplx{r.re_min, r.im_min}, cplx{r.re_max, r.im_min}, cplx{r.re_max, r.im_max}, cplx{r.re_min, r.im_max},
               cplx{r.re_min, r.im_min}};
  for (std::size_t e = 0; e < 4; ++e) c.nodes[e] = graded_nodes(c.corners[e], c.corners[e + 1], singular);
  return c;
}

// (1 / 2 pi i) * contour integral of f over the positively oriented boundary,
// composite 16-point Gauss-Legendre with every base panel split `split` ways.
cplx winding_integral(const Contour& c, int split, const std::function<cplx(cplx)>& f, int& panels_used) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();

  cplx total{0.0, 0.0};
  panels_used = 0;
  for (std::size_t e = 0; e < 4; ++e) {
    const cplx a = c.corners[e];
    const cplx span = c.corners[e + 1] - a;
    const auto& nodes = c.nodes[e];
    cplx edge{0.0, 0.0};
    for (std::size_t p = 0; p + 1 < nodes.size(); ++p) {
      const double width = (nodes[p + 1] - nodes[p]) / split;
      for (int q = 0; q < split; ++q) {
        const double half = 0.5 * width;
        const double mid = nodes[p] + (q + 0.5) * width;
        cplx panel{0.0, 0.0};
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] == 0.0) {
            panel += w[i] * f(a + span * mid);
            continue;
          }
          panel += w[i] * (f(a + span * (mid - half * x[i])) + f(a + span * (mid + half * x[i])));
        }
        edge += panel * half;
        ++panels_used;
      }
    }
    total += edge * span;
  }
  return total / (2.0 * std::numbers::pi * cplx{0.0, 1.0});
}

struct Integrated {
  cplx value;
  int panels;
  int levels;
};

// Starts from the graded mesh and halves every panel until two successive
// estimates agree.
Integrated refine_winding(const Rect& r, const ContourOptions& opts, const std::vector<cplx>& singular,
                          const std::function<cplx(cplx)>& f) {
  const Contour contour = make_contour(r, singular);
  int panels = 0;
  cplx previous = winding_integral(contour, 1, f, panels);
  for (int level = 1; level <= opts.max_levels; ++level) {
    const cplx current = winding_integral(contour, 1 << level, f, panels);
    if (std::abs(current - previous) < opts.agreement) return {current, panels, level};
    previous = current;
  }
  std::ostringstream os;
  os << "winding integral over " << format_rect(r) << " did not stabilise after " << opts.max_levels
     << " refinements (last estimate " << format_cplx(previous) << ")";
  throw ConvergenceError(os.str());
}

CountReport finish_count(const Rect& r, const Integrated& in, int poles, const ContourOptions& opts) {
  CountReport out;
  out.rectangle = r;
  out.raw_winding = in.value;
  out.laplacian_poles_inside = poles;
  out.quadrature_estimate = in.value.real() + poles;
  out.edge_samples = in.panels * 16;
  out.levels = in.levels;
  const double rounded = std::round(out.quadrature_estimate);
  if (std::abs(out.quadrature_estimate - rounded) > opts.integer_slack || std::abs(in.value.imag()) > opts.integer_slack ||
      rounded < 0.0) {
    std::ostringstream os;
    os << "winding estimate " << format_cplx(in.value) << " (+" << poles << " poles) over " << format_rect(r)
       << " is not integer-stable";
    throw ConvergenceError(os.str());
  }
  out.winding = static_cast<int>(rounded);
  return out;
}

void require_clear_boundary(const Rect& r, const std::vector<cplx>& points, double clearance, const char* what) {
  for (const auto& z : points) {
    if (r.boundary_distance(z) < clearance) {
      throw InvalidArgument(std::string(what) + " " + format_cplx(z) + " lies within " + std::to_string(clearance) +
                            " of the boundary of " + format_rect(r));
    }
  }
}

}  // namespace

double Rect::boundary_distance(cplx z) const {
  const double x = z.real();
  const double y = z.imag();
  if (x >= re_min && x <= re_max && y >= im_min && y <= im_max) {
    return std::min({x - re_min, re_max - x, y - im_min, im_max - y});
  }
  const double dx = std::max({re_min - x, 0.0, x - re_max});
  const double dy = std::max({im_min - y, 0.0, y - im_max});
  return std::hypot(dx, dy);
}

cplx det2_product(const std::vector<cplx>& kappa) {
  cplx acc{1.0, 0.0};
  for (const auto& k : kappa) acc *= (1.0 - k) * std::exp(k);
  return acc;
}

DetResult det2(const CMatrix& k) {
  DetResult out;
  if (k.size() == 0) return out;
  out.kappa = linalg::eig(k).eigenvalues;

  std::vector<std::size_t> order(out.kappa.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(out.kappa[a]) > std::abs(out.kappa[b]); });

  cplx log_sum{0.0, 0.0};
  for (auto i : order) {
    const cplx kap = out.kappa[i];
    const cplx factor = 1.0 - kap;
    if (std::abs(factor) <= kZeroFactor) {
      out.zero_to_precision = true;
      log_sum += kap;
      continue;
    }
    log_sum += std::log(factor) + kap;
  }
  out.phase = log_sum.imag();
  if (out.zero_to_precision) {
    out.log_modulus = -std::numeric_limits<double>::infinity();
    out.value = 0.0;
  } else {
    out.log_modulus = log_sum.real();
    out.value = std::exp(log_sum);
  }
  return out;
}

DispersionFamily::DispersionFamily(BasisPtr basis, const SteadyState& s, cplx lambda)
    : basis_(std::move(basis)), lambda_(lambda) {
  laplacian_ = minus_laplacian_diagonal(*basis_);
  g_ = op_multiplier_gprime(basis_, s).entries;
  if (is_limit()) {
    m_ = g_ - g_ * op_P0(basis_, s).entries;
  } else {
    resolvent_ = op_resolvent_L0(basis_, s, lambda).entries;
    m_ = g_ - g_ * (lambda * resolvent_);
  }
}

CMatrix DispersionFamily::K(cplx mu) const {
  require_off_laplacian(*basis_, mu);
  CMatrix k = m_;
  for (Eigen::Index c = 0; c < k.cols(); ++c) k.col(c) /= (laplacian_(c) - mu);
  return k;
}

CMatrix DispersionFamily::A_minus(cplx mu) const {
  CMatrix a = -m_;
  for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, i) += laplacian_(i) - mu;
  return a;
}

DetResult DispersionFamily::D(cplx mu) const { return det2(K(mu)); }

namespace {

cplx trace_formula(const CMatrix& k, const CMatrix& dk) {
  const auto n = k.rows();
  CMatrix x;
  try {
    x = linalg::solve(CMatrix::Identity(n, n) - k, k);
  } catch (const SingularSystem& e) {
    throw SingularSystem(std::string("mu is an eigenvalue of A_lambda: ") + e.what(), e.condition_estimate());
  }
  // Tr(X dK) without forming the product.
  return -(x.transpose().cwiseProduct(dk)).sum();
}

}  // namespace

cplx DispersionFamily::logderiv_mu(cplx mu) const {
  const CMatrix k = K(mu);
  CMatrix dk = k;
  for (Eigen::Index c = 0; c < dk.cols(); ++c) dk.col(c) /= (laplacian_(c) - mu);
  return trace_formula(k, dk);
}

cplx DispersionFamily::logderiv_lambda(cplx mu) const {
  if (is_limit()) throw InvalidArgument("logderiv_lambda is undefined in the lambda -> 0 limit");
  const CMatrix k = K(mu);
  // d(lambda R)/dlambda = R - lambda R^2
  CMatrix dk = -(g_ * (resolvent_ - lambda_ * (resolvent_ * resolvent_)));
  for (Eigen::Index c = 0; c < dk.cols(); ++c) dk.col(c) /= (laplacian_(c) - mu);
  return trace_formula(k, dk);
}

DetResult evaluate_D(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu) {
  return DispersionFamily(std::move(b), s, lambda).D(mu);
}

cplx logderiv_mu(BasisPtr b, const SteadyState& s, cplx lambda, cplx mu) {
  return DispersionFamily(std::move(b), s, lambda).logderiv_mu(mu);
}

CountReport contour_count(const DispersionFamily& family, const Rect& rect, const ContourOptions& opts) {
  validate_rect(rect);
  const auto spectrum = linalg::eig(family.A_minus(0.0)).eigenvalues;
  require_clear_boundary(rect, spectrum, opts.boundary_clearance,
                         family.is_limit() ? "eigenvalue of A_0" : "eigenvalue of A_lambda");

  std::vector<cplx> poles;
  for (Eigen::Index i = 0; i < family.laplacian().size(); ++i) poles.emplace_back(family.laplacian()(i), 0.0);
  require_clear_boundary(rect, poles, opts.boundary_clearance, "-Delta eigenvalue");
  const int inside = static_cast<int>(std::count_if(poles.begin(), poles.end(), [&](cplx z) { return rect.contains(z); }));

  std::vector<cplx> singular = spectrum;
  singular.insert(singular.end(), poles.begin(), poles.end());
  const auto in = refine_winding(rect, opts, singular, [&](cplx mu) { return family.logderiv_mu(mu); });
  return finish_count(rect, in, inside, opts);
}

CountReport contour_count(BasisPtr b, const SteadyState& s, cplx lambda, const Rect& rect, const ContourOptions& opts) {
  return contour_count(DispersionFamily(std::move(b), s, lambda), rect, opts);
}

CountReport contour_count_lambda(BasisPtr b, const SteadyState& s, const Rect& rect, const ContourOptions& opts) {
  validate_rect(rect);
  if (rect.re_min <= 0.0 && rect.re_max >= 0.0) {
    throw InvalidArgument("lambda rectangle " + format_rect(rect) + " meets the imaginary axis");
  }
  const auto lvor = linalg::eig(op_Lvor(b, s).entries).eigenvalues;
  require_clear_boundary(rect, lvor, opts.boundary_clearance, "eigenvalue of L_vor");

  // Zeros sit in sigma(L_vor), poles in sigma(L0) on the imaginary axis.
  std::vector<cplx> singular = lvor;
  const auto l0 = linalg::eig_hermitian(cplx{0.0, 1.0} * op_L0(b, s).entries);
  for (Eigen::Index i = 0; i < l0.values.size(); ++i) singular.emplace_back(0.0, -l0.values(i));
  const auto in = refine_winding(rect, opts, singular, [&](cplx lambda) {
    return DispersionFamily(b, s, lambda).logderiv_lambda(0.0);
  });
  return finish_count(rect, in, 0, opts);
}

}  // namespace vortstab
