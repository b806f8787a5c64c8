#include "vortstab/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vortstab/errors.hpp"

namespace vortstab {

namespace {

void require_finite(const std::vector<double>& c, const char* name) {
  for (double v : c) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string("non-finite coefficient in ") + name);
  }
}

}  // namespace

int SteadyState::max_harmonic() const {
  auto top = [](const std::vector<double>& c) {
    for (std::size_t q = c.size(); q-- > 0;) {
      if (c[q] != 0.0) return static_cast<int>(q);
    }
    return 0;
  };
  return std::max({top(u_profile), top(stream), top(vorticity), top(gprime)});
}

bool SteadyState::at_rest() const {
  return std::all_of(u_profile.begin(), u_profile.end(), [](double v) { return v == 0.0; });
}

SteadyState make_single_mode_shear(int m) {
  if (m < 2) throw InvalidArgument("single-mode shear needs m >= 2, got " + std::to_string(m));
  const auto len = static_cast<std::size_t>(m) + 1;
  SteadyState s;
  s.m = m;
  s.u_profile.assign(len, 0.0);
  s.stream.assign(len, 0.0);
  s.vorticity.assign(len, 0.0);
  s.u_profile[m] = 1.0;
  s.stream[m] = 1.0 / m;
  s.vorticity[m] = static_cast<double>(m);
  s.gprime = {static_cast<double>(m) * m};
  s.gprime_sup = static_cast<double>(m) * m;
  return s;
}

SteadyState make_shear_state(int m, std::vector<double> u_profile, std::vector<double> stream,
                             std::vector<double> vorticity, std::vector<double> gprime, double gprime_sup) {
  if (m < 2) throw InvalidArgument("shear state needs m >= 2, got " + std::to_string(m));
  require_finite(u_profile, "u_profile");
  require_finite(stream, "stream");
  require_finite(vorticity, "vorticity");
  require_finite(gprime, "gprime");
  SteadyState s;
  s.m = m;
  s.u_profile = std::move(u_profile);
  s.stream = std::move(stream);
  s.vorticity = std::move(vorticity);
  s.gprime = std::move(gprime);
  if (gprime_sup < 0.0) {
    gprime_sup = 0.0;
    for (double g : s.gprime) gprime_sup += std::abs(g);
  }
  if (!std::isfinite(gprime_sup)) throw InvalidArgument("non-finite gprime_sup");
  s.gprime_sup = gprime_sup;
  return s;
}

double eval_cosine(const std::vector<double>& c, double y) {
  double acc = 0.0;
  for (std::size_t q = 0; q < c.size(); ++q) acc += c[q] * std::cos(static_cast<double>(q) * y);
  return acc;
}

double eval_sine(const std::vector<double>& c, double y) {
  double acc = 0.0;
  for (std::size_t q = 1; q < c.size(); ++q) acc += c[q] * std::sin(static_cast<double>(q) * y);
  return acc;
}

double eval_sine_derivative(const std::vector<double>& c, double y) {
  double acc = 0.0;
  for (std::size_t q = 1; q < c.size(); ++q) {
    const double qd = static_cast<double>(q);
    acc += c[q] * qd * std::cos(qd * y);
  }
  return acc;
}

double check_equilibrium(const SteadyState& s, int quadrature_points) {
  if (quadrature_points <= 0 || quadrature_points < 4 * s.max_harmonic()) {
    throw InvalidArgument("check_equilibrium needs at least 4 * max harmonic = " +
                          std::to_string(4 * s.max_harmonic()) + " points, got " +
                          std::to_string(quadrature_points));
  }
  double residual = 0.0;
  const double h = 2.0 * std::numbers::pi / quadrature_points;
  for (int i = 0; i < quadrature_points; ++i) {
    const double y = i * h;
    const double r = eval_sine_derivative(s.vorticity, y) - eval_cosine(s.gprime, y) * eval_sine_derivative(s.stream, y);
    residual = std::max(residual, std::abs(r));
  }
  return residual;
}

}  // namespace vortstab
