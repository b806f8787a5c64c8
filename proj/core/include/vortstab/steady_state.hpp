#pragma once

#include <vector>

namespace vortstab {

/// Shear equilibrium u0 = (f(y), 0) of the 2D Euler equations.
///
/// Coefficient lists are indexed by harmonic q = 0, 1, 2, ...:
///   f(y)          = sum_q u_profile[q] cos(q y)
///   psi0(y)       = sum_q stream[q]    sin(q y)     (psi0' = f)
///   omega0(y)     = sum_q vorticity[q] sin(q y)     (omega0 = -psi0'' = -f')
///   g'(psi0(y))   = sum_q gprime[q]    cos(q y)
/// Sine lists ignore their q = 0 entry.
struct SteadyState {
  int m = 2;
  std::vector<double> u_profile;
  std::vector<double> stream;
  std::vector<double> vorticity;
  std::vector<double> gprime;
  double gprime_sup = 0.0;

  /// Highest harmonic carried by any coefficient list.
  int max_harmonic() const;
  /// True when every velocity coefficient is zero (the rest state).
  bool at_rest() const;
};

/// u0 = (cos m y, 0): psi0 = sin(m y)/m, omega0 = m sin(m y), g' = m^2.
SteadyState make_single_mode_shear(int m);

/// Builds a state from explicit coefficient lists. When gprime_sup is negative
/// it is replaced by sum_q |gprime[q]|, an upper bound on sup |g'(psi0)|.
SteadyState make_shear_state(int m, std::vector<double> u_profile, std::vector<double> stream,
                             std::vector<double> vorticity, std::vector<double> gprime,
                             double gprime_sup = -1.0);

/// max over an equispaced y-grid of |omega0'(y) - g'(psi0(y)) psi0'(y)|.
/// Requires quadrature_points >= 4 * max_harmonic().
double check_equilibrium(const SteadyState& s, int quadrature_points);

/// Point evaluations of the coefficient series.
double eval_cosine(const std::vector<double>& c, double y);
double eval_sine(const std::vector<double>& c, double y);
double eval_sine_derivative(const std::vector<double>& c, double y);

}  // namespace vortstab
