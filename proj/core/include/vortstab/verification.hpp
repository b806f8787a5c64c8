#pragma once

#include <string>
#include <vector>

#include "vortstab/analysis.hpp"

namespace vortstab {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = true;
  /// Informational checks are reported but never fail the suite.
  bool gating = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240917;
  /// Parameter grid for the factorization identities.
  std::vector<cplx> lambdas{{0.5, 0.0}, {0.3, 1.2}, {-0.7, 0.4}, {2.0, -1.5}};
  std::vector<cplx> mus{{0.0, 0.0}, {-1.0, 0.0}, {2.5, 0.75}, {-3.0, -2.0}};
  /// Identity residuals are gated at identity_tol * max(1, ||-Delta - mu||_max / 1000).
  double identity_tol = 1e-12;
};

/// Runs every structural identity and property of the operator and
/// determinant layers on one basis / state pair.
VerificationReport run_verification(BasisPtr b, const SteadyState& s, const VerifyOptions& opts = {});

/// Greedy pairing of a multiset with its complex conjugate; returns the worst
/// pairing distance.
double conjugation_mismatch(const std::vector<cplx>& values);

}  // namespace vortstab
