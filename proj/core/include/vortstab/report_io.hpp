#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vortstab/verification.hpp"

namespace vortstab::io {

using nlohmann::json;

json to_json(cplx z);
json to_json(const Truncation& t);
json to_json(const SteadyState& s);
json to_json(const Rect& r);
json to_json(const DetResult& d);
json to_json(const CountReport& c);
json to_json(const LinReport& r);
json to_json(const std::vector<NegativeCountPoint>& pts);
json to_json(const ScanReport& r);
json to_json(const ValidationReport& r);
json to_json(const LimitReport& r);
json to_json(const RefinementReport& r);
json to_json(const VerificationReport& r);

/// Round-trip text for a double ("%.17g").
std::string format_number(double v);

// CSV documents; the header row is fixed per schema.
std::string scan_csv(const ScanReport& r);                         // lambda,D_re,D_im
std::string spectrum_csv(const std::vector<cplx>& eigenvalues);    // index,re,im
std::string count_csv(const std::vector<CountReport>& counts);     // reMin,reMax,imMin,imMax,winding
std::string matrix_csv(const CMatrix& m);                          // row,col,re,im
std::string negative_count_csv(const std::vector<NegativeCountPoint>& pts);  // lambda,count,eig_in_rect,winding
std::string limits_csv(const LimitReport& r);
std::string refine_csv(const RefinementReport& r);

/// One row of a determinant evaluation trace.
struct DetTraceRow {
  cplx lambda;
  cplx mu;
  DetResult d;
};
// lambda_re,lambda_im,mu_re,mu_im,D_re,D_im,logModulus
std::string det_trace_csv(const std::vector<DetTraceRow>& rows);

/// Writes `content` to `path` through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace vortstab::io
