#include "vortstab/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vortstab/errors.hpp"

namespace vortstab::io {

namespace {

json doubles(const std::vector<double>& v) { return json(v); }

json complex_list(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Truncation& t) {
  if (const auto* f = std::get_if<Full2D>(&t)) return json{{"mode", "full2d"}, {"N1", f->n1}, {"N2", f->n2}};
  const auto& s = std::get<Subspace>(t);
  return json{{"mode", "subspace"}, {"m", s.m}, {"j", s.j}, {"k", s.k}, {"P", s.p_max}};
}

json to_json(const SteadyState& s) {
  return json{{"m", s.m},
              {"u", s.u_profile},
              {"stream", s.stream},
              {"vorticity", s.vorticity},
              {"gprime", s.gprime},
              {"gprimeSup", s.gprime_sup}};
}

json to_json(const Rect& r) {
  return json{{"reMin", r.re_min}, {"reMax", r.re_max}, {"imMin", r.im_min}, {"imMax", r.im_max}};
}

json to_json(const DetResult& d) {
  return json{{"value", to_json(d.value)},
              {"logModulus", d.log_modulus},
              {"phase", d.phase},
              {"zeroToPrecision", d.zero_to_precision},
              {"kappa", complex_list(d.kappa)}};
}

json to_json(const CountReport& c) {
  return json{{"rectangle", to_json(c.rectangle)},
              {"winding", c.winding},
              {"quadratureEstimate", c.quadrature_estimate},
              {"rawWinding", to_json(c.raw_winding)},
              {"laplacianPolesInside", c.laplacian_poles_inside},
              {"edgeSamples", c.edge_samples},
              {"levels", c.levels}};
}

json to_json(const LinReport& r) {
  return json{{"negativeCount", r.negative_count},
              {"minAbsEigenvalue", r.min_abs_eigenvalue},
              {"kernelThreshold", r.kernel_threshold},
              {"hasKernel", r.has_kernel},
              {"criterionFires", r.criterion_fires},
              {"spectrumHead", doubles(r.spectrum_head)}};
}

json to_json(const std::vector<NegativeCountPoint>& pts) {
  json out = json::array();
  for (const auto& p : pts) {
    json row{{"lambda", p.lambda}, {"count", p.count}, {"eigInRect", p.eig_in_rect}, {"skipped", p.skipped}};
    row["winding"] = p.winding ? json(*p.winding) : json(nullptr);
    if (!p.note.empty()) row["note"] = p.note;
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const ScanReport& r) {
  json roots = json::array();
  for (const auto& root : r.roots) {
    roots.push_back(json{{"lambdaStar", root.lambda_star},
                         {"residual", root.residual},
                         {"bracket", json::array({root.bracket_lo, root.bracket_hi})}});
  }
  json boxes = json::array();
  for (const auto& b : r.complex_boxes) {
    boxes.push_back(json{{"rect", to_json(b.rect)}, {"winding", b.winding}, {"status", b.status}});
  }
  return json{{"roots", roots},
              {"complexBoxes", boxes},
              {"lambdaRange", json::array({r.lambda_min, r.lambda_max})},
              {"gridPoints", r.grid_points}};
}

json to_json(const ValidationReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json row{{"lvorEigenvalue", to_json(e.lvor_eigenvalue)}, {"absD", e.abs_d}, {"kernelGap", e.kernel_gap}};
    row["matchedRoot"] = e.matched_root ? json(*e.matched_root) : json(nullptr);
    row["rootRelDiff"] = e.root_rel_diff;
    entries.push_back(std::move(row));
  }
  json roots = json::array();
  for (const auto& root : r.roots) roots.push_back(root.lambda_star);
  return json{{"entries", entries},
              {"scanRoots", roots},
              {"maxMismatch", r.max_mismatch},
              {"passed", r.passed},
              {"failures", r.failures}};
}

json to_json(const LimitReport& r) {
  return json{{"lambdas", doubles(r.lambdas)},
              {"mu", to_json(r.mu)},
              {"phiNorm", r.phi_norm},
              {"projDist", doubles(r.proj_dist)},
              {"kDist", doubles(r.k_dist)},
              {"detDist", doubles(r.det_dist)},
              {"projDistDiscreteKernel", doubles(r.proj_dist_discrete)},
              {"kDistDiscreteKernel", doubles(r.k_dist_discrete)},
              {"spuriousKernelDim", r.spurious_kernel_dim},
              {"projPlateau", r.proj_plateau},
              {"kPlateau", r.k_plateau},
              {"projMonotone", r.proj_monotone},
              {"kMonotone", r.k_monotone},
              {"projFinalOk", r.proj_final_ok},
              {"kFinalOk", r.k_final_ok},
              {"passed", r.passed},
              {"failures", r.failures}};
}

json to_json(const RefinementReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    json row{{"truncation", to_json(l.truncation)}, {"dimension", l.dimension}, {"value", to_json(l.value)}};
    row["relDiff"] = l.rel_diff ? json(*l.rel_diff) : json(nullptr);
    levels.push_back(std::move(row));
  }
  return json{{"quantity", to_string(r.quantity)}, {"levels", levels}, {"converged", r.converged}, {"verdict", r.verdict}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(json{{"name", c.name},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"passed", c.passed},
                          {"gating", c.gating},
                          {"detail", c.detail}});
  }
  return json{{"checks", checks}, {"passed", r.passed()}};
}

std::string scan_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "lambda,D_re,D_im\n";
  for (const auto& s : r.samples) {
    os << format_number(s.lambda) << ',' << format_number(s.d.real()) << ',' << format_number(s.d.imag()) << '\n';
  }
  return os.str();
}

std::string spectrum_csv(const std::vector<cplx>& eigenvalues) {
  std::ostringstream os;
  os << "index,re,im\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    os << i << ',' << format_number(eigenvalues[i].real()) << ',' << format_number(eigenvalues[i].imag()) << '\n';
  }
  return os.str();
}

std::string count_csv(const std::vector<CountReport>& counts) {
  std::ostringstream os;
  os << "reMin,reMax,imMin,imMax,winding\n";
  for (const auto& c : counts) {
    os << format_number(c.rectangle.re_min) << ',' << format_number(c.rectangle.re_max) << ','
       << format_number(c.rectangle.im_min) << ',' << format_number(c.rectangle.im_max) << ',' << c.winding << '\n';
  }
  return os.str();
}

std::string matrix_csv(const CMatrix& m) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << r << ',' << c << ',' << format_number(m(r, c).real()) << ',' << format_number(m(r, c).imag()) << '\n';
    }
  }
  return os.str();
}

std::string negative_count_csv(const std::vector<NegativeCountPoint>& pts) {
  std::ostringstream os;
  os << "lambda,count,eig_in_rect,winding\n";
  for (const auto& p : pts) {
    os << format_number(p.lambda) << ',' << p.count << ',' << p.eig_in_rect << ',';
    if (p.winding) os << *p.winding;
    os << '\n';
  }
  return os.str();
}

std::string limits_csv(const LimitReport& r) {
  std::ostringstream os;
  os << "lambda,proj_dist,k_dist,det_dist,proj_dist_discrete,k_dist_discrete\n";
  for (std::size_t i = 0; i < r.lambdas.size(); ++i) {
    os << format_number(r.lambdas[i]) << ',' << format_number(r.proj_dist[i]) << ',' << format_number(r.k_dist[i]) << ','
       << format_number(r.det_dist[i]) << ',' << format_number(r.proj_dist_discrete[i]) << ','
       << format_number(r.k_dist_discrete[i]) << '\n';
  }
  return os.str();
}

std::string refine_csv(const RefinementReport& r) {
  std::ostringstream os;
  os << "level,size,dimension,value_re,value_im,rel_diff\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& l = r.levels[i];
    int size = 0;
    if (const auto* s = std::get_if<Subspace>(&l.truncation)) {
      size = s->p_max;
    } else {
      size = std::get<Full2D>(l.truncation).n1;
    }
    os << i << ',' << size << ',' << l.dimension << ',' << format_number(l.value.real()) << ','
       << format_number(l.value.imag()) << ',';
    if (l.rel_diff) os << format_number(*l.rel_diff);
    os << '\n';
  }
  return os.str();
}

std::string det_trace_csv(const std::vector<DetTraceRow>& rows) {
  std::ostringstream os;
  os << "lambda_re,lambda_im,mu_re,mu_im,D_re,D_im,logModulus\n";
  for (const auto& r : rows) {
    os << format_number(r.lambda.real()) << ',' << format_number(r.lambda.imag()) << ',' << format_number(r.mu.real())
       << ',' << format_number(r.mu.imag()) << ',' << format_number(r.d.value.real()) << ','
       << format_number(r.d.value.imag()) << ',' << format_number(r.d.log_modulus) << '\n';
  }
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace vortstab::io
