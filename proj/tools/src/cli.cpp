#include "vortstab_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "vortstab/errors.hpp"
#include "vortstab/report_io.hpp"

namespace vortstab::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw ConfigError("cannot parse " + what + " from '" + text + "'");
  return v;
}

// Typed getters that turn json type errors into ConfigError naming the key.
template <typename T>
T get_as(const json& section, const char* key, const std::string& where, T fallback) {
  if (!section.contains(key)) return fallback;
  try {
    return section.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

cplx complex_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) return parse_complex(v.get<std::string>());
  if (v.is_object() && v.contains("re")) {
    const double im = v.contains("im") ? v.at("im").get<double>() : 0.0;
    return {v.at("re").get<double>(), im};
  }
  throw ConfigError(where + ": expected a number, \"re,im\" or {\"re\":..,\"im\":..}");
}

std::vector<cplx> complex_list(const json& v, const std::string& where) {
  std::vector<cplx> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(complex_from_json(e, where));
  } else {
    out.push_back(complex_from_json(v, where));
  }
  return out;
}

Rect rect_from_json(const json& v) {
  if (v.is_string()) return parse_rect(v.get<std::string>());
  if (v.is_array() && v.size() == 4) {
    Rect r{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
    if (!(r.re_min < r.re_max && r.im_min < r.im_max)) throw ConfigError("rectangle must satisfy reMin<reMax, imMin<imMax");
    return r;
  }
  throw ConfigError("params.rect: expected [reMin,reMax,imMin,imMax] or \"reMin,reMax,imMin,imMax\"");
}

SteadyState state_from_json(const json& st) {
  const int m = get_as<int>(st, "m", "state", 4);
  try {
    if (st.contains("gprime") || st.contains("u")) {
      auto list = [&](const char* key) {
        return get_as<std::vector<double>>(st, key, "state", {});
      };
      return make_shear_state(m, list("u"), list("stream"), list("vorticity"), list("gprime"),
                              get_as<double>(st, "gprimeSup", "state", -1.0));
    }
    return make_single_mode_shear(m);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
}

Truncation truncation_from_json(const json& tr, int m) {
  const std::string mode = get_as<std::string>(tr, "mode", "truncation", "subspace");
  Truncation t;
  if (mode == "subspace") {
    t = Subspace{m, get_as<int>(tr, "j", "truncation", 1), get_as<int>(tr, "k", "truncation", 3),
                 get_as<int>(tr, "P", "truncation", 16)};
  } else if (mode == "full2d") {
    t = Full2D{get_as<int>(tr, "N1", "truncation", 8), get_as<int>(tr, "N2", "truncation", 8)};
  } else {
    throw ConfigError("truncation.mode must be subspace or full2d, got '" + mode + "'");
  }
  try {
    validate(t);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("truncation: ") + e.what());
  }
  return t;
}

json& section(json& doc, const char* name) {
  if (!doc.contains(name)) doc[name] = json::object();
  if (!doc[name].is_object()) throw ConfigError(std::string("config section ") + name + " must be an object");
  return doc[name];
}

double scan_upper(const RunConfig& c) {
  return c.lambda_max > 0.0 ? c.lambda_max : 4.0 * c.state.gprime_sup;
}

ScanOptions scan_options(const RunConfig& c) {
  ScanOptions o;
  o.lambda_min = c.lambda_min;
  o.lambda_max = c.lambda_max;
  o.grid_points = c.grid;
  o.tol = c.tol;
  o.complex_search = c.complex_search;
  return o;
}

bool is_lambda_dependent(const std::string& op) {
  return op == "A_lambda" || op == "K_lambda" || op == "K_tilde" || op == "R";
}

SpectralMatrix assemble(const std::string& op, BasisPtr b, const SteadyState& s, cplx lambda, cplx mu) {
  if (op == "A_lambda") return op_A_lambda(b, s, lambda);
  if (op == "A0") return op_A0(b, s);
  if (op == "L0") return op_L0(b, s);
  if (op == "Lvor") return op_Lvor(b, s);
  if (op == "K_lambda") return op_K_lambda(b, s, lambda, mu);
  if (op == "K0") return op_K0(b, s, mu);
  if (op == "K_tilde") return op_K_tilde(b, s, lambda);
  if (op == "R") return op_resolvent_L0(b, s, lambda);
  if (op == "P0") return op_P0(b, s);
  if (op == "G") return op_multiplier_gprime(b, s);
  if (op == "minus_laplacian") return op_minus_laplacian(b);
  throw ConfigError("unknown operator '" + op + "'");
}

// Everything a command needs, checked before any heavy computation.
void precheck(const std::string& command, const RunConfig& c, const ModeBasis& basis) {
  try {
    require_compatible(basis, c.state);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (c.grid < 2) throw ConfigError("params.grid must be >= 2");
  if (!(c.tol > 0.0)) throw ConfigError("params.tol must be positive");
  if (!(c.lambda_min > 0.0)) throw ConfigError("params.lambdaMin must be positive");
  if (command == "scan" || command == "validate" || command == "neg-count") {
    if (!(scan_upper(c) > c.lambda_min)) throw ConfigError("params.lambdaMax must exceed params.lambdaMin");
  }
  if (command == "spectrum") {
    const auto& names = operator_names();
    if (std::find(names.begin(), names.end(), c.op) == names.end()) throw ConfigError("unknown operator '" + c.op + "'");
  }
  if (command == "count") {
    if (c.rects.empty()) throw ConfigError("count needs at least one --rect");
    if (c.plane != "mu" && c.plane != "lambda") throw ConfigError("params.plane must be mu or lambda");
  }
  if (command == "lin-check" && !basis.is_subspace() && !c.allow_full2d) {
    throw ConfigError("lin-check on a full2d truncation needs --allow-full2d: A0 has a kernel there");
  }
  if (command == "refine") {
    try {
      (void)parse_refine_quantity(c.quantity);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (!c.ladder.empty() && c.ladder.size() < 2) throw ConfigError("params.ladder needs at least two sizes");
  }
  if (command == "limits") {
    for (const auto& l : c.lambdas) {
      if (l.imag() != 0.0 || !(l.real() > 0.0)) throw ConfigError("limits needs positive real lambdas");
    }
  }
}

class Emitter {
 public:
  explicit Emitter(const OutputSpec& spec) : spec_(spec) {}

  void json_file(const std::string& name, const json& doc) {
    if (!spec_.json) return;
    pending_.emplace_back(name, doc.dump(2) + "\n");
  }
  void csv_file(const std::string& name, const std::string& text) {
    if (!spec_.csv) return;
    pending_.emplace_back(name, text);
  }
  // Files are written only after the whole command has succeeded.
  std::vector<std::string> flush() {
    std::vector<std::string> written;
    for (const auto& [name, text] : pending_) {
      io::write_atomic(spec_.directory / name, text);
      written.push_back(name);
    }
    pending_.clear();
    return written;
  }

 private:
  OutputSpec spec_;
  std::vector<std::pair<std::string, std::string>> pending_;
};

json header(const std::string& command, const RunConfig& c) {
  return json{{"command", command}, {"state", io::to_json(c.state)}, {"truncation", io::to_json(c.truncation)}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string fmt(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

std::vector<cplx> or_default(const std::vector<cplx>& v, std::vector<cplx> fallback) {
  return v.empty() ? fallback : v;
}

struct Outcome {
  int status = kOk;
  std::string summary;
};

Outcome cmd_spectrum(const RunConfig& c, BasisPtr b, Emitter& em) {
  const cplx lambda = or_default(c.lambdas, {0.5}).front();
  const cplx mu = or_default(c.mus, {0.0}).front();
  const auto mat = assemble(c.op, b, c.state, lambda, mu);
  const auto res = linalg::eig(mat.entries);
  json doc = header("spectrum", c);
  doc["operator"] = c.op;
  if (is_lambda_dependent(c.op)) doc["lambda"] = io::to_json(lambda);
  if (c.op == "K_lambda" || c.op == "K0") doc["mu"] = io::to_json(mu);
  doc["dimension"] = mat.dim();
  doc["backwardError"] = res.backward_error;
  json ev = json::array();
  for (const auto& z : res.eigenvalues) ev.push_back(io::to_json(z));
  doc["eigenvalues"] = ev;
  em.json_file("spectrum.json", doc);
  em.csv_file("spectrum.csv", io::spectrum_csv(res.eigenvalues));
  if (c.dump_matrix) em.csv_file("matrix.csv", io::matrix_csv(mat.entries));
  std::string head;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, res.eigenvalues.size()); ++i) {
    head += (i ? ", " : "") + fmt(res.eigenvalues[i]);
  }
  return {kOk, "spectrum: " + c.op + " n=" + std::to_string(mat.dim()) + " first [" + head + "]"};
}

Outcome cmd_det(const RunConfig& c, BasisPtr b, Emitter& em) {
  const auto lambdas = or_default(c.lambdas, {0.5});
  const auto mus = or_default(c.mus, {0.0});
  std::vector<io::DetTraceRow> rows;
  json entries = json::array();
  for (const auto& lambda : lambdas) {
    DispersionFamily fam(b, c.state, lambda);
    for (const auto& mu : mus) {
      const DetResult d = fam.D(mu);
      rows.push_back({lambda, mu, d});
      entries.push_back(json{{"lambda", io::to_json(lambda)},
                             {"mu", io::to_json(mu)},
                             {"D", io::to_json(d.value)},
                             {"logModulus", d.log_modulus},
                             {"phase", d.phase},
                             {"zeroToPrecision", d.zero_to_precision}});
    }
  }
  json doc = header("det", c);
  doc["values"] = entries;
  em.json_file("det.json", doc);
  em.csv_file("det.csv", io::det_trace_csv(rows));
  std::string summary = "det: " + std::to_string(rows.size()) + " point(s)";
  if (rows.size() == 1) summary += ", D=" + fmt(rows.front().d.value);
  return {kOk, summary};
}

Outcome cmd_scan(const RunConfig& c, BasisPtr b, Emitter& em) {
  const ScanReport rep = scan_unstable(b, c.state, scan_options(c));
  json doc = header("scan", c);
  doc.update(io::to_json(rep));
  em.json_file("roots.json", doc);
  em.csv_file("scan.csv", io::scan_csv(rep));
  std::string summary = "scan: " + std::to_string(rep.roots.size()) + " real root(s) in [" + fmt(rep.lambda_min) + ", " +
                        fmt(rep.lambda_max) + "]";
  for (const auto& r : rep.roots) summary += " lambda*=" + fmt(r.lambda_star);
  if (c.complex_search) summary += ", " + std::to_string(rep.complex_boxes.size()) + " complex box(es)";
  return {kOk, summary};
}

Outcome cmd_count(const RunConfig& c, BasisPtr b, Emitter& em) {
  std::vector<CountReport> counts;
  if (c.plane == "lambda") {
    for (const auto& r : c.rects) counts.push_back(contour_count_lambda(b, c.state, r));
  } else {
    const cplx lambda = or_default(c.lambdas, {0.5}).front();
    DispersionFamily fam(b, c.state, lambda);
    for (const auto& r : c.rects) counts.push_back(contour_count(fam, r));
  }
  json doc = header("count", c);
  doc["plane"] = c.plane;
  if (c.plane == "mu") doc["lambda"] = io::to_json(or_default(c.lambdas, {0.5}).front());
  json arr = json::array();
  for (const auto& r : counts) arr.push_back(io::to_json(r));
  doc["counts"] = arr;
  em.json_file("count.json", doc);
  em.csv_file("count.csv", io::count_csv(counts));
  std::string summary = "count: windings";
  for (const auto& r : counts) summary += " " + std::to_string(r.winding);
  return {kOk, summary};
}

Outcome cmd_lin_check(const RunConfig& c, BasisPtr b, Emitter& em) {
  LinOptions o;
  o.allow_full2d = c.allow_full2d;
  const LinReport rep = lin_check(b, c.state, o);
  json doc = header("lin-check", c);
  doc.update(io::to_json(rep));
  if (const auto* s = std::get_if<Subspace>(&c.truncation)) doc["subspaceCondition"] = subspace_condition(s->m, s->j, s->k);
  em.json_file("lin_check.json", doc);
  return {kOk, "lin-check: negativeCount=" + std::to_string(rep.negative_count) +
                   " hasKernel=" + (rep.has_kernel ? "true" : "false") +
                   " criterionFires=" + (rep.criterion_fires ? "true" : "false")};
}

Outcome cmd_verify(const RunConfig& c, BasisPtr b, Emitter& em) {
  VerifyOptions o;
  o.seed = c.seed;
  const VerificationReport rep = run_verification(b, c.state, o);
  json doc = header("verify", c);
  doc.update(io::to_json(rep));
  em.json_file("verify.json", doc);
  int failed = 0;
  std::string names;
  for (const auto& ch : rep.checks) {
    if (ch.gating && !ch.passed) {
      ++failed;
      names += " " + ch.name;
    }
  }
  if (failed == 0) return {kOk, "verify: " + std::to_string(rep.checks.size()) + " checks, all gating checks passed"};
  return {kFailed, "verify: " + std::to_string(failed) + " gating check(s) failed:" + names};
}

Outcome cmd_validate(const RunConfig& c, BasisPtr b, Emitter& em) {
  ValidationOptions o;
  o.scan = scan_options(c);
  const ValidationReport rep = cross_validate(b, c.state, o);
  json doc = header("validate", c);
  doc.update(io::to_json(rep));
  em.json_file("validate.json", doc);
  const std::string tail = " (" + std::to_string(rep.entries.size()) + " unstable eigenvalue(s), max mismatch " +
                           fmt(rep.max_mismatch) + ")";
  if (rep.passed) return {kOk, "validate: passed" + tail};
  return {kFailed, "validate: FAILED" + tail + ": " + (rep.failures.empty() ? "" : rep.failures.front())};
}

Outcome cmd_limits(const RunConfig& c, BasisPtr b, Emitter& em) {
  std::vector<double> lambdas;
  for (const auto& l : or_default(c.lambdas, {1.0, 0.1, 0.01, 0.001})) lambdas.push_back(l.real());
  const cplx mu = or_default(c.mus, {-1.0}).front();
  LimitOptions o;
  o.seed = c.seed;
  const LimitReport rep = limit_studies(b, c.state, lambdas, mu, o);
  json doc = header("limits", c);
  doc["seed"] = c.seed;
  doc.update(io::to_json(rep));
  em.json_file("limits.json", doc);
  em.csv_file("limits.csv", io::limits_csv(rep));
  const std::string tail = " (K distance " + fmt(rep.k_dist.front()) + " -> " + fmt(rep.k_dist.back()) + ")";
  if (rep.passed) return {kOk, "limits: passed" + tail};
  std::string why;
  for (const auto& f : rep.failures) why += "; " + f;
  return {kFailed, "limits: FAILED" + tail + why};
}

Outcome cmd_refine(const RunConfig& c, Emitter& em) {
  std::vector<int> sizes = c.ladder.empty() ? std::vector<int>{8, 16, 32, 64} : c.ladder;
  std::vector<Truncation> ladder;
  for (int n : sizes) {
    if (const auto* s = std::get_if<Subspace>(&c.truncation)) {
      ladder.push_back(Subspace{s->m, s->j, s->k, n});
    } else {
      ladder.push_back(Full2D{n, n});
    }
  }
  for (const auto& t : ladder) {
    try {
      validate(t);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("params.ladder: ") + e.what());
    }
  }
  RefineOptions o;
  o.det_lambda = c.det_lambda;
  o.threshold = c.threshold;
  o.scan = scan_options(c);
  o.lin.allow_full2d = c.allow_full2d;
  const RefinementReport rep = refinement_study(c.state, ladder, parse_refine_quantity(c.quantity), o);
  json doc = header("refine", c);
  doc["threshold"] = c.threshold;
  doc.update(io::to_json(rep));
  em.json_file("refine.json", doc);
  em.csv_file("refine.csv", io::refine_csv(rep));
  return {kOk, "refine: " + c.quantity + " " + rep.verdict};
}

Outcome cmd_neg_count(const RunConfig& c, BasisPtr b, Emitter& em) {
  std::vector<double> grid;
  if (!c.lambdas.empty()) {
    for (const auto& l : c.lambdas) grid.push_back(l.real());
  } else {
    const double hi = c.lambda_max > 0.0 ? c.lambda_max : 10.0 * c.state.gprime_sup;
    const double ratio = std::log(hi / c.lambda_min) / (c.grid - 1);
    for (int i = 0; i < c.grid; ++i) grid.push_back(c.lambda_min * std::exp(ratio * i));
    grid.back() = hi;
  }
  const auto pts = negative_count_vs_lambda(b, c.state, grid);
  json doc = header("neg-count", c);
  doc["points"] = io::to_json(pts);
  em.json_file("neg_count.json", doc);
  em.csv_file("neg_count.csv", io::negative_count_csv(pts));
  int disagreements = 0;
  for (const auto& p : pts) {
    if (p.winding && *p.winding != p.eig_in_rect) ++disagreements;
  }
  const std::string summary = "neg-count: " + std::to_string(pts.size()) + " lambda(s), count " +
                              std::to_string(pts.front().count) + " -> " + std::to_string(pts.back().count);
  if (disagreements == 0) return {kOk, summary};
  return {kFailed, summary + ", " + std::to_string(disagreements) + " winding/eigensolve disagreement(s)"};
}

void structured_error(std::ostream& err, const std::string& command, const std::string& kind, const std::string& msg,
                      const json& extra = json::object()) {
  json e{{"command", command}, {"kind", kind}, {"message", msg}};
  e.update(extra);
  err << json{{"error", e}}.dump() << "\n";
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"spectrum", "det",    "scan",   "count",  "lin-check",
                                              "verify",   "validate", "limits", "refine", "neg-count"};
  return names;
}

const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> names{"A_lambda", "A0", "L0", "Lvor", "K_lambda", "K0",
                                              "K_tilde",  "R",  "P0", "G",    "minus_laplacian"};
  return names;
}

cplx parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_double(parts[0], "complex value"), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
  throw ConfigError("complex value must be 're' or 're,im', got '" + text + "'");
}

Rect parse_rect(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError("rectangle must be 'reMin,reMax,imMin,imMax', got '" + text + "'");
  Rect r{parse_double(parts[0], "reMin"), parse_double(parts[1], "reMax"), parse_double(parts[2], "imMin"),
         parse_double(parts[3], "imMax")};
  if (!(r.re_min < r.re_max && r.im_min < r.im_max)) throw ConfigError("rectangle must satisfy reMin<reMax, imMin<imMax");
  return r;
}

RunConfig config_from_json(const json& input) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  json doc = input;
  for (const auto& [key, _] : doc.items()) {
    if (key != "state" && key != "truncation" && key != "params" && key != "output") {
      throw ConfigError("unknown config section '" + key + "'");
    }
  }
  RunConfig c;
  c.state = state_from_json(section(doc, "state"));
  c.truncation = truncation_from_json(section(doc, "truncation"), c.state.m);

  const json& p = section(doc, "params");
  try {
    if (p.contains("lambda")) c.lambdas = complex_list(p.at("lambda"), "params.lambda");
    if (p.contains("mu")) c.mus = complex_list(p.at("mu"), "params.mu");
    if (p.contains("rect")) {
      const json& r = p.at("rect");
      if (r.is_array() && !r.empty() && (r[0].is_array() || r[0].is_string())) {
        for (const auto& e : r) c.rects.push_back(rect_from_json(e));
      } else {
        c.rects.push_back(rect_from_json(r));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  c.op = get_as<std::string>(p, "operator", "params", c.op);
  c.plane = get_as<std::string>(p, "plane", "params", c.plane);
  c.lambda_min = get_as<double>(p, "lambdaMin", "params", c.lambda_min);
  c.lambda_max = get_as<double>(p, "lambdaMax", "params", c.lambda_max);
  c.grid = get_as<int>(p, "grid", "params", c.grid);
  c.tol = get_as<double>(p, "tol", "params", c.tol);
  c.complex_search = get_as<bool>(p, "complexSearch", "params", c.complex_search);
  c.seed = get_as<std::uint64_t>(p, "seed", "params", c.seed);
  c.allow_full2d = get_as<bool>(p, "allowFull2d", "params", c.allow_full2d);
  c.dump_matrix = get_as<bool>(p, "dumpMatrix", "params", c.dump_matrix);
  c.ladder = get_as<std::vector<int>>(p, "ladder", "params", c.ladder);
  c.quantity = get_as<std::string>(p, "quantity", "params", c.quantity);
  c.threshold = get_as<double>(p, "threshold", "params", c.threshold);
  c.det_lambda = get_as<double>(p, "detLambda", "params", c.det_lambda);

  const json& o = section(doc, "output");
  std::string dir = get_as<std::string>(o, "directory", "output", "");
  if (dir.empty()) {
    const char* env = std::getenv("VORTSTAB_OUT");
    dir = (env && *env) ? env : ".";
  }
  c.output.directory = dir;
  if (o.contains("formats")) {
    const auto formats = get_as<std::vector<std::string>>(o, "formats", "output", {});
    c.output.csv = c.output.json = false;
    for (const auto& f : formats) {
      if (f == "csv") {
        c.output.csv = true;
      } else if (f == "json") {
        c.output.json = true;
      } else {
        throw ConfigError("output.formats entries must be csv or json, got '" + f + "'");
      }
    }
    if (!c.output.csv && !c.output.json) throw ConfigError("output.formats is empty");
  }
  return c;
}

int run(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto& names = commands();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    structured_error(err, command, "unknown_command", "unknown command '" + command + "'");
    return kConfig;
  }
  try {
    const BasisPtr basis = build_basis(config.truncation);
    precheck(command, config, *basis);
    Emitter em(config.output);
    Outcome res;
    if (command == "spectrum") res = cmd_spectrum(config, basis, em);
    if (command == "det") res = cmd_det(config, basis, em);
    if (command == "scan") res = cmd_scan(config, basis, em);
    if (command == "count") res = cmd_count(config, basis, em);
    if (command == "lin-check") res = cmd_lin_check(config, basis, em);
    if (command == "verify") res = cmd_verify(config, basis, em);
    if (command == "validate") res = cmd_validate(config, basis, em);
    if (command == "limits") res = cmd_limits(config, basis, em);
    if (command == "refine") res = cmd_refine(config, em);
    if (command == "neg-count") res = cmd_neg_count(config, basis, em);
    em.flush();
    out << res.summary << "\n";
    return res.status;
  } catch (const ConfigError& e) {
    structured_error(err, command, "config", e.what());
    return kConfig;
  } catch (const SingularSystem& e) {
    structured_error(err, command, "singular_system", e.what(), json{{"conditionEstimate", e.condition_estimate()}});
  } catch (const InvalidArgument& e) {
    structured_error(err, command, "invalid_argument", e.what());
  } catch (const ConvergenceError& e) {
    structured_error(err, command, "convergence", e.what());
  } catch (const std::exception& e) {
    structured_error(err, command, "internal", e.what());
  }
  return kFailed;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral stability analysis of 2D Euler shear flows on the torus"};
  app.set_help_flag("-h,--help", "Show help");

  std::string command;
  std::string config_path;
  app.add_option("command", command, "spectrum | det | scan | count | lin-check | verify | validate | limits | refine | neg-count")
      ->required();
  app.add_option("--config", config_path, "JSON config file (sections state, truncation, params, output)");

  std::optional<int> m, j, k, trunc, grid;
  std::optional<std::string> mode, out_dir, op, plane, quantity;
  std::optional<double> lambda_min, lambda_max, tol, threshold, det_lambda;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> rects, lambdas, mus, formats;
  std::vector<int> ladder;
  bool allow_full2d = false, dump_matrix = false, complex_search = false;

  app.add_option("--m", m, "Shear wavenumber m");
  app.add_option("--j", j, "Subspace sine offset j");
  app.add_option("--k", k, "Subspace x-wavenumber k");
  app.add_option("--trunc", trunc, "P (subspace) or N1=N2 (full2d)");
  app.add_option("--mode", mode, "subspace | full2d");
  app.add_option("--lambda-min", lambda_min, "Scan lower bound");
  app.add_option("--lambda-max", lambda_max, "Scan upper bound");
  app.add_option("--grid", grid, "Scan grid points");
  app.add_option("--tol", tol, "Root tolerance");
  app.add_option("--rect", rects, "reMin,reMax,imMin,imMax (repeatable)");
  app.add_option("--lambda", lambdas, "re or re,im (repeatable)");
  app.add_option("--mu", mus, "re or re,im (repeatable)");
  app.add_option("--operator", op, "Operator for spectrum");
  app.add_option("--plane", plane, "count in the mu plane (default) or the lambda plane");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--ladder", ladder, "Refinement sizes, e.g. 8,16,32,64")->delimiter(',');
  app.add_option("--quantity", quantity, "lambda_star | negative_count | det");
  app.add_option("--threshold", threshold, "Refinement convergence threshold");
  app.add_option("--det-lambda", det_lambda, "lambda for the det refinement quantity");
  app.add_option("--out", out_dir, "Output directory (default $VORTSTAB_OUT or .)");
  app.add_option("--format", formats, "csv, json or both")->delimiter(',');
  app.add_flag("--allow-full2d", allow_full2d, "Allow lin-check on a full2d truncation");
  app.add_flag("--dump-matrix", dump_matrix, "spectrum: also write matrix.csv");
  app.add_flag("--complex-search", complex_search, "scan: also count complex roots by winding");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    structured_error(err, command, "config", e.what());
    return kConfig;
  }

  RunConfig config;
  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + config_path + "' is not valid JSON: " + e.what());
      }
      if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    }
    json& st = section(doc, "state");
    json& tr = section(doc, "truncation");
    json& pa = section(doc, "params");
    json& ou = section(doc, "output");
    if (m) st["m"] = *m;
    if (mode) tr["mode"] = *mode;
    if (j) tr["j"] = *j;
    if (k) tr["k"] = *k;
    if (trunc) {
      if (tr.value("mode", std::string("subspace")) == "full2d") {
        tr["N1"] = *trunc;
        tr["N2"] = *trunc;
      } else {
        tr["P"] = *trunc;
      }
    }
    if (lambda_min) pa["lambdaMin"] = *lambda_min;
    if (lambda_max) pa["lambdaMax"] = *lambda_max;
    if (grid) pa["grid"] = *grid;
    if (tol) pa["tol"] = *tol;
    if (!rects.empty()) pa["rect"] = rects;
    if (!lambdas.empty()) pa["lambda"] = lambdas;
    if (!mus.empty()) pa["mu"] = mus;
    if (op) pa["operator"] = *op;
    if (plane) pa["plane"] = *plane;
    if (seed) pa["seed"] = *seed;
    if (!ladder.empty()) pa["ladder"] = ladder;
    if (quantity) pa["quantity"] = *quantity;
    if (threshold) pa["threshold"] = *threshold;
    if (det_lambda) pa["detLambda"] = *det_lambda;
    if (allow_full2d) pa["allowFull2d"] = true;
    if (dump_matrix) pa["dumpMatrix"] = true;
    if (complex_search) pa["complexSearch"] = true;
    if (out_dir) ou["directory"] = *out_dir;
    if (!formats.empty()) ou["formats"] = formats;
    config = config_from_json(doc);
  } catch (const ConfigError& e) {
    structured_error(err, command, "config", e.what());
    return kConfig;
  }
  return run(command, config, out, err);
}

}  // namespace vortstab::cli
