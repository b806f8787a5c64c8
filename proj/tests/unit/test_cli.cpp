#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vortstab_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vortstab;
using namespace vortstab::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "vortstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("vortstab_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("value parsers") {
  CHECK(parse_complex("0.5") == cplx{0.5, 0.0});
  CHECK(parse_complex("-0.7,0.4") == cplx{-0.7, 0.4});
  CHECK_THROWS_AS(parse_complex("1,2,3"), ConfigError);
  CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
  CHECK_THROWS_AS(parse_complex("1.5x"), ConfigError);

  const Rect r = parse_rect("-7,-5,-1,1");
  CHECK(r.re_min == -7.0);
  CHECK(r.im_max == 1.0);
  CHECK_THROWS_AS(parse_rect("1,2,3"), ConfigError);
  CHECK_THROWS_AS(parse_rect("2,1,0,1"), ConfigError);
}

TEST_CASE("config documents") {
  const auto c = config_from_json(json::parse(R"({
    "state": {"m": 7},
    "truncation": {"mode": "subspace", "j": 2, "k": 6, "P": 12},
    "params": {"lambda": [0.5, "0.3,1.2", {"re": 2, "im": -1}], "rect": [[-7, -5, -1, 1], "-5,-3,-1,1"],
               "grid": 40, "ladder": [8, 16]},
    "output": {"directory": "somewhere", "formats": ["json"]}
  })"));
  CHECK(c.state.m == 7);
  CHECK(std::get<Subspace>(c.truncation) == Subspace{7, 2, 6, 12});
  REQUIRE(c.lambdas.size() == 3);
  CHECK(c.lambdas[1] == cplx{0.3, 1.2});
  CHECK(c.lambdas[2] == cplx{2.0, -1.0});
  CHECK(c.rects.size() == 2);
  CHECK(c.grid == 40);
  CHECK(c.output.directory == "somewhere");
  CHECK(c.output.json);
  CHECK_FALSE(c.output.csv);

  const auto full = config_from_json(json::parse(R"({"truncation": {"mode": "full2d", "N1": 8, "N2": 8}})"));
  CHECK(std::get<Full2D>(full.truncation) == Full2D{8, 8});

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus": {}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"truncation": {"mode": "banded"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"truncation": {"j": 2}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"state": {"m": 1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"params": {"grid": "many"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"output": {"formats": ["xml"]}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("exit codes and structured errors") {
  auto r = invoke({"bogus"});
  CHECK(r.status == 2);
  const auto e = json::parse(r.err);
  CHECK(e["error"]["kind"] == "unknown_command");

  r = invoke({"scan", "--trunc", "0"});
  CHECK(r.status == 2);
  CHECK(json::parse(r.err)["error"]["kind"] == "config");

  r = invoke({"scan", "--no-such-flag"});
  CHECK(r.status == 2);

  r = invoke({"count", "--out", fresh_dir("norect").string()});
  CHECK(r.status == 2);

  r = invoke({"lin-check", "--mode", "full2d", "--trunc", "4"});
  CHECK(r.status == 2);

  r = invoke({"spectrum", "--operator", "nope"});
  CHECK(r.status == 2);

  r = invoke({"--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("lin-check") != std::string::npos);

  // Module error at run time: a rectangle with an eigenvalue of A_0 on its edge.
  const auto dir = fresh_dir("edge");
  r = invoke({"count", "--lambda", "0", "--rect=-6,-5,-1,1", "--trunc", "8", "--out", dir.string()});
  CHECK(r.status == 1);
  CHECK(json::parse(r.err)["error"]["kind"] == "invalid_argument");
  CHECK_FALSE(fs::exists(dir / "count.json"));
}

TEST_CASE("lin-check (4,1,4,16)") {
  const auto dir = fresh_dir("lin");
  const auto r = invoke({"lin-check", "--m", "4", "--j", "1", "--k", "4", "--trunc", "16", "--out", dir.string()});
  CHECK(r.status == 0);
  const auto j = read_json(dir / "lin_check.json");
  CHECK(j["criterionFires"] == false);
  CHECK(j["negativeCount"] == 0);
  CHECK(j["subspaceCondition"] == false);
  CHECK(r.out.find("criterionFires=false") != std::string::npos);
}

TEST_CASE("scan (4,1,3,32) is byte-deterministic") {
  const auto a = fresh_dir("scan_a");
  const auto b = fresh_dir("scan_b");
  const std::vector<std::string> common{"scan", "--m", "4", "--j", "1", "--k", "3", "--trunc", "32"};
  auto args = common;
  args.insert(args.end(), {"--out", a.string()});
  REQUIRE(invoke(args).status == 0);
  args = common;
  args.insert(args.end(), {"--out", b.string()});
  REQUIRE(invoke(args).status == 0);

  const auto roots = read_json(a / "roots.json");
  REQUIRE(roots["roots"].size() == 1);
  CHECK(roots["roots"][0]["lambdaStar"].get<double>() == doctest::Approx(0.7236749828804645).epsilon(1e-9));
  CHECK(slurp(a / "roots.json") == slurp(b / "roots.json"));
  CHECK(slurp(a / "scan.csv") == slurp(b / "scan.csv"));
  CHECK(slurp(a / "scan.csv").rfind("lambda,D_re,D_im\n", 0) == 0);
}

TEST_CASE("verify (4,1,3,16)") {
  const auto dir = fresh_dir("verify");
  const auto r = invoke({"verify", "--trunc", "16", "--seed", "7", "--out", dir.string()});
  CHECK(r.status == 0);
  const auto j = read_json(dir / "verify.json");
  CHECK(j["passed"] == true);
  for (const auto& c : j["checks"]) {
    if (c["name"].get<std::string>().rfind("factorization", 0) == 0) CHECK(c["value"].get<double>() <= 1e-12);
  }
}

TEST_CASE("config file with flag overrides and format selection") {
  const auto dir = fresh_dir("cfg");
  fs::create_directories(dir);
  const auto cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"state": {"m": 4}, "truncation": {"j": 1, "k": 3, "P": 4},
                             "params": {"operator": "A0"}, "output": {"formats": ["csv"]}})";
  const auto r = invoke({"spectrum", "--config", cfg.string(), "--trunc", "1", "--dump-matrix", "--out", (dir / "o").string()});
  CHECK(r.status == 0);
  CHECK_FALSE(fs::exists(dir / "o" / "spectrum.json"));
  CHECK(slurp(dir / "o" / "spectrum.csv") == "index,re,im\n0,-6,0\n1,2,0\n2,18,0\n");
  CHECK(fs::exists(dir / "o" / "matrix.csv"));

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(invoke({"spectrum", "--config", (dir / "broken.json").string()}).status == 2);
  CHECK(invoke({"spectrum", "--config", (dir / "missing.json").string()}).status == 2);
}

TEST_CASE("default output directory from the environment") {
  const auto dir = fresh_dir("env");
  ::setenv("VORTSTAB_OUT", dir.string().c_str(), 1);
  const auto r = invoke({"det", "--trunc", "4", "--lambda", "0.5", "--mu", "0", "--mu=-1"});
  ::unsetenv("VORTSTAB_OUT");
  CHECK(r.status == 0);
  const auto csv = slurp(dir / "det.csv");
  CHECK(csv.rfind("lambda_re,lambda_im,mu_re,mu_im,D_re,D_im,logModulus\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("count, validate, refine, neg-count") {
  const auto dir = fresh_dir("misc");
  auto r = invoke({"count", "--trunc", "8", "--lambda", "0", "--rect=-7,-5,-1,1", "--rect=-5,-3,-1,1", "--out",
                   dir.string()});
  CHECK(r.status == 0);
  CHECK(slurp(dir / "count.csv") == "reMin,reMax,imMin,imMax,winding\n-7,-5,-1,1,1\n-5,-3,-1,1,0\n");

  r = invoke({"validate", "--trunc", "16", "--grid", "64", "--out", dir.string()});
  CHECK(r.status == 0);
  CHECK(read_json(dir / "validate.json")["passed"] == true);

  r = invoke({"refine", "--quantity", "negative_count", "--ladder", "4,8,16", "--out", dir.string()});
  CHECK(r.status == 0);
  CHECK(read_json(dir / "refine.json")["levels"].size() == 3);

  r = invoke({"neg-count", "--trunc", "16", "--lambda", "0.01", "--lambda", "160", "--out", dir.string()});
  CHECK(r.status == 0);
  const auto pts = read_json(dir / "neg_count.json")["points"];
  CHECK(pts[0]["count"] == 1);
  CHECK(pts[1]["count"] == 0);
}

TEST_CASE("limits reports the continuum projection gap as a failed assertion") {
  const auto dir = fresh_dir("limits");
  const auto r = invoke({"limits", "--mode", "full2d", "--trunc", "4", "--out", dir.string()});
  CHECK(r.status == 1);
  const auto j = read_json(dir / "limits.json");
  CHECK(j["passed"] == false);
  CHECK(j["kMonotone"] == true);
}

TEST_CASE("installed binary runs") {
  const char* tool = std::getenv("VORTSTAB_TOOL");
  if (tool == nullptr) return;
  const auto dir = fresh_dir("binary");
  const std::string cmd = std::string(tool) + " lin-check --k 3 --out " + dir.string() + " > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(read_json(dir / "lin_check.json")["criterionFires"] == true);
}
