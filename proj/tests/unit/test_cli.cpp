#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zigzag/cli.hpp"
#include "zigzag/io.hpp"

using namespace zz;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zigzag_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("solve, verify and mesh round trip") {
  const fs::path sol = scratch("g2.json");
  const fs::path trace = scratch("g2_trace.csv");
  const Run s = run({"solve", "--genus", "2", "--out", sol.string(), "--trace", trace.string()});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("side lengths") != std::string::npos);
  CHECK(slurp(trace).rfind("step,height,gradient_norm,stratum_distance", 0) == 0);

  const nlohmann::json doc = read_json(sol.string());
  CHECK(doc.at("schema_version") == kSchemaVersion);
  const SolutionRecord rec = load_solution(sol.string());
  CHECK(rec.converged);
  CHECK(rec.zigzag.genus == 2);
  CHECK(std::abs(rec.zigzag.side_lengths(0) - 0.566672260829188470) < 1e-8);

  // Lossless: record -> json -> record -> json is a fixed point.
  CHECK(record_to_json(record_from_json(record_to_json(rec))) == record_to_json(rec));
  CHECK(record_from_json(record_to_json(rec)).prev_ne.full() == rec.prev_ne.full());

  const Run v = run({"verify", sol.string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("deg g = 3") != std::string::npos);
  CHECK(v.out.find("total curvature = -12pi") != std::string::npos);
  CHECK(v.out.find("winding order = 3") != std::string::npos);
  CHECK(v.out.find("verify: PASS") != std::string::npos);

  const fs::path obj = scratch("g2.obj");
  const Run m = run({"mesh", sol.string(), "--resolution", "8", "--out", obj.string()});
  CHECK(m.code == 0);
  const std::string text = slurp(obj);
  CHECK(text.find("\nv ") != std::string::npos);
  CHECK(text.find("\nf ") != std::string::npos);
  CHECK(text.find("# sym") != std::string::npos);
  CHECK(run({"mesh", sol.string(), "--resolution", "4", "--out", obj.string()}).code == 1);
}

TEST_CASE("verify rejects a tampered solution") {
  const fs::path sol = scratch("g2_tampered.json");
  REQUIRE(run({"solve", "--genus", "2", "--out", sol.string()}).code == 0);
  nlohmann::json doc = read_json(sol.string());
  nlohmann::json& l = doc.at("record").at("side_lengths");
  l[0] = l[0].get<double>() + 1e-3;
  l[1] = l[1].get<double>() - 1e-3;
  write_json(sol.string(), doc);
  const Run v = run({"verify", sol.string()});
  CHECK(v.code == 3);
  CHECK(v.out.find("verify: FAIL") != std::string::npos);
}

TEST_CASE("genus 0 verify is vacuous") {
  const fs::path sol = scratch("g0.json");
  REQUIRE(run({"solve", "--genus", "0", "--out", sol.string()}).code == 0);
  const Run v = run({"verify", sol.string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("deg g = 1") != std::string::npos);
}

TEST_CASE("ladder failure writes a partial file") {
  const fs::path sol = scratch("g3_fail.json");
  fs::remove(sol.string() + ".partial");
  const Run s = run({"solve", "--genus", "3", "--tol", "1e-300", "--out", sol.string()});
  CHECK(s.code == 2);
  CHECK(s.err.find("ladder failed at genus 3") != std::string::npos);
  REQUIRE(fs::exists(sol.string() + ".partial"));
  const nlohmann::json partial = read_json(sol.string() + ".partial");
  CHECK(partial.at("partial") == true);
  CHECK(partial.at("failed_genus") == 3);
  CHECK(partial.at("ladder").size() == 4);
}

TEST_CASE("sweeps") {
  const Run e = run({"sweep", "ext", "--lambda", "-1,-1e-3,-1e-6"});
  CHECK(e.code == 0);
  std::istringstream lines(e.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "lambda,ext,ext_log_inv_abs_lambda");
  std::getline(lines, row);
  CHECK(std::abs(std::stod(row.substr(row.find(',') + 1)) - 2.0) < 1e-12);

  CHECK(run({"sweep", "ext"}).code == 1);
  CHECK(run({"sweep", "ext", "--lambda", "0.5"}).code == 1);

  const Run c = run({"sweep", "coalescence", "--genus", "3", "--j", "0", "--m", "1", "--delta",
                     "1e-2,5e-3,2e-3,1e-3,5e-4,2e-4,1e-4"});
  CHECK(c.code == 0);
  CHECK(c.out.find("delta") != std::string::npos);
  CHECK(c.err.find("log slopes") != std::string::npos);
  CHECK(run({"sweep", "coalescence", "--genus", "3", "--j", "0", "--m", "1"}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"solve"}).code == 1);
  CHECK(run({"solve", "--genus", "-1"}).code == 1);
  CHECK(run({"verify", scratch("missing.json").string()}).code == 1);
  CHECK(run({"--help"}).code == 0);
  const fs::path junk = scratch("junk.json");
  std::ofstream(junk) << "{\"schema_version\": 99}";
  CHECK(run({"verify", junk.string()}).code == 1);
}
