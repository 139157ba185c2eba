#include "test_support.hpp"

#include "sefpp/io/config.hpp"
#include "sefpp/io/tables.hpp"
#include "sefpp/io/trace_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace sefpp;
using namespace test;
namespace fs = std::filesystem;

namespace {

const char* kP1 = R"({
  "problem": {"type": "sefpp", "D1": [[0.5]], "D2": [["1/3"]],
              "T1": {"kind": "fixture", "name": "midpoint", "center": 4},
              "T2": {"kind": "fixture", "name": "midpoint", "center": 6},
              "x0": [1], "y0": [1], "known_solution": {"p": [4], "q": [6]}},
  "solver": {"mode": "norm-free", "tau": {"kind": "harmonic", "c": 1, "offset": 2}}
})";

std::string where(std::string_view text) {
  try {
    io::parse_run_config(text);
  } catch (const io::ConfigError& e) {
    return e.where();
  }
  return "<accepted>";
}

std::string message(std::string_view text) {
  try {
    io::parse_run_config(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "<accepted>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

int exit_code(const std::string& args, const fs::path& dir) {
  const std::string cmd = "cd '" + dir.string() + "' && '" SEFPP_CLI_PATH "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("sefpp_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("a full config parses and runs") {
  const auto cfg = io::parse_run_config(kP1);
  CHECK(cfg.type() == io::ProblemType::sefpp);
  CHECK(cfg.solver.mode == SolverMode::norm_free);
  CHECK(cfg.solver.tau->offset == 2.0);
  const auto trace = io::execute(cfg);
  CHECK(trace.converged());
  CHECK(trace.records.front().gamma == 34.0);
}

TEST_CASE("config errors name the offending field") {
  const std::string base = kP1;
  CHECK(where(replace(base, "\"harmonic\"", "\"cosine\"")) == "solver.tau.kind");
  CHECK(where(replace(base, "\"c\": 1", "\"c\": -1")) == "solver.tau");
  CHECK(where(replace(base, "\"x0\": [1]", "\"x0\": [1, 2]")) == "problem");
  CHECK(message(replace(base, "\"x0\": [1]", "\"x0\": [1, 2]")).find("x0") != std::string::npos);
  CHECK(where(replace(base, "\"mode\"", "\"mdoe\"")) == "solver.mdoe");
  CHECK(where(replace(base, "\"x0\": [1]", "\"x0\": [\"one\"]")) == "problem.x0[0]");
  CHECK(where(replace(base, "\"p\": [4]", "\"p\": [5]")) == "problem.known_solution");
  CHECK(where(replace(base, "{\"type\": \"sefpp\",", "{")) == "problem.type");
  CHECK(where("{\"problem\": ") .find("line") == 0);
  CHECK(where("[1, 2]") == "<root>");
  CHECK_THROWS_AS(io::load_run_config("/nonexistent/run.json"), io::ConfigError);

  // Norm-free audit surfaces as InvalidConfig from execute().
  const auto constant = io::parse_run_config(replace(base, "{\"kind\": \"harmonic\", \"c\": 1, \"offset\": 2}", "0.5"));
  CHECK_THROWS_AS(io::execute(constant), InvalidConfig);
}

TEST_CASE("number strings and matrix shorthands") {
  const std::string base = kP1;
  const auto cfg = io::parse_run_config(replace(base, "\"D1\": [[0.5]]", "\"D1\": \"1/2\""));
  CHECK(std::get<SefppProblem<double>>(cfg.problem).D1.matrix()(0, 0) == 0.5);
  CHECK(std::get<SefppProblem<double>>(cfg.problem).D2.matrix()(0, 0) == 1.0 / 3.0);
}

TEST_CASE("trace round trip is exact") {
  const auto trace = io::execute(io::parse_run_config(kP1));
  for (auto format : {io::TraceFormat::csv, io::TraceFormat::jsonl}) {
    std::stringstream s;
    io::write_trace(trace, format, s, 1);
    const auto back = format == io::TraceFormat::csv ? io::read_trace_csv(s) : io::read_trace_jsonl(s);
    REQUIRE(back.size() == trace.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& a = trace.records[i];
      const auto& b = back[i];
      REQUIRE(a.n == b.n);
      REQUIRE(a.x == b.x);
      REQUIRE(a.y == b.y);
      REQUIRE(a.coupling == b.coupling);
      REQUIRE(a.fix_x == b.fix_x);
      REQUIRE(a.fix_y == b.fix_y);
      REQUIRE(a.gamma == b.gamma);
      REQUIRE(a.k_norm == b.k_norm);
      REQUIRE(a.r_norm == b.r_norm);
    }
  }
  std::stringstream thin;
  io::write_trace_csv(trace, thin, 100);
  const auto rows = io::read_trace_csv(thin);
  CHECK(rows.front().n == 1);
  CHECK(rows.back().n == trace.last().n);
  CHECK(rows.size() == (trace.records.size() - 1) / 100 + 1 + ((trace.records.size() - 1) % 100 != 0));
}

TEST_CASE("reference tables") {
  const auto one = io::reproduce_table(1);
  CHECK(one.asserted);
  CHECK(one.passed());
  CHECK(one.checks.size() == 4);
  const auto two = io::reproduce_table(2);
  CHECK_FALSE(two.asserted);
  CHECK_FALSE(two.notes.empty());
  CHECK_THROWS_AS(io::reproduce_table(3), InvalidInput);
  std::ostringstream out;
  io::print_table_report(one, out);
  CHECK(out.str().find("x_100") != std::string::npos);
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch("cli");
  const std::string configs = SEFPP_CONFIG_DIR;
  CHECK(exit_code("run '" + configs + "/p1_known_norm.json'", dir) == 0);
  CHECK(fs::exists(dir / "p1_known_norm.csv"));
  CHECK(exit_code("run '" + configs + "/example1_decoupled.json'", dir) == 2);
  CHECK(exit_code("validate '" + configs + "/svip_affine.json'", dir) == 0);
  CHECK(exit_code("reproduce-tables 1", dir) == 0);
  CHECK(exit_code("reproduce-tables 3", dir) == 1);
  CHECK(exit_code("frobnicate", dir) == 1);

  const std::string base = kP1;
  std::ofstream(dir / "constant_tau.json") << replace(base, "{\"kind\": \"harmonic\", \"c\": 1, \"offset\": 2}", "0.5");
  CHECK(exit_code("run constant_tau.json", dir) == 1);
  std::ofstream(dir / "dims.json") << replace(base, "\"x0\": [1]", "\"x0\": [1, 2]");
  CHECK(exit_code("run dims.json", dir) == 1);

  // Pole of 1/x hit on the first step.
  std::ofstream(dir / "pole.json") << R"({
    "problem": {"type": "sefpp", "D1": 1, "D2": 1,
                "T1": {"kind": "rational", "numerator": [1], "denominator": [0, 1], "lipschitz": 1},
                "T2": {"kind": "identity"}, "x0": [0], "y0": [1]}})";
  CHECK(exit_code("run pole.json", dir) == 3);

  CHECK(exit_code("run '" + configs + "/p1_norm_free.json'", dir) == 0);
  const std::string first = slurp(dir / "p1_norm_free.jsonl");
  CHECK(exit_code("run '" + configs + "/p1_norm_free.json'", dir) == 0);
  CHECK(slurp(dir / "p1_norm_free.jsonl") == first);
  CHECK_FALSE(first.empty());
}

TEST_CASE("CLI trace of P1 has a monotone gamma column") {
  const fs::path dir = scratch("gamma");
  REQUIRE(exit_code("run '" SEFPP_CONFIG_DIR "/p1_known_norm.json'", dir) == 0);
  std::ifstream in(dir / "p1_known_norm.csv");
  const auto rows = io::read_trace_csv(in);
  REQUIRE(rows.size() > 2);
  CHECK(rows.front().gamma == 34.0);
  std::vector<double> g;
  for (const auto& r : rows) g.push_back(*r.gamma);
  CHECK(check_fejer<double>(g).holds);
}

TEST_CASE("output directory override") {
  const fs::path dir = scratch("outdir");
  const fs::path out = dir / "elsewhere";
  const std::string cmd = "SEFPP_OUTPUT_DIR='" + out.string() + "' '" SEFPP_CLI_PATH "' run '" SEFPP_CONFIG_DIR
                          "/sfp_interval.json' >/dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(out / "sfp_interval.csv"));
}
