// Command-line front end: run a configured problem, validate a config, or
// reproduce the reference tables.
//
// Exit status: 0 converged (or table check passed), 1 malformed config,
// rejected parameters or usage error, 2 max_iters reached, 3 numerical failure.

#include "sefpp/io/config.hpp"
#include "sefpp/io/tables.hpp"
#include "sefpp/io/trace_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace sefpp;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitRejected = 1;
constexpr int kExitMaxIters = 2;
constexpr int kExitNumerical = 3;

fs::path trace_path(const fs::path& config_file, const io::OutputOptions& out) {
  fs::path p = out.path;
  if (p.empty())
    p = config_file.stem().string() + (out.format == io::TraceFormat::csv ? ".trace.csv" : ".trace.jsonl");
  if (const char* dir = std::getenv("SEFPP_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / p.filename();
  return p;
}

int run(const fs::path& file) {
  const io::RunConfig config = io::load_run_config(file);
  const IterationTrace<double> trace = io::execute(config);
  for (const auto& w : trace.warnings) std::cerr << "warning: " << w << '\n';

  const fs::path out = trace_path(file, config.output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream os(out, std::ios::binary);
  if (!os) throw Error("cannot write trace to " + out.string());
  io::write_trace(trace, config.output.format, os, config.output.log_every);

  std::cout << "status " << to_string(trace.reason) << '\n';
  // A failure while evaluating the start point leaves no records.
  if (!trace.records.empty()) {
    const auto& last = trace.last();
    std::cout << "iterations " << trace.records.size() - 1 << '\n'
              << "n " << last.n << '\n'
              << "coupling " << io::format_double(last.coupling) << '\n'
              << "fix_x " << io::format_double(last.fix_x) << '\n'
              << "fix_y " << io::format_double(last.fix_y) << '\n';
  }
  std::cout << "trace " << out.string() << '\n';
  if (!trace.failure.empty()) std::cerr << "numerical failure: " << trace.failure << '\n';

  switch (trace.reason) {
    case Termination::converged: return kExitConverged;
    case Termination::max_iters: return kExitMaxIters;
    case Termination::numerical_failure: break;
  }
  return kExitNumerical;
}

int validate_file(const fs::path& file) {
  const io::RunConfig config = io::load_run_config(file);
  std::cout << "ok " << io::to_string(config.type()) << ' ' << to_string(config.solver.mode) << '\n';
  return 0;
}

int reproduce(int id) {
  const io::TableReport report = io::reproduce_table(id);
  io::print_table_report(report, std::cout);
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split equality fixed-point solver"};
  app.require_subcommand(1);

  std::string file;
  auto* run_cmd = app.add_subcommand("run", "Solve the problem in a config file and write its trace");
  run_cmd->add_option("file", file, "JSON run configuration")->required();
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a config file without solving");
  validate_cmd->add_option("file", file, "JSON run configuration")->required();
  int table = 0;
  auto* tables_cmd = app.add_subcommand("reproduce-tables", "Recompute a reference table (1 or 2)");
  tables_cmd->add_option("id", table, "table id")->required()->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitRejected;
  }

  try {
    if (*run_cmd) return run(file);
    if (*validate_cmd) return validate_file(file);
    return reproduce(table);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRejected;
  }
}
