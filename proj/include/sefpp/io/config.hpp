#pragma once

#include "sefpp/applications.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

namespace sefpp::io {

/// Malformed or inconsistent run configuration. what() starts with the
/// offending field path (e.g. "solver.tau.c") or a line:column position.
class ConfigError : public InvalidConfig {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : InvalidConfig(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

enum class ProblemType { sefpp, sfp, svip, scmp };

const char* to_string(ProblemType t);

struct SfpSpec {
  NonlinearMapping<double> T;
  LinearOperator<double> D;
  Point<double> x0;
};

struct SvipSpec {
  SvipProblem<double> problem;
  Point<double> x0;
  Point<double> y0;
};

struct ScmpSpec {
  ScmpProblem<double> problem;
  Point<double> x0;
  Point<double> y0;
};

enum class TraceFormat { csv, jsonl };

struct OutputOptions {
  TraceFormat format = TraceFormat::csv;
  /// Empty: derived from the config file name.
  std::string path;
  /// Write every k-th record; the final record is always written.
  std::size_t log_every = 1;
};

struct RunConfig {
  std::variant<SefppProblem<double>, SfpSpec, SvipSpec, ScmpSpec> problem;
  SolverConfig<double> solver;
  OutputOptions output;

  ProblemType type() const { return static_cast<ProblemType>(problem.index()); }
};

/// Parses a JSON run configuration and validates dimensions, declared fixed
/// points and any known solution. Step-size rules are checked when solving.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Dispatches to the solver matching the problem type and solver mode.
IterationTrace<double> execute(const RunConfig& config);

}  // namespace sefpp::io
