#pragma once

#include "sefpp/solvers.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sefpp::io {

/// Problem and decoupled-KM configuration behind reference table `id` (1 or 2).
struct TableSetup {
  SefppProblem<double> problem;
  SolverConfig<double> config;
};

TableSetup table_setup(int id);

struct TableCheck {
  std::string label;
  double computed = 0;
  double reference = 0;
  double tolerance = 0;

  bool pass() const;
};

struct TableReport {
  int id = 0;
  /// Table 2 is printed for comparison only.
  bool asserted = false;
  IterationTrace<double> trace;
  std::vector<TableCheck> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

/// Throws InvalidInput for an unknown id.
TableReport reproduce_table(int id);

void print_table_report(const TableReport& report, std::ostream& out);

}  // namespace sefpp::io
