#pragma once

#include "sefpp/io/config.hpp"

#include <iosfwd>
#include <vector>

namespace sefpp::io {

/// Header: n, x0..x{d1-1}, y0..y{d2-1}, coupling, fix_x, fix_y, gamma, k_norm, r_norm.
/// Values use 17 significant digits; unlogged optionals are empty cells.
void write_trace_csv(const IterationTrace<double>& trace, std::ostream& out, std::size_t log_every = 1);

/// One JSON object per record with the same fields; unlogged optionals are null.
void write_trace_jsonl(const IterationTrace<double>& trace, std::ostream& out, std::size_t log_every = 1);

void write_trace(const IterationTrace<double>& trace, TraceFormat format, std::ostream& out,
                 std::size_t log_every = 1);

std::vector<IterationRecord<double>> read_trace_csv(std::istream& in);
std::vector<IterationRecord<double>> read_trace_jsonl(std::istream& in);

/// "%.17g"
std::string format_double(double v);

}  // namespace sefpp::io
