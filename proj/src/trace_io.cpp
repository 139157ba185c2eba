#include "sefpp/io/trace_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace sefpp::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool selected(std::size_t i, std::size_t count, std::size_t log_every) {
  return log_every <= 1 || i % log_every == 0 || i + 1 == count;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string optional_json(const std::optional<double>& v) { return v ? format_double(*v) : std::string("null"); }

std::string json_array(const Point<double>& v) {
  std::string s = "[";
  for (Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s + "]";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw InvalidInput("trace line " + std::to_string(line) + ": bad number \"" + s + "\"");
  return d;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return parse_cell(s, line);
}

}  // namespace

void write_trace_csv(const IterationTrace<double>& trace, std::ostream& out, std::size_t log_every) {
  const Index dx = trace.records.empty() ? 0 : trace.records.front().x.size();
  const Index dy = trace.records.empty() ? 0 : trace.records.front().y.size();
  out << "n";
  for (Index i = 0; i < dx; ++i) out << ",x" << i;
  for (Index i = 0; i < dy; ++i) out << ",y" << i;
  out << ",coupling,fix_x,fix_y,gamma,k_norm,r_norm\n";
  const std::size_t count = trace.records.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (!selected(i, count, log_every)) continue;
    const auto& r = trace.records[i];
    out << r.n;
    for (Index j = 0; j < r.x.size(); ++j) out << ',' << format_double(r.x[j]);
    for (Index j = 0; j < r.y.size(); ++j) out << ',' << format_double(r.y[j]);
    out << ',' << format_double(r.coupling) << ',' << format_double(r.fix_x) << ',' << format_double(r.fix_y) << ','
        << optional_cell(r.gamma) << ',' << optional_cell(r.k_norm) << ',' << optional_cell(r.r_norm) << '\n';
  }
}

void write_trace_jsonl(const IterationTrace<double>& trace, std::ostream& out, std::size_t log_every) {
  const std::size_t count = trace.records.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (!selected(i, count, log_every)) continue;
    const auto& r = trace.records[i];
    out << "{\"n\":" << r.n << ",\"x\":" << json_array(r.x) << ",\"y\":" << json_array(r.y)
        << ",\"coupling\":" << format_double(r.coupling) << ",\"fix_x\":" << format_double(r.fix_x)
        << ",\"fix_y\":" << format_double(r.fix_y) << ",\"gamma\":" << optional_json(r.gamma)
        << ",\"k_norm\":" << optional_json(r.k_norm) << ",\"r_norm\":" << optional_json(r.r_norm) << "}\n";
  }
}

void write_trace(const IterationTrace<double>& trace, TraceFormat format, std::ostream& out,
                 std::size_t log_every) {
  if (format == TraceFormat::csv) write_trace_csv(trace, out, log_every);
  else write_trace_jsonl(trace, out, log_every);
}

std::vector<IterationRecord<double>> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("trace is empty");
  const auto header = split_csv(line);
  Index dx = 0, dy = 0;
  for (const auto& h : header) {
    if (h.size() > 1 && h[0] == 'x' && h != "x") ++dx;
    if (h.size() > 1 && h[0] == 'y' && h != "y") ++dy;
  }
  const std::size_t expected = 1 + static_cast<std::size_t>(dx + dy) + 6;
  if (header.size() != expected || header.front() != "n") throw InvalidInput("trace header not recognized");

  std::vector<IterationRecord<double>> out;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != expected)
      throw InvalidInput("trace line " + std::to_string(lineno) + ": expected " + std::to_string(expected) + " cells");
    IterationRecord<double> r;
    r.n = std::stol(cells[0]);
    std::size_t c = 1;
    r.x.resize(dx);
    for (Index j = 0; j < dx; ++j) r.x[j] = parse_cell(cells[c++], lineno);
    r.y.resize(dy);
    for (Index j = 0; j < dy; ++j) r.y[j] = parse_cell(cells[c++], lineno);
    r.coupling = parse_cell(cells[c++], lineno);
    r.fix_x = parse_cell(cells[c++], lineno);
    r.fix_y = parse_cell(cells[c++], lineno);
    r.gamma = parse_optional(cells[c++], lineno);
    r.k_norm = parse_optional(cells[c++], lineno);
    r.r_norm = parse_optional(cells[c++], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<IterationRecord<double>> read_trace_jsonl(std::istream& in) {
  std::vector<IterationRecord<double>> out;
  std::string line;
  auto vec = [](const nlohmann::json& a) {
    Point<double> v(static_cast<Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Index>(i)] = a[i].get<double>();
    return v;
  };
  auto opt = [](const nlohmann::json& j) -> std::optional<double> {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
  };
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      IterationRecord<double> r;
      r.n = j.at("n").get<long>();
      r.x = vec(j.at("x"));
      r.y = vec(j.at("y"));
      r.coupling = j.at("coupling").get<double>();
      r.fix_x = j.at("fix_x").get<double>();
      r.fix_y = j.at("fix_y").get<double>();
      r.gamma = opt(j.at("gamma"));
      r.k_norm = opt(j.at("k_norm"));
      r.r_norm = opt(j.at("r_norm"));
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sefpp::io
