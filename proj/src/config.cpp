#include "sefpp/io/config.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace sefpp::io {

using json = nlohmann::json;

const char* to_string(ProblemType t) {
  switch (t) {
    case ProblemType::sefpp: return "sefpp";
    case ProblemType::sfp: return "sfp";
    case ProblemType::svip: return "svip";
    case ProblemType::scmp: break;
  }
  return "scmp";
}

namespace {

// A JSON value together with its dotted path, so every error can name the field.
class Node {
 public:
  Node(const json& value, std::string path) : v_(&value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *v_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

  bool has(const char* key) const { return v_->is_object() && v_->contains(key); }

  Node at(const char* key) const {
    require_object();
    const auto it = v_->find(key);
    if (it == v_->end()) throw ConfigError(child_path(key), "missing required field");
    return Node(*it, child_path(key));
  }

  std::optional<Node> find(const char* key) const {
    require_object();
    const auto it = v_->find(key);
    if (it == v_->end() || it->is_null()) return std::nullopt;
    return Node(*it, child_path(key));
  }

  Node operator[](std::size_t i) const { return Node((*v_)[i], path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const { return v_->size(); }

  void allow_keys(std::initializer_list<const char*> keys) const {
    require_object();
    for (const auto& [k, _] : v_->items()) {
      bool known = false;
      for (const char* allowed : keys) known = known || k == allowed;
      if (!known) throw ConfigError(child_path(k.c_str()), "unknown field");
    }
  }

  void require_object() const {
    if (!v_->is_object()) fail("expected an object");
  }

  const json::array_t& array() const {
    if (!v_->is_array()) fail("expected an array");
    return v_->get_ref<const json::array_t&>();
  }

  std::string string() const {
    if (!v_->is_string()) fail("expected a string");
    return v_->get<std::string>();
  }

  bool boolean() const {
    if (!v_->is_boolean()) fail("expected true or false");
    return v_->get<bool>();
  }

  /// Numbers may also be written as strings: "1/3", "inf", "-inf", "2.5e-3".
  double number() const {
    if (v_->is_number()) return v_->get<double>();
    if (v_->is_string()) return parse_number_text(v_->get<std::string>());
    fail("expected a number");
  }

  double finite_number() const {
    const double d = number();
    if (!std::isfinite(d)) fail("expected a finite number");
    return d;
  }

  long long integer() const {
    if (!v_->is_number_integer()) fail("expected an integer");
    return v_->get<long long>();
  }

 private:
  std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  double parse_number_text(const std::string& s) const {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const double num = parse_plain(s.substr(0, slash));
      const double den = parse_plain(s.substr(slash + 1));
      if (den == 0.0) fail("zero denominator in \"" + s + "\"");
      return num / den;
    }
    return parse_plain(s);
  }

  double parse_plain(const std::string& s) const {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) fail("cannot read \"" + s + "\" as a number");
    return d;
  }

  const json* v_;
  std::string path_;
};

Point<double> read_vector(const Node& n) {
  if (n.raw().is_number() || n.raw().is_string()) return Point<double>::Constant(1, n.finite_number());
  const auto& a = n.array();
  if (a.empty()) n.fail("expected a nonempty array");
  Point<double> v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Index>(i)] = n[i].finite_number();
  return v;
}

// Rows of a matrix; a bare number is read as a 1x1 matrix.
DenseMatrix<double> read_matrix(const Node& n) {
  if (n.raw().is_number() || n.raw().is_string()) return DenseMatrix<double>::Constant(1, 1, n.finite_number());
  const auto& rows = n.array();
  if (rows.empty()) n.fail("expected a nonempty array of rows");
  const std::size_t cols = n[0].array().size();
  if (cols == 0) n[0].fail("expected a nonempty row");
  DenseMatrix<double> m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Node row = n[i];
    if (row.array().size() != cols)
      row.fail("row has " + std::to_string(row.array().size()) + " entries, expected " + std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = row[j].finite_number();
  }
  return m;
}

LinearOperator<double> read_operator(const Node& n) {
  try {
    return LinearOperator<double>(read_matrix(n));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

// Missing bounds (null) mean unbounded on that side.
Point<double> read_bounds(const Node& parent, const char* key, double missing, Index dim) {
  const auto node = parent.find(key);
  if (!node) return Point<double>::Constant(dim, missing);
  if (node->raw().is_array()) {
    const auto& a = node->array();
    Point<double> v(static_cast<Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      v[static_cast<Index>(i)] = (*node)[i].raw().is_null() ? missing : (*node)[i].number();
    return v;
  }
  return Point<double>::Constant(dim, node->number());
}

ConvexSet<double> read_set(const Node& n) {
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "box" || kind == "interval") {
      n.allow_keys({"kind", "lo", "hi", "dimension"});
      Index dim = 1;
      if (auto d = n.find("dimension")) dim = static_cast<Index>(d->integer());
      for (const char* key : {"lo", "hi"})
        if (auto b = n.find(key); b && b->raw().is_array()) dim = static_cast<Index>(b->array().size());
      if (dim < 1) n.fail("box dimension must be positive");
      const double inf = std::numeric_limits<double>::infinity();
      return ConvexSet<double>::box(read_bounds(n, "lo", -inf, dim), read_bounds(n, "hi", inf, dim));
    }
    if (kind == "whole_space") {
      n.allow_keys({"kind", "dimension"});
      const auto dim = n.at("dimension").integer();
      if (dim < 1) n.at("dimension").fail("must be positive");
      return ConvexSet<double>::whole_space(static_cast<Index>(dim));
    }
    if (kind == "ball") {
      n.allow_keys({"kind", "center", "radius"});
      return ConvexSet<double>::ball(read_vector(n.at("center")), n.at("radius").finite_number());
    }
    if (kind == "halfspace") {
      n.allow_keys({"kind", "normal", "offset"});
      return ConvexSet<double>::halfspace(read_vector(n.at("normal")), n.at("offset").finite_number());
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("unknown set kind \"" + kind + "\" (box, interval, whole_space, ball, halfspace)");
}

ProxFunction<double> read_prox_function(const Node& n) {
  const std::string kind = n.at("kind").string();
  try {
    if (kind == "quadratic") {
      n.allow_keys({"kind", "A", "b"});
      return ProxFunction<double>::quadratic(read_matrix(n.at("A")), read_vector(n.at("b")));
    }
    if (kind == "l1") {
      n.allow_keys({"kind", "weight"});
      return ProxFunction<double>::l1(n.at("weight").finite_number());
    }
    if (kind == "indicator") {
      n.allow_keys({"kind", "set"});
      return ProxFunction<double>::indicator(read_set(n.at("set")));
    }
    if (kind == "zero") {
      n.allow_keys({"kind"});
      return ProxFunction<double>::l1(0.0);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
  n.at("kind").fail("unknown function kind \"" + kind + "\" (quadratic, l1, indicator, zero)");
}

std::vector<double> read_coefficients(const Node& n) {
  std::vector<double> c;
  for (std::size_t i = 0; i < n.array().size(); ++i) c.push_back(n[i].finite_number());
  if (c.empty()) n.fail("expected at least one coefficient");
  return c;
}

NonlinearMapping<double> read_fixture(const Node& n) {
  const std::string name = n.at("name").string();
  if (name == "midpoint") return fixtures::midpoint_toward(n.at("center").finite_number());
  if (name == "quadratic_over_linear") return fixtures::quadratic_over_linear<double>();
  if (name == "quintic_over_quartic") return fixtures::quintic_over_quartic<double>();
  if (name == "cubic_over_quadratic") return fixtures::cubic_over_quadratic<double>();
  n.at("name").fail("unknown fixture \"" + name +
                    "\" (midpoint, quadratic_over_linear, quintic_over_quartic, cubic_over_quadratic)");
}

NonlinearMapping<double> read_mapping(const Node& n) {
  const std::string kind = n.at("kind").string();
  std::optional<NonlinearMapping<double>> m;
  try {
    if (kind == "identity") {
      n.allow_keys({"kind", "lipschitz", "fixed_points"});
      m = identity_mapping<double>();
    } else if (kind == "affine") {
      n.allow_keys({"kind", "A", "b", "lipschitz", "fixed_points"});
      m = affine_mapping(read_matrix(n.at("A")), read_vector(n.at("b")));
    } else if (kind == "rational") {
      n.allow_keys({"kind", "numerator", "denominator", "lipschitz", "fixed_points", "name"});
      m = rational_mapping(read_coefficients(n.at("numerator")), read_coefficients(n.at("denominator")),
                           n.has("name") ? n.at("name").string() : std::string("rational"));
    } else if (kind == "projection") {
      n.allow_keys({"kind", "set", "lipschitz", "fixed_points"});
      m = projection_mapping(read_set(n.at("set")));
    } else if (kind == "prox") {
      n.allow_keys({"kind", "function", "lambda", "lipschitz", "fixed_points"});
      m = prox_mapping(read_prox_function(n.at("function")), n.at("lambda").finite_number());
    } else if (kind == "fixture") {
      n.allow_keys({"kind", "name", "center", "lipschitz", "fixed_points"});
      m = read_fixture(n);
    } else {
      n.at("kind").fail("unknown mapping kind \"" + kind +
                        "\" (identity, affine, rational, projection, prox, fixture)");
    }
    if (auto l = n.find("lipschitz")) m = m->with_lipschitz(l->finite_number());
    if (auto f = n.find("fixed_points")) {
      std::vector<Point<double>> points;
      for (std::size_t i = 0; i < f->array().size(); ++i) points.push_back(read_vector((*f)[i]));
      try {
        m = m->with_fixed_points(std::move(points));
      } catch (const Error& e) {
        f->fail(e.what());
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
  return *m;
}

Schedule<double> read_schedule(const Node& n) {
  try {
    if (n.raw().is_number() || n.raw().is_string()) return Schedule<double>::constant(n.number());
    const std::string kind = n.at("kind").string();
    if (kind == "constant") {
      n.allow_keys({"kind", "c"});
      return Schedule<double>::constant(n.at("c").number());
    }
    if (kind == "harmonic") {
      n.allow_keys({"kind", "c", "offset"});
      return Schedule<double>::harmonic(n.at("c").number(), n.has("offset") ? n.at("offset").number() : 1.0);
    }
    if (kind == "power") {
      n.allow_keys({"kind", "c", "p", "offset"});
      return Schedule<double>::power(n.at("c").number(), n.at("p").number(),
                                     n.has("offset") ? n.at("offset").number() : 1.0);
    }
    n.at("kind").fail("unknown schedule kind \"" + kind + "\" (constant, harmonic, power)");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

std::optional<double> read_auto(const Node& parent, const char* key) {
  const auto n = parent.find(key);
  if (!n || (n->raw().is_string() && n->raw().get<std::string>() == "auto")) return std::nullopt;
  return n->finite_number();
}

SolverConfig<double> read_solver(const Node& n) {
  n.allow_keys({"mode", "alpha", "tau", "eta", "zeta", "max_iters", "stop_tolerance", "permissive", "start_index"});
  SolverConfig<double> c;
  if (auto m = n.find("mode")) {
    const std::string mode = m->string();
    if (mode == "known-norm" || mode == "known_norm") c.mode = SolverMode::known_norm;
    else if (mode == "norm-free" || mode == "norm_free") c.mode = SolverMode::norm_free;
    else if (mode == "decoupled-km" || mode == "decoupled_km") c.mode = SolverMode::decoupled_km;
    else m->fail("unknown mode \"" + mode + "\" (known-norm, norm-free, decoupled-km)");
  }
  if (auto a = n.find("alpha")) c.alpha = read_schedule(*a);
  if (auto t = n.find("tau")) c.tau = read_schedule(*t);
  c.eta = read_auto(n, "eta");
  c.zeta = read_auto(n, "zeta");
  if (auto m = n.find("max_iters")) {
    const auto v = m->integer();
    if (v < 1) m->fail("must be a positive integer");
    c.max_iters = static_cast<std::size_t>(v);
  }
  if (auto s = n.find("stop_tolerance")) {
    c.stop_tolerance = s->finite_number();
    if (!(c.stop_tolerance > 0)) s->fail("must be positive");
  }
  if (auto p = n.find("permissive")) c.permissive = p->boolean();
  if (auto s = n.find("start_index")) c.start_index = static_cast<long>(s->integer());
  return c;
}

OutputOptions read_output(const Node& n) {
  n.allow_keys({"format", "path", "log_every"});
  OutputOptions o;
  if (auto f = n.find("format")) {
    const std::string fmt = f->string();
    if (fmt == "csv") o.format = TraceFormat::csv;
    else if (fmt == "jsonl" || fmt == "json-lines") o.format = TraceFormat::jsonl;
    else f->fail("unknown format \"" + fmt + "\" (csv, jsonl)");
  }
  if (auto p = n.find("path")) o.path = p->string();
  if (auto k = n.find("log_every")) {
    const auto v = k->integer();
    if (v < 1) k->fail("must be a positive integer");
    o.log_every = static_cast<std::size_t>(v);
  }
  return o;
}

// Re-raises library validation errors against the field `n`.
template <typename Fn>
void checked(const Node& n, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

void read_problem(const Node& n, RunConfig& rc) {
  const std::string type = n.at("type").string();
  if (type == "sefpp") {
    n.allow_keys({"type", "D1", "D2", "T1", "T2", "x0", "y0", "known_solution"});
    SefppProblem<double> p{read_operator(n.at("D1")), read_operator(n.at("D2")), read_mapping(n.at("T1")),
                           read_mapping(n.at("T2")), read_vector(n.at("x0")), read_vector(n.at("y0"))};
    checked(n, [&] { validate(p); });
    if (auto ks = n.find("known_solution")) {
      ks->allow_keys({"p", "q"});
      KnownSolution<double> sol{read_vector(ks->at("p")), read_vector(ks->at("q"))};
      checked(*ks, [&] { verify_known_solution(p, sol); });
      rc.solver.known_solution = std::move(sol);
    }
    rc.problem = std::move(p);
  } else if (type == "sfp") {
    n.allow_keys({"type", "T", "D", "x0"});
    SfpSpec s{read_mapping(n.at("T")), read_operator(n.at("D")), read_vector(n.at("x0"))};
    if (s.x0.size() != s.D.cols())
      n.at("x0").fail("dimension " + std::to_string(s.x0.size()) + " does not match D (" +
                      detail::dims(s.D.rows(), s.D.cols()) + ")");
    if (s.T.dimension() != 0 && (s.T.dimension() != s.D.rows() || s.T.dimension() != s.D.cols()))
      n.at("T").fail("must act on both the domain and the codomain of D (" + detail::dims(s.D.rows(), s.D.cols()) +
                     ")");
    rc.problem = std::move(s);
  } else if (type == "svip") {
    n.allow_keys({"type", "F1", "F2", "K1", "K2", "D1", "D2", "lambda", "x0", "y0"});
    SvipSpec s{SvipProblem<double>{read_mapping(n.at("F1")), read_mapping(n.at("F2")), read_set(n.at("K1")),
                                   read_set(n.at("K2")), read_operator(n.at("D1")), read_operator(n.at("D2")),
                                   n.has("lambda") ? n.at("lambda").finite_number() : 1.0},
               read_vector(n.at("x0")), read_vector(n.at("y0"))};
    checked(n, [&] { validate(as_sefpp(s.problem, s.x0, s.y0)); });
    rc.problem = std::move(s);
  } else if (type == "scmp") {
    n.allow_keys({"type", "M", "N", "D1", "D2", "lambda", "x0", "y0"});
    ScmpSpec s{ScmpProblem<double>{read_prox_function(n.at("M")), read_prox_function(n.at("N")),
                                   read_operator(n.at("D1")), read_operator(n.at("D2")),
                                   n.has("lambda") ? n.at("lambda").finite_number() : 1.0},
               read_vector(n.at("x0")), read_vector(n.at("y0"))};
    checked(n, [&] { validate(as_sefpp(s.problem, s.x0, s.y0)); });
    rc.problem = std::move(s);
  } else {
    n.at("type").fail("unknown problem type \"" + type + "\" (sefpp, sfp, svip, scmp)");
  }
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(line_column(text, e.byte > 0 ? e.byte - 1 : 0), msg);
  }
  const Node root(doc, "");
  if (!doc.is_object()) throw ConfigError("<root>", "expected an object");
  root.allow_keys({"problem", "solver", "output"});

  RunConfig rc{SefppProblem<double>{LinearOperator<double>::scalar(1.0), LinearOperator<double>::scalar(1.0),
                                    identity_mapping<double>(), identity_mapping<double>(),
                                    Point<double>::Zero(1), Point<double>::Zero(1)},
               {},
               {}};
  if (auto s = root.find("solver")) rc.solver = read_solver(*s);
  read_problem(root.at("problem"), rc);
  if (auto o = root.find("output")) rc.output = read_output(*o);
  if (rc.type() == ProblemType::sfp && rc.solver.mode == SolverMode::decoupled_km)
    throw ConfigError("solver.mode", "sfp problems need known-norm or norm-free");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

IterationTrace<double> execute(const RunConfig& config) {
  return std::visit(
      [&](const auto& p) -> IterationTrace<double> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SefppProblem<double>>) {
          return solve(p, config.solver);
        } else if constexpr (std::is_same_v<P, SfpSpec>) {
          return solve_sfp(p.T, p.D, p.x0, config.solver);
        } else if constexpr (std::is_same_v<P, SvipSpec>) {
          return solve_svip(p.problem, p.x0, p.y0, config.solver);
        } else {
          return solve_scmp(p.problem, p.x0, p.y0, config.solver);
        }
      },
      config.problem);
}

}  // namespace sefpp::io
