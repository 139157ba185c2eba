#pragma once

#include "sefpp/mapping.hpp"
#include "sefpp/schedule.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sefpp {

/// Find x in Fix(T1), y in Fix(T2) with D1 x = D2 y.
/// D1: H1 -> H3, D2: H2 -> H3; T1 acts on H1, T2 on H2.
template <typename Scalar>
struct SefppProblem {
  LinearOperator<Scalar> D1;
  LinearOperator<Scalar> D2;
  NonlinearMapping<Scalar> T1;
  NonlinearMapping<Scalar> T2;
  Point<Scalar> x0;
  Point<Scalar> y0;
};

template <typename Scalar>
void validate(const SefppProblem<Scalar>& p) {
  if (p.D1.rows() != p.D2.rows())
    throw InvalidInput("D1 and D2 must share a codomain: D1 is " + detail::dims(p.D1.rows(), p.D1.cols()) +
                       ", D2 is " + detail::dims(p.D2.rows(), p.D2.cols()));
  if (p.x0.size() != p.D1.cols())
    throw InvalidInput("x0 has dimension " + std::to_string(p.x0.size()) + " but D1 has " +
                       std::to_string(p.D1.cols()) + " columns");
  if (p.y0.size() != p.D2.cols())
    throw InvalidInput("y0 has dimension " + std::to_string(p.y0.size()) + " but D2 has " +
                       std::to_string(p.D2.cols()) + " columns");
  if (p.T1.dimension() != 0 && p.T1.dimension() != p.x0.size())
    throw InvalidInput("T1 dimension does not match H1");
  if (p.T2.dimension() != 0 && p.T2.dimension() != p.y0.size())
    throw InvalidInput("T2 dimension does not match H2");
  require_finite(p.x0, "x0");
  require_finite(p.y0, "y0");
}

/// A point (p, q) of the solution set, used only for diagnostics.
template <typename Scalar>
struct KnownSolution {
  Point<Scalar> p;
  Point<Scalar> q;
};

enum class SolverMode { known_norm, norm_free, decoupled_km };

inline const char* to_string(SolverMode m) {
  switch (m) {
    case SolverMode::known_norm: return "known-norm";
    case SolverMode::norm_free: return "norm-free";
    case SolverMode::decoupled_km: break;
  }
  return "decoupled-km";
}

template <typename Scalar>
struct SolverConfig {
  SolverMode mode = SolverMode::known_norm;
  /// alpha_k must stay in (a, 1) for some floor a > 0.
  Schedule<Scalar> alpha = Schedule<Scalar>::constant(Scalar(0.5));
  /// Empty selects the mode default.
  std::optional<Schedule<Scalar>> tau;
  /// Empty selects default_eta_zeta(L).
  std::optional<Scalar> eta;
  std::optional<Scalar> zeta;
  std::size_t max_iters = 100000;
  Scalar stop_tolerance = Scalar(1e-8);
  /// Accept parameters outside the ranges the convergence theory needs
  /// (e.g. constant tau, eta >= zeta); violations become trace warnings.
  bool permissive = false;
  /// Index assigned to the initial point in the trace.
  long start_index = 1;
  /// Enables the gamma column.
  std::optional<KnownSolution<Scalar>> known_solution;
};

enum class Termination { converged, max_iters, numerical_failure };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::numerical_failure: break;
  }
  return "numerical_failure";
}

template <typename Scalar>
struct IterationRecord {
  long n = 0;
  Point<Scalar> x;
  Point<Scalar> y;
  Scalar coupling{};
  Scalar fix_x{};
  Scalar fix_y{};
  std::optional<Scalar> gamma;
  std::optional<Scalar> k_norm;
  std::optional<Scalar> r_norm;
};

template <typename Scalar>
struct IterationTrace {
  std::vector<IterationRecord<Scalar>> records;
  Termination reason = Termination::max_iters;
  std::vector<std::string> warnings;
  std::string failure;

  const IterationRecord<Scalar>& last() const {
    if (records.empty()) throw InvalidInput("trace is empty");
    return records.back();
  }
  bool converged() const { return reason == Termination::converged; }
};

}  // namespace sefpp
