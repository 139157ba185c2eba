#pragma once

#include "sefpp/diagnostics.hpp"

#include <cstdio>
#include <functional>
#include <limits>

namespace sefpp {

template <typename Scalar>
struct State {
  Point<Scalar> x;
  Point<Scalar> y;
};

namespace detail {

template <typename Scalar>
void require_finite_quantity(const Point<Scalar>& v, const char* what) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      Eigen::VectorXd last = v.template cast<double>();
      throw NumericalFailure(std::string("non-finite ") + what + " (coordinate " + std::to_string(i) + ")",
                             std::numeric_limits<double>::quiet_NaN(), std::move(last));
    }
  }
}

template <typename Scalar>
void require_step_parameters(Scalar alpha, Scalar tau) {
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw InvalidParameters("alpha must lie in [0, 1]");
  if (!(tau >= Scalar(0)) || !std::isfinite(tau)) throw InvalidParameters("tau must be finite and nonnegative");
}

// Both halves read (x_n, y_n): the y-update never sees x_{n+1}.
template <typename Scalar>
State<Scalar> coupled_step(const SefppProblem<Scalar>& problem, const NormalizedOperator<Scalar>& U,
                           const NormalizedOperator<Scalar>& V, Scalar alpha, Scalar tau,
                           const State<Scalar>& s) {
  require_step_parameters(alpha, tau);
  const Point<Scalar> gap = apply(problem.D2, s.y) - apply(problem.D1, s.x);
  require_finite_quantity(gap, "coupling D2 y - D1 x");

  const Point<Scalar> v = (Scalar(1) - tau) * s.x + tau * U(s.x) + tau * adjoint_apply(problem.D1, gap);
  require_finite_quantity(v, "v");
  const Point<Scalar> w = (Scalar(1) - tau) * s.y + tau * V(s.y) - tau * adjoint_apply(problem.D2, gap);
  require_finite_quantity(w, "w");

  State<Scalar> next{(Scalar(1) - alpha) * v + alpha * U(v), (Scalar(1) - alpha) * w + alpha * V(w)};
  require_finite_quantity(next.x, "x");
  require_finite_quantity(next.y, "y");
  return next;
}

}  // namespace detail

/// One step of the coupled scheme:
///   v = (1 - tau) x + tau U x + tau D1^*(D2 y - D1 x),  x' = (1 - alpha) v + alpha U v
///   w = (1 - tau) y + tau V y + tau D2^*(D1 x - D2 y),  y' = (1 - alpha) w + alpha V w
template <typename Scalar>
State<Scalar> step_known_norm(const SefppProblem<Scalar>& problem, const NormalizedOperator<Scalar>& U,
                              const NormalizedOperator<Scalar>& V, Scalar alpha, Scalar tau,
                              const State<Scalar>& state) {
  return detail::coupled_step(problem, U, V, alpha, tau, state);
}

/// Same update as step_known_norm; the two schemes differ only in the step
/// sizes they accept.
template <typename Scalar>
State<Scalar> step_norm_free(const SefppProblem<Scalar>& problem, const NormalizedOperator<Scalar>& U,
                             const NormalizedOperator<Scalar>& V, Scalar alpha, Scalar tau,
                             const State<Scalar>& state) {
  return detail::coupled_step(problem, U, V, alpha, tau, state);
}

template <typename Scalar>
struct NormalizedPair {
  NormalizedOperator<Scalar> U;
  NormalizedOperator<Scalar> V;
};

/// U from T1 and V from T2 with the configured (eta, zeta). Either value left
/// unset comes from default_eta_zeta(max(L1, L2)), so both maps share one pair.
template <typename Scalar>
NormalizedPair<Scalar> normalize_pair(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  for (const auto* T : {&problem.T1, &problem.T2})
    if (!T->lipschitz()) throw InvalidParameters(T->name() + ": normalization needs a Lipschitz constant");
  const Scalar lip = std::max(*problem.T1.lipschitz(), *problem.T2.lipschitz());
  const auto auto_pair = default_eta_zeta(lip);
  const Scalar eta = config.eta.value_or(auto_pair.eta);
  const Scalar zeta = config.zeta.value_or(auto_pair.zeta);
  return {make_normalized(problem.T1, eta, zeta, config.permissive),
          make_normalized(problem.T2, eta, zeta, config.permissive)};
}

namespace detail {

inline std::string format_scalar(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Collects rule violations; throws InvalidConfig on the first batch unless
// permissive, in which case they become trace warnings.
struct ScheduleAudit {
  std::vector<std::string> violations;

  void require(bool ok, std::string message) {
    if (!ok) violations.push_back(std::move(message));
  }

  std::vector<std::string> settle(bool permissive) const {
    if (violations.empty() || permissive) return violations;
    std::string msg = violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
    throw InvalidConfig(msg);
  }
};

template <typename Scalar>
void audit_alpha(ScheduleAudit& audit, const Schedule<Scalar>& alpha) {
  audit.require(alpha.kind == ScheduleKind::constant && alpha.c > Scalar(0) && alpha.c < Scalar(1),
                "alpha schedule " + alpha.describe() + " must stay in (a, 1) for some a > 0");
}

template <typename Scalar>
void require_iteration_limits(const SolverConfig<Scalar>& config) {
  if (config.max_iters == 0) throw InvalidConfig("max_iters must be positive");
  if (!(config.stop_tolerance > Scalar(0))) throw InvalidConfig("stop_tolerance must be positive");
}

template <typename Scalar>
using Recorder = std::function<IterationRecord<Scalar>(long, const State<Scalar>&)>;
template <typename Scalar>
using Stepper = std::function<State<Scalar>(std::size_t, const State<Scalar>&)>;

// Record, test the stopping rule, then step; max_iters counts steps taken.
template <typename Scalar>
IterationTrace<Scalar> drive(State<Scalar> state, const SolverConfig<Scalar>& config,
                             const Recorder<Scalar>& record, const Stepper<Scalar>& step,
                             std::vector<std::string> warnings) {
  IterationTrace<Scalar> trace;
  trace.warnings = std::move(warnings);
  for (std::size_t k = 0;; ++k) {
    const long n = config.start_index + static_cast<long>(k);
    try {
      trace.records.push_back(record(n, state));
      const auto& rec = trace.records.back();
      if (rec.coupling + rec.fix_x + rec.fix_y < config.stop_tolerance) {
        trace.reason = Termination::converged;
        break;
      }
      if (k == config.max_iters) {
        trace.reason = Termination::max_iters;
        break;
      }
      state = step(k, state);
    } catch (const NumericalFailure& e) {
      trace.reason = Termination::numerical_failure;
      trace.failure = "iteration " + std::to_string(n) + ": " + e.what();
      break;
    } catch (const DomainError& e) {
      trace.reason = Termination::numerical_failure;
      trace.failure = "iteration " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return trace;
}

template <typename Scalar>
IterationRecord<Scalar> base_record(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config,
                                    long n, const State<Scalar>& s) {
  const auto r = residuals(problem, s.x, s.y);
  IterationRecord<Scalar> rec;
  rec.n = n;
  rec.x = s.x;
  rec.y = s.y;
  rec.coupling = r.coupling;
  rec.fix_x = r.fix_x;
  rec.fix_y = r.fix_y;
  if (config.known_solution) rec.gamma = gamma(s.x, s.y, *config.known_solution);
  return rec;
}

template <typename Scalar>
void prepare(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  validate(problem);
  require_iteration_limits(config);
  if (config.known_solution) verify_known_solution(problem, *config.known_solution);
}

}  // namespace detail

/// tau_n in (0, 2/(L1 + L2)) with L_i = ||D_i||^2, lim tau_n = 0, sum tau_n = inf.
template <typename Scalar>
Scalar known_norm_tau_bound(const SefppProblem<Scalar>& problem) {
  const Scalar n1 = operator_norm(problem.D1);
  const Scalar n2 = operator_norm(problem.D2);
  const Scalar sum = n1 * n1 + n2 * n2;
  return sum > Scalar(0) ? Scalar(2) / sum : std::numeric_limits<Scalar>::infinity();
}

template <typename Scalar>
Schedule<Scalar> default_known_norm_tau(Scalar bound) {
  return Schedule<Scalar>::harmonic(std::min(Scalar(1), Scalar(0.9) * bound));
}

/// tau_n = 1/(n + 2)
template <typename Scalar>
Schedule<Scalar> default_norm_free_tau() {
  return Schedule<Scalar>::harmonic(Scalar(1), Scalar(2));
}

namespace detail {

template <typename Scalar>
struct TauPlan {
  Schedule<Scalar> tau;
  std::vector<std::string> warnings;
};

template <typename Scalar>
TauPlan<Scalar> plan_known_norm(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  const Scalar bound = known_norm_tau_bound(problem);
  const Schedule<Scalar> tau = config.tau.value_or(default_known_norm_tau(bound));
  ScheduleAudit audit;
  audit.require(tau.supremum() < bound, "tau schedule " + tau.describe() + " exceeds 2/(L1+L2) = " +
                                            format_scalar(static_cast<double>(bound)));
  audit.require(tau.tends_to_zero(), "tau schedule " + tau.describe() + " does not tend to 0");
  audit.require(tau.sum_diverges(), "tau schedule " + tau.describe() + " is summable");
  audit_alpha(audit, config.alpha);
  return {tau, audit.settle(config.permissive)};
}

template <typename Scalar>
TauPlan<Scalar> plan_norm_free(const SolverConfig<Scalar>& config) {
  const Schedule<Scalar> tau = config.tau.value_or(default_norm_free_tau<Scalar>());
  ScheduleAudit audit;
  audit.require(tau.c > Scalar(0) && tau.supremum() < Scalar(1),
                "tau schedule " + tau.describe() + " must stay in (0, 1)");
  audit.require(tau.sum_diverges(), "tau schedule " + tau.describe() + " is summable");
  audit.require(tau.square_summable(), "tau schedule " + tau.describe() + " is not square-summable");
  audit_alpha(audit, config.alpha);
  return {tau, audit.settle(config.permissive)};
}

}  // namespace detail

template <typename Scalar>
IterationTrace<Scalar> solve_known_norm(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  detail::prepare(problem, config);
  auto plan = detail::plan_known_norm(problem, config);
  const auto pair = normalize_pair(problem, config);
  return detail::drive<Scalar>(
      {problem.x0, problem.y0}, config,
      [&](long n, const State<Scalar>& s) { return detail::base_record(problem, config, n, s); },
      [&](std::size_t k, const State<Scalar>& s) {
        return step_known_norm(problem, pair.U, pair.V, config.alpha(k), plan.tau(k), s);
      },
      std::move(plan.warnings));
}

/// k = x - Ux - D1^*(D2 y - D1 x), r = y - Vy - D2^*(D1 x - D2 y).
template <typename Scalar>
std::pair<Point<Scalar>, Point<Scalar>> proof_residuals(const SefppProblem<Scalar>& problem,
                                                         const NormalizedPair<Scalar>& pair,
                                                         const State<Scalar>& s) {
  const Point<Scalar> gap = apply(problem.D2, s.y) - apply(problem.D1, s.x);
  return {s.x - pair.U(s.x) - adjoint_apply(problem.D1, gap), s.y - pair.V(s.y) + adjoint_apply(problem.D2, gap)};
}

/// Never computes an operator norm.
template <typename Scalar>
IterationTrace<Scalar> solve_norm_free(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  detail::prepare(problem, config);
  auto plan = detail::plan_norm_free(config);
  const auto pair = normalize_pair(problem, config);
  return detail::drive<Scalar>(
      {problem.x0, problem.y0}, config,
      [&](long n, const State<Scalar>& s) {
        auto rec = detail::base_record(problem, config, n, s);
        const auto [k, r] = proof_residuals(problem, pair, s);
        rec.k_norm = k.norm();
        rec.r_norm = r.norm();
        return rec;
      },
      [&](std::size_t k, const State<Scalar>& s) {
        return step_norm_free(problem, pair.U, pair.V, config.alpha(k), plan.tau(k), s);
      },
      std::move(plan.warnings));
}

/// Two independent relaxed KM sequences on the raw maps, no coupling:
///   v = (1 - tau) x + tau T1 x,  x' = (1 - alpha) v + alpha T1 v
/// and likewise for y with T2. D1, D2 only enter the coupling residual.
template <typename Scalar>
State<Scalar> step_decoupled_km(const SefppProblem<Scalar>& problem, Scalar alpha, Scalar tau,
                                const State<Scalar>& s) {
  detail::require_step_parameters(alpha, tau);
  auto half = [&](const NonlinearMapping<Scalar>& T, const Point<Scalar>& x) {
    const Point<Scalar> v = (Scalar(1) - tau) * x + tau * evaluate(T, x);
    return Point<Scalar>((Scalar(1) - alpha) * v + alpha * evaluate(T, v));
  };
  return {half(problem.T1, s.x), half(problem.T2, s.y)};
}

template <typename Scalar>
IterationTrace<Scalar> solve_decoupled_km(const SefppProblem<Scalar>& problem,
                                          const SolverConfig<Scalar>& config) {
  detail::prepare(problem, config);
  const Schedule<Scalar> tau = config.tau.value_or(default_norm_free_tau<Scalar>());
  return detail::drive<Scalar>(
      {problem.x0, problem.y0}, config,
      [&](long n, const State<Scalar>& s) { return detail::base_record(problem, config, n, s); },
      [&](std::size_t k, const State<Scalar>& s) {
        return step_decoupled_km(problem, config.alpha(k), tau(k), s);
      },
      {});
}

template <typename Scalar>
IterationTrace<Scalar> solve(const SefppProblem<Scalar>& problem, const SolverConfig<Scalar>& config) {
  switch (config.mode) {
    case SolverMode::known_norm: return solve_known_norm(problem, config);
    case SolverMode::norm_free: return solve_norm_free(problem, config);
    case SolverMode::decoupled_km: break;
  }
  return solve_decoupled_km(problem, config);
}

}  // namespace sefpp
