#pragma once

#include "sefpp/solvers.hpp"

namespace sefpp {

/// Split feasibility through the coupled scheme with D2 = I and y_n := T(D x_n):
///   v = (1 - tau) x + tau U x + tau D^*(T D x - D x),  x' = (1 - alpha) v + alpha U v.
/// T acts on both the domain and the codomain of D.
///
/// Records y = T(Dx), coupling = ||Dx - T(Dx)||, fix_x = ||x - Tx||, fix_y = 0,
/// so the stopping rule reads ||x - Tx|| + ||Dx - T(Dx)|| < tolerance.
template <typename Scalar>
IterationTrace<Scalar> solve_sfp(const NonlinearMapping<Scalar>& T, const LinearOperator<Scalar>& D,
                                 const Point<Scalar>& x0, const SolverConfig<Scalar>& config) {
  if (T.dimension() != 0 && (T.dimension() != D.rows() || T.dimension() != D.cols()))
    throw InvalidInput("solve_sfp: T must act on both the domain and the codomain of D");
  if (config.known_solution) throw InvalidConfig("solve_sfp does not track gamma");
  if (config.mode == SolverMode::decoupled_km) throw InvalidConfig("solve_sfp needs a coupled mode");

  const SefppProblem<Scalar> problem{D, LinearOperator<Scalar>::identity(D.rows()), T, T, x0,
                                     evaluate(T, apply(D, x0))};
  detail::prepare(problem, config);
  auto plan = config.mode == SolverMode::known_norm ? detail::plan_known_norm(problem, config)
                                                    : detail::plan_norm_free(config);
  const auto pair = normalize_pair(problem, config);
  auto clamp = [&](const Point<Scalar>& x) { return evaluate(T, apply(D, x)); };

  return detail::drive<Scalar>(
      {problem.x0, problem.y0}, config,
      [&](long n, const State<Scalar>& s) {
        IterationRecord<Scalar> rec;
        rec.n = n;
        rec.x = s.x;
        rec.y = s.y;
        rec.coupling = (apply(D, s.x) - s.y).norm();
        rec.fix_x = (s.x - evaluate(T, s.x)).norm();
        rec.fix_y = Scalar(0);
        return rec;
      },
      [&](std::size_t k, const State<Scalar>& s) {
        State<Scalar> next = detail::coupled_step(problem, pair.U, pair.V, config.alpha(k), plan.tau(k), s);
        next.y = clamp(next.x);
        return next;
      },
      std::move(plan.warnings));
}

/// Find x in VI(K1, F1), y in VI(K2, F2) with D1 x = D2 y.
template <typename Scalar>
struct SvipProblem {
  NonlinearMapping<Scalar> F1;
  NonlinearMapping<Scalar> F2;
  ConvexSet<Scalar> K1;
  ConvexSet<Scalar> K2;
  LinearOperator<Scalar> D1;
  LinearOperator<Scalar> D2;
  Scalar lambda = Scalar(1);
};

template <typename Scalar>
SefppProblem<Scalar> as_sefpp(const SvipProblem<Scalar>& p, const Point<Scalar>& x0, const Point<Scalar>& y0,
                              const ResolventOptions<Scalar>& options = {}) {
  if (!(p.lambda > Scalar(0))) throw InvalidInput("svip: lambda must be positive");
  return {p.D1, p.D2, resolvent_mapping(p.F1, p.K1, p.lambda, options),
          resolvent_mapping(p.F2, p.K2, p.lambda, options), x0, y0};
}

/// Resolvents of F1, F2 (1-Lipschitz) plugged into the configured solver.
/// An empty solution set shows up as a max_iters trace.
template <typename Scalar>
IterationTrace<Scalar> solve_svip(const SvipProblem<Scalar>& p, const Point<Scalar>& x0, const Point<Scalar>& y0,
                                  const SolverConfig<Scalar>& config, const ResolventOptions<Scalar>& options = {}) {
  return solve(as_sefpp(p, x0, y0, options), config);
}

/// Find minimizers x of M, y of N with D1 x = D2 y.
template <typename Scalar>
struct ScmpProblem {
  ProxFunction<Scalar> M;
  ProxFunction<Scalar> N;
  LinearOperator<Scalar> D1;
  LinearOperator<Scalar> D2;
  Scalar lambda = Scalar(1);
};

template <typename Scalar>
SefppProblem<Scalar> as_sefpp(const ScmpProblem<Scalar>& p, const Point<Scalar>& x0, const Point<Scalar>& y0) {
  if (!(p.lambda > Scalar(0))) throw InvalidInput("scmp: lambda must be positive");
  return {p.D1, p.D2, prox_mapping(p.M, p.lambda), prox_mapping(p.N, p.lambda), x0, y0};
}

template <typename Scalar>
IterationTrace<Scalar> solve_scmp(const ScmpProblem<Scalar>& p, const Point<Scalar>& x0, const Point<Scalar>& y0,
                                  const SolverConfig<Scalar>& config) {
  return solve(as_sefpp(p, x0, y0), config);
}

/// min over sampled t in K of <F(x), t - x>; nonnegative (up to rounding)
/// when x solves the variational inequality.
template <typename Scalar>
Scalar vi_gap(const NonlinearMapping<Scalar>& F, const ConvexSet<Scalar>& K, const Point<Scalar>& x,
              std::size_t samples, std::uint64_t seed = kDefaultSeed) {
  const Point<Scalar> fx = evaluate(F, x);
  std::mt19937_64 rng(seed);
  Scalar worst = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < samples; ++i) worst = std::min(worst, fx.dot(sample_uniform(K, rng) - x));
  return worst;
}

/// ||x - prox(f, lambda, x)||
template <typename Scalar>
Scalar prox_residual(const ProxFunction<Scalar>& f, Scalar lambda, const Point<Scalar>& x) {
  return (x - prox(f, lambda, x)).norm();
}

}  // namespace sefpp
