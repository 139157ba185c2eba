#pragma once

#include "sefpp/normalized.hpp"
#include "sefpp/problem.hpp"

#include <optional>
#include <span>

namespace sefpp {

template <typename Scalar>
struct Residuals {
  Scalar coupling{};
  Scalar fix_x{};
  Scalar fix_y{};

  Scalar sum() const { return coupling + fix_x + fix_y; }
};

/// ||D1 x - D2 y||, ||x - T1 x||, ||y - T2 y||, measured against the raw maps.
template <typename Scalar>
Residuals<Scalar> residuals(const SefppProblem<Scalar>& problem, const Point<Scalar>& x,
                            const Point<Scalar>& y) {
  return {(apply(problem.D1, x) - apply(problem.D2, y)).norm(), (x - evaluate(problem.T1, x)).norm(),
          (y - evaluate(problem.T2, y)).norm()};
}

/// ||x - p||^2 + ||y - q||^2
template <typename Scalar>
Scalar gamma(const Point<Scalar>& x, const Point<Scalar>& y, const KnownSolution<Scalar>& sol) {
  if (x.size() != sol.p.size() || y.size() != sol.q.size())
    throw InvalidInput("gamma: state and solution dimensions differ");
  return (x - sol.p).squaredNorm() + (y - sol.q).squaredNorm();
}

inline constexpr double kKnownSolutionTolerance = 1e-8;

/// Rejects (p, q) unless T1 p = p, T2 q = q and D1 p = D2 q, each to 1e-8.
template <typename Scalar>
void verify_known_solution(const SefppProblem<Scalar>& problem, const KnownSolution<Scalar>& sol) {
  if (sol.p.size() != problem.D1.cols() || sol.q.size() != problem.D2.cols())
    throw InvalidInput("known solution dimensions do not match the problem");
  const auto r = residuals(problem, sol.p, sol.q);
  const Scalar tol(kKnownSolutionTolerance);
  if (r.fix_x > tol) throw InvalidInput("known solution: p is not a fixed point of T1");
  if (r.fix_y > tol) throw InvalidInput("known solution: q is not a fixed point of T2");
  if (r.coupling > tol) throw InvalidInput("known solution: D1 p != D2 q");
}

struct FejerReport {
  bool holds = true;
  /// Index i of the first pair (i, i+1) that breaks the bound.
  std::optional<std::size_t> first_violation_index;
};

/// Slack on Gamma comparisons: 1e-12 scaled by (1 + Gamma_n).
template <typename Scalar>
Scalar fejer_slack(Scalar g) {
  return Scalar(1e-12) * (Scalar(1) + g);
}

/// Gamma_{n+1} <= Gamma_n for every consecutive pair.
template <typename Scalar>
FejerReport check_fejer(std::span<const Scalar> gammas) {
  FejerReport r;
  for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
    if (gammas[i + 1] > gammas[i] + fejer_slack(gammas[i])) {
      r.holds = false;
      r.first_violation_index = i;
      break;
    }
  }
  return r;
}

/// Gamma_{n+1} <= (1 + 2 phi^2 tau_n^2) Gamma_n, with taus[i] the step used
/// to go from gammas[i] to gammas[i+1].
template <typename Scalar>
FejerReport check_near_fejer(std::span<const Scalar> gammas, std::span<const Scalar> taus, Scalar phi) {
  if (gammas.size() > 1 && taus.size() + 1 < gammas.size())
    throw InvalidInput("check_near_fejer: need one tau per step");
  FejerReport r;
  for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
    const Scalar growth = Scalar(1) + Scalar(2) * phi * phi * taus[i] * taus[i];
    if (gammas[i + 1] > growth * gammas[i] + fejer_slack(gammas[i])) {
      r.holds = false;
      r.first_violation_index = i;
      break;
    }
  }
  return r;
}

template <typename Scalar>
std::vector<Scalar> gamma_column(const IterationTrace<Scalar>& trace) {
  std::vector<Scalar> out;
  out.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    if (!rec.gamma) throw InvalidInput("trace has no gamma column; supply a known solution");
    out.push_back(*rec.gamma);
  }
  return out;
}

/// Known-norm check when `tau` is empty, near-Fejer check with phi otherwise.
/// Trace record i is assumed to sit at schedule step i.
template <typename Scalar>
FejerReport check_fejer(const IterationTrace<Scalar>& trace,
                        const std::optional<Schedule<Scalar>>& tau = std::nullopt,
                        Scalar phi = Scalar(0)) {
  const auto g = gamma_column(trace);
  if (!tau) return check_fejer<Scalar>(std::span<const Scalar>(g));
  std::vector<Scalar> taus;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) taus.push_back((*tau)(i));
  return check_near_fejer<Scalar>(g, taus, phi);
}

/// phi = 1 + L^2 + max(||D1||^2, ||D2||^2)
template <typename Scalar>
Scalar near_fejer_constant(Scalar lipschitz, Scalar norm_d1, Scalar norm_d2) {
  return Scalar(1) + lipschitz * lipschitz + std::max(norm_d1 * norm_d1, norm_d2 * norm_d2);
}

/// Largest value of 1/2 ||x - Ux||^2 - <x - Ux, x - p> over sampled x and
/// declared fixed points p. Nonpositive (up to rounding) when U is
/// quasi-nonexpansive.
template <typename Scalar>
Scalar quasi_nonexpansive_identity_gap(const NormalizedOperator<Scalar>& U, const ConvexSet<Scalar>& domain,
                                       std::size_t samples, std::uint64_t seed = kDefaultSeed) {
  const auto& fixed = U.base().fixed_points();
  if (fixed.empty()) throw InvalidInput("base mapping declares no fixed points");
  std::mt19937_64 rng(seed);
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const Point<Scalar> x = sample_uniform(domain, rng);
    const Point<Scalar> d = x - U(x);
    for (const auto& p : fixed) worst = std::max(worst, Scalar(0.5) * d.squaredNorm() - d.dot(x - p));
  }
  return worst;
}

}  // namespace sefpp
