#pragma once

#include "sefpp/solvers.hpp"

namespace sefpp {

/// CQ iteration x_{n+1} = P_C(x_n - lambda D^*(I - P_Q) D x_n), lambda in (0, 2/||D||^2).
///
/// Records y = D x, coupling = ||Dx - P_Q Dx||, fix_x = ||x - P_C x||, fix_y = 0.
template <typename Scalar>
IterationTrace<Scalar> baseline_cq(const ConvexSet<Scalar>& C, const ConvexSet<Scalar>& Q,
                                   const LinearOperator<Scalar>& D, Scalar lambda, const Point<Scalar>& x0,
                                   const SolverConfig<Scalar>& config) {
  if (C.dimension() != D.cols() || Q.dimension() != D.rows())
    throw InvalidInput("baseline_cq: C, Q must match the domain and codomain of D (" +
                       detail::dims(D.rows(), D.cols()) + ")");
  if (x0.size() != D.cols()) throw InvalidInput("baseline_cq: x0 does not match D");
  require_finite(x0, "x0");
  detail::require_iteration_limits(config);

  const Scalar norm = operator_norm(D);
  const Scalar bound = norm > Scalar(0) ? Scalar(2) / (norm * norm) : std::numeric_limits<Scalar>::infinity();
  detail::ScheduleAudit audit;
  audit.require(lambda > Scalar(0) && lambda < bound,
                "lambda = " + detail::format_scalar(static_cast<double>(lambda)) + " must lie in (0, 2/||D||^2) = (0, " +
                    detail::format_scalar(static_cast<double>(bound)) + ")");
  auto warnings = audit.settle(config.permissive);

  return detail::drive<Scalar>(
      {x0, apply(D, x0)}, config,
      [&](long n, const State<Scalar>& s) {
        IterationRecord<Scalar> rec;
        rec.n = n;
        rec.x = s.x;
        rec.y = apply(D, s.x);
        rec.coupling = (rec.y - project(Q, rec.y)).norm();
        rec.fix_x = (s.x - project(C, s.x)).norm();
        rec.fix_y = Scalar(0);
        return rec;
      },
      [&](std::size_t, const State<Scalar>& s) {
        const Point<Scalar> dx = apply(D, s.x);
        Point<Scalar> x = project(C, Point<Scalar>(s.x - lambda * adjoint_apply(D, Point<Scalar>(dx - project(Q, dx)))));
        detail::require_finite_quantity(x, "x");
        Point<Scalar> y = apply(D, x);
        return State<Scalar>{std::move(x), std::move(y)};
      },
      std::move(warnings));
}

/// Projected simultaneous scheme
///   x_{n+1} = P_C(x_n - lambda_n D1^*(D1 x_n - D2 y_n))
///   y_{n+1} = P_Q(y_n + lambda_n D2^*(D1 x_n - D2 y_n))
/// with lambda_n in [0, 2/(L1 + L2)).
template <typename Scalar>
IterationTrace<Scalar> baseline_moudafi(const ConvexSet<Scalar>& C, const ConvexSet<Scalar>& Q,
                                        const LinearOperator<Scalar>& D1, const LinearOperator<Scalar>& D2,
                                        const Schedule<Scalar>& lambda, const Point<Scalar>& x0,
                                        const Point<Scalar>& y0, const SolverConfig<Scalar>& config) {
  if (D1.rows() != D2.rows()) throw InvalidInput("baseline_moudafi: D1 and D2 must share a codomain");
  if (C.dimension() != D1.cols() || Q.dimension() != D2.cols())
    throw InvalidInput("baseline_moudafi: C, Q must match the domains of D1, D2");
  if (x0.size() != D1.cols() || y0.size() != D2.cols())
    throw InvalidInput("baseline_moudafi: start point does not match D1, D2");
  require_finite(x0, "x0");
  require_finite(y0, "y0");
  detail::require_iteration_limits(config);

  const Scalar n1 = operator_norm(D1);
  const Scalar n2 = operator_norm(D2);
  const Scalar sum = n1 * n1 + n2 * n2;
  const Scalar bound = sum > Scalar(0) ? Scalar(2) / sum : std::numeric_limits<Scalar>::infinity();
  detail::ScheduleAudit audit;
  audit.require(lambda.supremum() < bound, "lambda schedule " + lambda.describe() + " exceeds 2/(L1+L2) = " +
                                               detail::format_scalar(static_cast<double>(bound)));
  auto warnings = audit.settle(config.permissive);

  return detail::drive<Scalar>(
      {x0, y0}, config,
      [&](long n, const State<Scalar>& s) {
        IterationRecord<Scalar> rec;
        rec.n = n;
        rec.x = s.x;
        rec.y = s.y;
        rec.coupling = (apply(D1, s.x) - apply(D2, s.y)).norm();
        rec.fix_x = (s.x - project(C, s.x)).norm();
        rec.fix_y = (s.y - project(Q, s.y)).norm();
        return rec;
      },
      [&](std::size_t k, const State<Scalar>& s) {
        const Scalar l = lambda(k);
        const Point<Scalar> gap = apply(D1, s.x) - apply(D2, s.y);
        State<Scalar> next{project(C, Point<Scalar>(s.x - l * adjoint_apply(D1, gap))),
                           project(Q, Point<Scalar>(s.y + l * adjoint_apply(D2, gap)))};
        detail::require_finite_quantity(next.x, "x");
        detail::require_finite_quantity(next.y, "y");
        return next;
      },
      std::move(warnings));
}

}  // namespace sefpp
