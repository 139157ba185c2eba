#include "test_support.hpp"

#include <doctest.h>

using namespace sefpp;
using namespace test;
using Set = ConvexSet<double>;
using F = ProxFunction<double>;

TEST_CASE("split feasibility with interval projections") {
  SolverConfig<double> cfg;
  const auto T = projection_mapping(Set::interval(0, 1));
  const auto t = solve_sfp(T, Op::scalar(1.0), scalar_point(5), cfg);
  REQUIRE(t.converged());
  CHECK(t.last().x[0] >= -1e-8);
  CHECK(t.last().x[0] <= 1 + 1e-8);
  CHECK(t.records.front().y[0] == 1.0);

  // Every point of [1/2, 1] solves the problem for T = P_[1/2, 1], D = I.
  const auto box = projection_mapping(Set::interval(0.5, 1));
  const auto t2 = solve_sfp(box, Op::scalar(1.0), scalar_point(-4), cfg);
  REQUIRE(t2.converged());
  CHECK(t2.last().x[0] >= 0.5 - 1e-8);
  CHECK(t2.last().x[0] <= 1 + 1e-8);

  CHECK_THROWS_AS(solve_sfp(T, Op(Mat::Ones(2, 1)), scalar_point(0), cfg), InvalidInput);
  auto with_solution = cfg;
  with_solution.known_solution = p1_solution();
  CHECK_THROWS_AS(solve_sfp(T, Op::scalar(1.0), scalar_point(5), with_solution), InvalidConfig);
}

TEST_CASE("split feasibility trace follows the reference recurrence") {
  const Mat D = (Mat(2, 2) << 0.8, 0.3, -0.2, 0.6).finished();
  const auto T = projection_mapping(Set::ball(vec({0.5, 0.0}), 1.0));
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::norm_free;
  cfg.max_iters = 300;
  cfg.stop_tolerance = 1e-300;
  const auto t = solve_sfp(T, Op(D), vec({3, -4}), cfg);

  const oracle::Map P = [](const oracle::Vec& x) {
    const double dx = x[0] - 0.5, dy = x[1], r = std::hypot(dx, dy);
    if (r <= 1) return x;
    return oracle::Vec{0.5 + dx / r, dy / r};
  };
  const auto ez = default_eta_zeta(1.0);
  const auto U = oracle::normalized(P, ez.eta, ez.zeta);
  const auto oD = to_std(D);
  oracle::Vec x{3, -4};
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    REQUIRE(std::abs(t.records[k].x[0] - x[0]) <= 1e-12);
    REQUIRE(std::abs(t.records[k].x[1] - x[1]) <= 1e-12);
    const double tau = 1.0 / (k + 2.0);
    const auto dx = oracle::mul(oD, x);
    const auto gap = oracle::lin(1, P(dx), -1, dx);
    auto v = oracle::lin(1 - tau, x, tau, U(x));
    v = oracle::lin(1, v, tau, oracle::mul_t(oD, gap));
    x = oracle::lin(0.5, v, 0.5, U(v));
  }
}

TEST_CASE("split variational inequality with affine operators") {
  const SvipProblem<double> p{affine_mapping(Mat::Identity(1, 1), vec({-2})),
                              affine_mapping(Mat::Identity(1, 1), vec({-3})),
                              Set::whole_space(1),
                              Set::whole_space(1),
                              Op::scalar(3.0),
                              Op::scalar(2.0)};
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::norm_free;
  const auto t = solve_svip(p, scalar_point(0), scalar_point(0), cfg);
  REQUIRE(t.converged());
  CHECK(std::abs(t.last().x[0] - 2) < 1e-4);
  CHECK(std::abs(t.last().y[0] - 3) < 1e-4);
  CHECK(vi_gap(p.F1, Set::interval(-10, 10), t.last().x, 200) > -1e-6);

  // Constrained: F(x) = x + 1 on [0, 5] is solved at the boundary 0.
  const auto shifted = affine_mapping(Mat::Identity(1, 1), vec({1}));
  CHECK(vi_gap(shifted, Set::interval(0, 5), scalar_point(0), 200) >= 0);
  CHECK(vi_gap(shifted, Set::interval(0, 5), scalar_point(2), 200) < 0);
}

TEST_CASE("infeasible split variational inequality stalls at max_iters") {
  const SvipProblem<double> p{affine_mapping(Mat::Identity(1, 1), vec({-2})),
                              affine_mapping(Mat::Identity(1, 1), vec({-3})),
                              Set::whole_space(1),
                              Set::whole_space(1),
                              Op::scalar(1.0),
                              Op::scalar(1.0)};
  SolverConfig<double> cfg;
  cfg.max_iters = 2000;
  const auto t = solve_svip(p, scalar_point(0), scalar_point(0), cfg);
  CHECK(t.reason == Termination::max_iters);
  CHECK(t.last().coupling + t.last().fix_x + t.last().fix_y > 1e-3);
}

TEST_CASE("split convex minimization") {
  const ScmpProblem<double> quad{F::quadratic(Mat::Identity(1, 1), vec({4})),
                                 F::quadratic(Mat::Identity(1, 1), vec({6})), Op::scalar(0.5),
                                 Op::scalar(1.0 / 3.0), 1.0};
  const auto t = solve_scmp(quad, scalar_point(1), scalar_point(1), SolverConfig<double>{});
  REQUIRE(t.converged());
  CHECK(std::abs(t.last().x[0] - 4) < 1e-4);
  CHECK(std::abs(t.last().y[0] - 6) < 1e-4);
  CHECK(prox_residual(quad.M, 1.0, t.last().x) < 1e-6);

  const ScmpProblem<double> sparse{F::l1(1.0), F::indicator(Set::interval(-1, 1)), Op::scalar(1.0),
                                   Op::scalar(1.0), 1.0};
  // V is the identity on [-1, 1], so y only moves through the vanishing coupling step.
  SolverConfig<double> slow;
  slow.max_iters = 3000;
  const auto s = solve_scmp(sparse, scalar_point(5), scalar_point(-3), slow);
  CHECK(s.reason == Termination::max_iters);
  CHECK(std::abs(s.last().x[0]) < 1e-4);
  CHECK(s.last().coupling < 1e-2);
  SolverConfig<double> fixed_step;
  fixed_step.tau = Schedule<double>::constant(0.5);
  fixed_step.permissive = true;
  const auto f = solve_scmp(sparse, scalar_point(5), scalar_point(-3), fixed_step);
  REQUIRE(f.converged());
  CHECK(std::abs(f.last().x[0]) < 1e-6);
  CHECK(std::abs(f.last().y[0]) < 1e-6);

  CHECK(prox_residual(F::l1(1.0), 1.0, scalar_point(0)) == 0.0);
  CHECK(prox_residual(F::l1(1.0), 1.0, scalar_point(3)) == 1.0);
  auto bad = quad;
  bad.lambda = 0;
  CHECK_THROWS_AS(solve_scmp(bad, scalar_point(1), scalar_point(1), SolverConfig<double>{}), InvalidInput);
}

TEST_CASE("baselines") {
  SolverConfig<double> cfg;
  const auto cq = baseline_cq(Set::interval(0, 1), Set::interval(1, 3), Op::scalar(2.0), 0.25, scalar_point(-4), cfg);
  REQUIRE(cq.converged());
  CHECK(cq.last().x[0] >= 0.5 - 1e-8);
  CHECK(cq.last().x[0] <= 1 + 1e-8);
  CHECK_THROWS_AS(baseline_cq(Set::interval(0, 1), Set::interval(1, 3), Op::scalar(2.0), 0.5, scalar_point(-4), cfg),
                  InvalidConfig);

  const auto m = baseline_moudafi(Set::interval(0, 10), Set::interval(0, 10), Op::scalar(0.5), Op::scalar(1.0 / 3.0),
                                  Schedule<double>::constant(1.0), scalar_point(1), scalar_point(9), cfg);
  REQUIRE(m.converged());
  CHECK(m.last().coupling < 1e-8);
  CHECK(std::abs(0.5 * m.last().x[0] - m.last().y[0] / 3) < 1e-8);
  CHECK_THROWS_AS(baseline_moudafi(Set::interval(0, 10), Set::interval(0, 10), Op::scalar(0.5),
                                   Op::scalar(1.0 / 3.0), Schedule<double>::constant(6.0), scalar_point(1),
                                   scalar_point(9), cfg),
                  InvalidConfig);
}

TEST_CASE("CQ examples") {
  SolverConfig<double> cfg;
  const auto t = baseline_cq(Set::interval(0, 1), Set::interval(0, 0.3), Op::scalar(1.0), 1.0, scalar_point(5), cfg);
  REQUIRE(t.converged());
  CHECK(t.last().x[0] >= -1e-8);
  CHECK(t.last().x[0] <= 0.3 + 1e-8);

  const auto feasible = baseline_cq(Set::interval(0, 1), Set::interval(0, 0.3), Op::scalar(1.0), 1.0, scalar_point(0.2), cfg);
  CHECK(feasible.records.size() == 1);
  CHECK(feasible.last().x[0] == 0.2);

  const auto origin = baseline_cq(Set::box(vec({0, 0}), vec({0, 0})), Set::interval(-1, 1), Op(Mat::Ones(1, 2)), 0.5,
                                  vec({3, -7}), cfg);
  REQUIRE(origin.converged());
  CHECK(origin.last().x == vec({0, 0}));
}

TEST_CASE("Moudafi examples") {
  SolverConfig<double> cfg;
  const auto free = baseline_moudafi(Set::whole_space(1), Set::whole_space(1), Op::scalar(0.5), Op::scalar(1.0 / 3.0),
                                     Schedule<double>::constant(1.0), scalar_point(1), scalar_point(1), cfg);
  REQUIRE(free.converged());
  CHECK(free.last().coupling < 1e-8);

  // Oracle: x' = x - l/2 (x/2 - y/3), y' = y + l/3 (x/2 - y/3).
  double x = 1, y = 1;
  for (std::size_t k = 0; k < free.records.size(); ++k) {
    REQUIRE(std::abs(free.records[k].x[0] - x) <= 1e-14);
    REQUIRE(std::abs(free.records[k].y[0] - y) <= 1e-14);
    const double g = x / 2 - y / 3;
    x -= g / 2;
    y += g / 3;
  }

  const auto still = baseline_moudafi(Set::interval(0, 10), Set::interval(0, 10), Op::scalar(0.5), Op::scalar(1.0 / 3.0),
                                      Schedule<double>::constant(1.0), scalar_point(4), scalar_point(6), cfg);
  CHECK(still.records.size() == 1);

  auto bounded = cfg;
  bounded.max_iters = 5;
  bounded.permissive = true;
  const auto zero = baseline_moudafi(Set::whole_space(1), Set::whole_space(1), Op::scalar(0.5), Op::scalar(1.0 / 3.0),
                                     Schedule<double>::constant(0.0), scalar_point(1), scalar_point(1), bounded);
  for (const auto& r : zero.records) {
    CHECK(r.x[0] == 1.0);
    CHECK(r.y[0] == 1.0);
  }
}

TEST_CASE("trivial reductions") {
  SolverConfig<double> cfg;
  const auto ident = solve_sfp(identity_mapping<double>(), Op(Mat::Ones(1, 1) * 2), scalar_point(3), cfg);
  CHECK(ident.records.size() == 1);
  CHECK(ident.last().fix_x == 0.0);
  CHECK(ident.last().coupling == 0.0);

  const auto T = projection_mapping(Set::interval(0, 1));
  const auto fixed = solve_sfp(T, Op::scalar(1.0), scalar_point(0.5), cfg);
  CHECK(fixed.records.size() == 1);
  CHECK(fixed.last().x[0] == 0.5);

  const auto zero_map = affine_mapping(Mat::Zero(1, 1), vec({0}));
  const SvipProblem<double> svip{zero_map, zero_map, Set::interval(0, 4), Set::interval(0, 4), Op::scalar(1.0),
                                 Op::scalar(2.0)};
  const auto s = solve_svip(svip, scalar_point(2), scalar_point(1), cfg);
  CHECK(s.records.size() == 1);
  CHECK(s.last().x[0] == 2.0);

  const ScmpProblem<double> flat{F::l1(0.0), F::l1(0.0), Op::scalar(0.5), Op::scalar(1.0 / 3.0), 1.0};
  // Only the coupling step moves the iterates, so a vanishing tau crawls; use a fixed one.
  auto fixed_tau = cfg;
  fixed_tau.tau = Schedule<double>::constant(0.5);
  fixed_tau.permissive = true;
  const auto f = solve_scmp(flat, scalar_point(1), scalar_point(6), fixed_tau);
  REQUIRE(f.converged());
  CHECK(f.last().fix_x == 0.0);
  CHECK(f.last().fix_y == 0.0);
  CHECK(f.last().coupling < 1e-8);
}

TEST_CASE("limits satisfy the optimality conditions") {
  const SvipProblem<double> box{affine_mapping(Mat::Identity(2, 2), vec({-2, 1})),
                                affine_mapping(Mat::Identity(1, 1), vec({-1})),
                                Set::box(vec({0, 0}), vec({5, 5})),
                                Set::interval(-5, 5),
                                Op(Mat::Ones(1, 2)),
                                Op::scalar(2.0)};
  // x* = (2, 0) on the box, y* = 1, D1 x* = 2 = D2 y*.
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::norm_free;
  const auto t = solve_svip(box, vec({4, 4}), scalar_point(-3), cfg);
  REQUIRE(t.converged());
  CHECK(vi_gap(box.F1, box.K1, t.last().x, 100) >= -1e-5);
  CHECK(vi_gap(box.F2, box.K2, t.last().y, 100) >= -1e-5);

  const ScmpProblem<double> quad{F::quadratic(Mat::Identity(1, 1), vec({4})),
                                 F::quadratic(Mat::Identity(1, 1), vec({6})), Op::scalar(0.5),
                                 Op::scalar(1.0 / 3.0), 2.0};
  const auto q = solve_scmp(quad, scalar_point(1), scalar_point(1), SolverConfig<double>{});
  REQUIRE(q.converged());
  CHECK(prox_residual(quad.M, 2.0, q.last().x) <= 1e-5);
  CHECK(prox_residual(quad.N, 2.0, q.last().y) <= 1e-5);

  // l1 limit: 0 lies in the subdifferential, i.e. |x| is within 1e-4 of 0.
  const ScmpProblem<double> sparse{F::l1(1.0), F::indicator(Set::interval(-1, 1)), Op::scalar(1.0), Op::scalar(1.0), 1.0};
  SolverConfig<double> fixed_step;
  fixed_step.tau = Schedule<double>::constant(0.5);
  fixed_step.permissive = true;
  const auto l = solve_scmp(sparse, vec({5}), vec({-3}), fixed_step);
  CHECK(std::abs(l.last().x[0]) <= 1e-4);
}
