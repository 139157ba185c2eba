#include "test_support.hpp"

#include <doctest.h>

using namespace sefpp;
using namespace test;

TEST_CASE("residuals") {
  const auto P = p1();
  const auto at_solution = residuals(P, scalar_point(4), scalar_point(6));
  CHECK(at_solution.coupling == 0.0);
  CHECK(at_solution.fix_x == 0.0);
  CHECK(at_solution.fix_y == 0.0);

  const auto r = residuals(P, scalar_point(1), scalar_point(1));
  CHECK(r.coupling == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(r.fix_x == 1.5);
  CHECK(r.fix_y == 2.5);

  const SefppProblem<double> ident{Op(Mat::Identity(2, 2) * 2), Op(Mat::Identity(2, 2) * 2),
                                   identity_mapping<double>(), identity_mapping<double>(), vec({1, 2}),
                                   vec({0, 0})};
  const auto id = residuals(ident, vec({1, 2}), vec({3, -1}));
  CHECK(id.coupling == doctest::Approx(2 * std::sqrt(4.0 + 9.0)));
  CHECK(id.fix_x == 0.0);
  CHECK(id.fix_y == 0.0);
}

TEST_CASE("gamma") {
  const auto sol = p1_solution();
  CHECK(gamma(scalar_point(4), scalar_point(6), sol) == 0.0);
  CHECK(gamma(scalar_point(1), scalar_point(1), sol) == 34.0);
  const KnownSolution<double> shifted{scalar_point(4 + 2.5), scalar_point(6 + 2.5)};
  CHECK(gamma(scalar_point(1 + 2.5), scalar_point(1 + 2.5), shifted) == 34.0);
  CHECK(gamma(scalar_point(4 + 1e-300), scalar_point(6), sol) == 0.0);  // underflow, not a mismatch
  CHECK(gamma(scalar_point(4.000001), scalar_point(6), sol) > 0.0);
  CHECK_THROWS_AS(gamma(vec({1, 2}), scalar_point(1), sol), InvalidInput);
}

TEST_CASE("known solutions are verified") {
  const auto P = p1();
  CHECK_NOTHROW(verify_known_solution(P, p1_solution()));
  CHECK_THROWS_AS(verify_known_solution(P, {scalar_point(4), scalar_point(5)}), InvalidInput);
  // Fixed points of the two maps that do not couple: 0.5 * 4 != (1/3) * 0.5.
  const SefppProblem<double> ex1{Op::scalar(0.5), Op::scalar(1.0 / 3.0), fixtures::midpoint_toward(4.0),
                                 fixtures::quadratic_over_linear<double>(), scalar_point(1), scalar_point(1)};
  CHECK_THROWS_AS(verify_known_solution(ex1, {scalar_point(4), scalar_point(0.5)}), InvalidInput);
}

TEST_CASE("Fejer checks") {
  const std::vector<double> ok = {34, 30, 29.5};
  CHECK(check_fejer<double>(ok).holds);
  const std::vector<double> bad = {34, 35};
  const auto r = check_fejer<double>(bad);
  CHECK_FALSE(r.holds);
  CHECK(r.first_violation_index == 0u);
  // Relative slack absorbs rounding at large Gamma.
  const std::vector<double> rounding = {1e4, 1e4 * (1 + 1e-13)};
  CHECK(check_fejer<double>(rounding).holds);

  // phi = 2, tau_0 = 1: growth factor 1 + 2*4*1 = 9.
  const std::vector<double> taus = {1.0};
  CHECK(check_near_fejer<double>(std::vector<double>{1.0, 9.0}, taus, 2.0).holds);
  CHECK_FALSE(check_near_fejer<double>(std::vector<double>{1.0, 9.01}, taus, 2.0).holds);
  CHECK(near_fejer_constant(0.5, 0.5, 1.0 / 3.0) == doctest::Approx(1.5));
}

TEST_CASE("trace-level Fejer check needs the gamma column") {
  IterationTrace<double> t;
  t.records.resize(2);
  CHECK_THROWS_AS(check_fejer(t), InvalidInput);
  t.records[0].gamma = 2.0;
  t.records[1].gamma = 1.0;
  CHECK(check_fejer(t).holds);
}
