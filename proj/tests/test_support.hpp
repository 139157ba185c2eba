#pragma once

#include "oracle/recurrence_oracle.hpp"
#include "sefpp/sefpp.hpp"

namespace test {

using sefpp::Point;
using Vec = Point<double>;
using Mat = sefpp::DenseMatrix<double>;
using Op = sefpp::LinearOperator<double>;

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

inline Vec scalar_point(double v) { return Vec::Constant(1, v); }

/// D1 = [1/2], D2 = [1/3], T1 x = (x+4)/2, T2 y = (y+6)/2, solution (4, 6).
inline sefpp::SefppProblem<double> p1(double x0 = 1, double y0 = 1) {
  return {Op::scalar(0.5),
          Op::scalar(1.0 / 3.0),
          sefpp::fixtures::midpoint_toward(4.0),
          sefpp::fixtures::midpoint_toward(6.0),
          scalar_point(x0),
          scalar_point(y0)};
}

inline sefpp::KnownSolution<double> p1_solution() { return {scalar_point(4), scalar_point(6)}; }

inline oracle::Vec to_std(const Vec& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline oracle::Mat to_std(const Mat& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

}  // namespace test
