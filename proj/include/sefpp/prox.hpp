#pragma once

#include "sefpp/convex_set.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <variant>

namespace sefpp {

/// f(x) = 1/2 <Ax, x> - <b, x>, A symmetric positive semidefinite.
template <typename Scalar>
struct Quadratic {
  DenseMatrix<Scalar> A;
  Point<Scalar> b;
};

/// f(x) = weight * ||x||_1
template <typename Scalar>
struct L1Norm {
  Scalar weight;
};

template <typename Scalar>
struct Indicator {
  ConvexSet<Scalar> set;
};

/// Proper lower semicontinuous convex function with a closed-form prox.
template <typename Scalar>
class ProxFunction {
 public:
  using Kind = std::variant<Quadratic<Scalar>, L1Norm<Scalar>, Indicator<Scalar>>;

  /// Rejects A unless it is symmetric and its smallest eigenvalue is >= -1e-10.
  static ProxFunction quadratic(DenseMatrix<Scalar> A, Point<Scalar> b) {
    if (A.rows() < 1 || A.rows() != A.cols() || A.rows() != b.size())
      throw InvalidInput("quadratic: A must be square and match b");
    require_finite(A, "quadratic A");
    require_finite(b, "quadratic b");
    const Scalar tol(1e-10);
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol)
      throw InvalidInput("quadratic: A must be symmetric");
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(A, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol)
      throw InvalidInput("quadratic: A must be positive semidefinite");
    return ProxFunction(Quadratic<Scalar>{std::move(A), std::move(b)});
  }

  static ProxFunction l1(Scalar weight) {
    if (!(weight >= Scalar(0)) || !std::isfinite(weight))
      throw InvalidInput("l1 weight must be finite and nonnegative");
    return ProxFunction(L1Norm<Scalar>{weight});
  }

  static ProxFunction indicator(ConvexSet<Scalar> set) {
    return ProxFunction(Indicator<Scalar>{std::move(set)});
  }

  const Kind& kind() const noexcept { return kind_; }

 private:
  explicit ProxFunction(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

template <typename Scalar>
Scalar value(const ProxFunction<Scalar>& f, const Point<Scalar>& x) {
  return std::visit(
      [&](const auto& k) -> Scalar {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Quadratic<Scalar>>) {
          if (x.size() != k.b.size()) throw InvalidInput("value: dimension mismatch");
          return Scalar(0.5) * x.dot(k.A * x) - k.b.dot(x);
        } else if constexpr (std::is_same_v<T, L1Norm<Scalar>>) {
          return k.weight * x.template lpNorm<1>();
        } else {
          return contains(k.set, x, Scalar(1e-12)) ? Scalar(0)
                                                   : std::numeric_limits<Scalar>::infinity();
        }
      },
      f.kind());
}

/// argmin_t f(t) + ||t - x||^2 / (2 lambda)
template <typename Scalar>
Point<Scalar> prox(const ProxFunction<Scalar>& f, Scalar lambda, const Point<Scalar>& x) {
  if (!(lambda > Scalar(0))) throw InvalidInput("prox: lambda must be positive");
  return std::visit(
      [&](const auto& k) -> Point<Scalar> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Quadratic<Scalar>>) {
          if (x.size() != k.b.size()) throw InvalidInput("prox: dimension mismatch");
          // (I + lambda A) t = x + lambda b
          const DenseMatrix<Scalar> m =
              DenseMatrix<Scalar>::Identity(x.size(), x.size()) + lambda * k.A;
          return m.ldlt().solve(x + lambda * k.b);
        } else if constexpr (std::is_same_v<T, L1Norm<Scalar>>) {
          const Scalar t = lambda * k.weight;
          return x.unaryExpr([t](Scalar v) {
            return v > t ? v - t : (v < -t ? v + t : Scalar(0));
          });
        } else {
          return project(k.set, x);
        }
      },
      f.kind());
}

}  // namespace sefpp
