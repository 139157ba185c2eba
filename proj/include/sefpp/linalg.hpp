#pragma once

#include "sefpp/errors.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

namespace sefpp {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

namespace detail {

inline std::atomic<std::size_t> operator_norm_calls{0};

template <typename Scalar>
struct NormCache {
  std::mutex mutex;
  std::optional<Scalar> value;
  Scalar tol{};
};

inline std::string dims(Index rows, Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

}  // namespace detail

template <typename Scalar>
class LinearOperator;

template <typename Scalar>
Scalar operator_norm(const LinearOperator<Scalar>& op, Scalar tol = Scalar(1e-10),
                     std::size_t max_iters = 10000);

/// Number of operator_norm() invocations in this process, cache hits included.
/// Lets callers assert that a code path never touches operator norms.
inline std::size_t operator_norm_call_count() noexcept {
  return detail::operator_norm_calls.load(std::memory_order_relaxed);
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& v, const char* what) {
  if (!v.allFinite()) throw InvalidInput(std::string(what) + " has non-finite entries");
}

template <typename Scalar>
Scalar inner(const Point<Scalar>& a, const Point<Scalar>& b) {
  if (a.size() != b.size()) throw InvalidInput("inner product of vectors with different sizes");
  return a.dot(b);
}

/// Dense bounded linear operator between finite-dimensional real Hilbert
/// spaces. rows() is the codomain dimension, cols() the domain dimension.
///
/// The matrix is immutable after construction. The spectral norm is computed
/// lazily by operator_norm() and shared between copies of the same operator.
template <typename Scalar>
class LinearOperator {
 public:
  using MatrixType = DenseMatrix<Scalar>;

  explicit LinearOperator(MatrixType matrix)
      : matrix_(std::move(matrix)), cache_(std::make_shared<detail::NormCache<Scalar>>()) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1)
      throw InvalidInput("linear operator must have at least one row and one column");
    require_finite(matrix_, "linear operator");
  }

  static LinearOperator identity(Index n) { return LinearOperator(MatrixType::Identity(n, n)); }

  static LinearOperator zero(Index rows, Index cols) {
    return LinearOperator(MatrixType::Zero(rows, cols));
  }

  /// 1x1 operator x -> s*x.
  static LinearOperator scalar(Scalar s) { return LinearOperator(MatrixType::Constant(1, 1, s)); }

  const MatrixType& matrix() const noexcept { return matrix_; }
  Index rows() const noexcept { return matrix_.rows(); }
  Index cols() const noexcept { return matrix_.cols(); }

  /// Transpose. adjoint().adjoint() reproduces the matrix exactly; a cached
  /// norm carries over since ||D*|| = ||D||.
  LinearOperator adjoint() const {
    LinearOperator out(matrix_.transpose());
    std::lock_guard lock(cache_->mutex);
    out.cache_->value = cache_->value;
    out.cache_->tol = cache_->tol;
    return out;
  }

  std::optional<Scalar> cached_norm() const {
    std::lock_guard lock(cache_->mutex);
    return cache_->value;
  }

 private:
  template <typename S>
  friend S operator_norm(const LinearOperator<S>&, S, std::size_t);

  MatrixType matrix_;
  std::shared_ptr<detail::NormCache<Scalar>> cache_;
};

template <typename Scalar>
Point<Scalar> apply(const LinearOperator<Scalar>& op, const Point<Scalar>& v) {
  if (v.size() != op.cols())
    throw InvalidInput("apply: operator is " + detail::dims(op.rows(), op.cols()) +
                       " but vector has dimension " + std::to_string(v.size()));
  return op.matrix() * v;
}

template <typename Scalar>
Point<Scalar> adjoint_apply(const LinearOperator<Scalar>& op, const Point<Scalar>& v) {
  if (v.size() != op.rows())
    throw InvalidInput("adjoint_apply: operator is " + detail::dims(op.rows(), op.cols()) +
                       " but vector has dimension " + std::to_string(v.size()));
  return op.matrix().transpose() * v;
}

/// Spectral norm ||D|| by power iteration on D*D.
///
/// Starts from the normalized all-ones vector and stops once successive
/// Rayleigh quotients differ by less than tol times the current quotient.
/// If the start vector lies in the kernel of D*D while D is nonzero, the
/// iteration restarts from the basis vector of the largest column.
/// Throws NumericalFailure (carrying the best estimate) when max_iters is hit.
template <typename Scalar>
Scalar operator_norm(const LinearOperator<Scalar>& op, Scalar tol, std::size_t max_iters) {
  detail::operator_norm_calls.fetch_add(1, std::memory_order_relaxed);
  if (!(tol > Scalar(0))) throw InvalidInput("operator_norm: tolerance must be positive");

  {
    std::lock_guard lock(op.cache_->mutex);
    if (op.cache_->value && op.cache_->tol <= tol) return *op.cache_->value;
  }

  const auto& d = op.matrix();
  const auto store = [&](Scalar value) {
    std::lock_guard lock(op.cache_->mutex);
    if (!op.cache_->value || tol < op.cache_->tol) {
      op.cache_->value = value;
      op.cache_->tol = tol;
    }
    return value;
  };

  if (d.isZero(Scalar(0))) return store(Scalar(0));

  Point<Scalar> v = Point<Scalar>::Ones(d.cols()).normalized();
  Point<Scalar> w = d.transpose() * (d * v);
  if (w.norm() == Scalar(0)) {
    Index col = 0;
    d.colwise().norm().maxCoeff(&col);
    v = Point<Scalar>::Unit(d.cols(), col);
    w = d.transpose() * (d * v);
  }

  Scalar rayleigh = v.dot(w);
  for (std::size_t it = 0; it < max_iters; ++it) {
    v = w / w.norm();
    w = d.transpose() * (d * v);
    const Scalar next = v.dot(w);
    if (std::abs(next - rayleigh) < tol * next) return store(std::sqrt(next));
    rayleigh = next;
  }
  throw NumericalFailure("operator_norm: power iteration did not converge",
                         static_cast<double>(std::sqrt(rayleigh)));
}

}  // namespace sefpp
