#pragma once

#include "sefpp/convex_set.hpp"
#include "sefpp/prox.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace sefpp {

enum class MappingClass {
  quasi_nonexpansive,
  demicontractive,
  quasi_pseudocontractive,
  unclassified,
};

inline const char* to_string(MappingClass c) {
  switch (c) {
    case MappingClass::quasi_nonexpansive: return "quasi-nonexpansive";
    case MappingClass::demicontractive: return "demicontractive";
    case MappingClass::quasi_pseudocontractive: return "quasi-pseudocontractive";
    case MappingClass::unclassified: break;
  }
  return "unclassified";
}

/// Tolerance for ||Tp - p|| at a declared fixed point.
inline constexpr double kFixedPointTolerance = 1e-10;

/// A self-map of R^d with optional metadata: a Lipschitz constant, declared
/// fixed points and a class tag (with beta for demicontractive maps).
///
/// dimension() == 0 means the evaluator accepts any dimension (e.g. maps
/// acting coordinatewise).
template <typename Scalar>
class NonlinearMapping {
 public:
  using Evaluator = std::function<Point<Scalar>(const Point<Scalar>&)>;

  explicit NonlinearMapping(Evaluator f, std::string name = "mapping")
      : f_(std::move(f)), name_(std::move(name)) {
    if (!f_) throw InvalidInput("mapping evaluator is empty");
  }

  NonlinearMapping with_lipschitz(Scalar lipschitz) const {
    if (!(lipschitz >= Scalar(0)) || !std::isfinite(lipschitz))
      throw InvalidInput(name_ + ": Lipschitz constant must be finite and nonnegative");
    NonlinearMapping out = *this;
    out.lipschitz_ = lipschitz;
    return out;
  }

  NonlinearMapping with_dimension(Index dim) const {
    NonlinearMapping out = *this;
    out.dim_ = dim;
    return out;
  }

  NonlinearMapping with_class(MappingClass c, Scalar beta = Scalar(0)) const {
    if (c == MappingClass::demicontractive && !(beta >= Scalar(0) && beta < Scalar(1)))
      throw InvalidInput(name_ + ": demicontractive beta must lie in [0, 1)");
    NonlinearMapping out = *this;
    out.class_ = c;
    out.beta_ = c == MappingClass::quasi_pseudocontractive ? Scalar(1) : beta;
    return out;
  }

  /// Every declared point must satisfy ||Tp - p|| <= 1e-10.
  NonlinearMapping with_fixed_points(std::vector<Point<Scalar>> points) const;

  const std::string& name() const noexcept { return name_; }
  const std::optional<Scalar>& lipschitz() const noexcept { return lipschitz_; }
  const std::vector<Point<Scalar>>& fixed_points() const noexcept { return fixed_points_; }
  MappingClass mapping_class() const noexcept { return class_; }
  Scalar beta() const noexcept { return beta_; }
  Index dimension() const noexcept { return dim_; }

  const Evaluator& evaluator() const noexcept { return f_; }

 private:
  Evaluator f_;
  std::string name_;
  std::optional<Scalar> lipschitz_;
  std::vector<Point<Scalar>> fixed_points_;
  MappingClass class_ = MappingClass::unclassified;
  Scalar beta_ = Scalar(0);
  Index dim_ = 0;
};

namespace detail {

template <typename Scalar>
std::string format_point(const Point<Scalar>& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace detail

/// T(x), rejecting dimension mismatches and non-finite output.
template <typename Scalar>
Point<Scalar> evaluate(const NonlinearMapping<Scalar>& T, const std::type_identity_t<Point<Scalar>>& x) {
  if (T.dimension() != 0 && x.size() != T.dimension())
    throw InvalidInput(T.name() + ": expects dimension " + std::to_string(T.dimension()) +
                       ", got " + std::to_string(x.size()));
  Point<Scalar> y = T.evaluator()(x);
  if (y.size() != x.size())
    throw InvalidInput(T.name() + ": evaluator changed the dimension");
  for (Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      std::ostringstream os;
      os << T.name() << ": coordinate " << i << " of T(x) is " << y[i] << " at x = "
         << detail::format_point(x);
      throw DomainError(os.str(), i);
    }
  }
  return y;
}

template <typename Scalar>
NonlinearMapping<Scalar> NonlinearMapping<Scalar>::with_fixed_points(
    std::vector<Point<Scalar>> points) const {
  for (const auto& p : points) {
    const Scalar r = (evaluate(*this, p) - p).norm();
    if (!(r <= Scalar(kFixedPointTolerance)))
      throw InvalidInput(name_ + ": declared fixed point " + detail::format_point(p) +
                         " has residual " + std::to_string(static_cast<double>(r)));
  }
  NonlinearMapping out = *this;
  out.fixed_points_ = std::move(points);
  return out;
}

template <typename Scalar>
NonlinearMapping<Scalar> identity_mapping() {
  return NonlinearMapping<Scalar>([](const Point<Scalar>& x) { return x; }, "identity")
      .with_lipschitz(Scalar(1))
      .with_class(MappingClass::quasi_nonexpansive);
}

/// x -> A x + b. The Lipschitz constant is the largest singular value of A.
template <typename Scalar>
NonlinearMapping<Scalar> affine_mapping(DenseMatrix<Scalar> A, Point<Scalar> b) {
  if (A.rows() < 1 || A.rows() != A.cols() || A.rows() != b.size())
    throw InvalidInput("affine mapping: A must be square and match b");
  require_finite(A, "affine A");
  require_finite(b, "affine b");
  const Scalar lip = Eigen::JacobiSVD<DenseMatrix<Scalar>>(A).singularValues()(0);
  const Index dim = A.rows();
  return NonlinearMapping<Scalar>(
             [A = std::move(A), b = std::move(b)](const Point<Scalar>& x) -> Point<Scalar> {
               return A * x + b;
             },
             "affine")
      .with_lipschitz(lip)
      .with_dimension(dim);
}

template <typename DerivedA, typename DerivedB>
auto affine_mapping(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  return affine_mapping(DenseMatrix<Scalar>(A), Point<Scalar>(b));
}

/// Coordinatewise x_i -> p(x_i) / q(x_i); coefficients in ascending powers.
/// No Lipschitz constant is attached: the caller knows the domain.
template <typename Scalar>
NonlinearMapping<Scalar> rational_mapping(std::vector<Scalar> numerator,
                                          std::vector<Scalar> denominator,
                                          std::string name = "rational") {
  if (numerator.empty() || denominator.empty())
    throw InvalidInput("rational mapping needs nonempty coefficient lists");
  const auto horner = [](const std::vector<Scalar>& c, Scalar t) {
    Scalar acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  return NonlinearMapping<Scalar>(
      [num = std::move(numerator), den = std::move(denominator),
       horner](const Point<Scalar>& x) -> Point<Scalar> {
        return x.unaryExpr([&](Scalar t) { return horner(num, t) / horner(den, t); });
      },
      std::move(name));
}

/// Metric projection P_K; firmly nonexpansive with Fix = K.
template <typename Scalar>
NonlinearMapping<Scalar> projection_mapping(ConvexSet<Scalar> set) {
  const Index dim = set.dimension();
  return NonlinearMapping<Scalar>(
             [set = std::move(set)](const Point<Scalar>& x) { return project(set, x); },
             "projection")
      .with_lipschitz(Scalar(1))
      .with_dimension(dim)
      .with_class(MappingClass::quasi_nonexpansive);
}

/// Proximal map of f with parameter lambda; firmly nonexpansive.
template <typename Scalar>
NonlinearMapping<Scalar> prox_mapping(ProxFunction<Scalar> f, Scalar lambda) {
  if (!(lambda > Scalar(0))) throw InvalidInput("prox mapping: lambda must be positive");
  return NonlinearMapping<Scalar>(
             [f = std::move(f), lambda](const Point<Scalar>& x) { return prox(f, lambda, x); },
             "prox")
      .with_lipschitz(Scalar(1))
      .with_class(MappingClass::quasi_nonexpansive);
}

// ---------------------------------------------------------------------------
// Resolvent of a monotone variational inequality

template <typename Scalar>
struct ResolventOptions {
  Scalar tolerance = Scalar(1e-10);
  std::size_t max_iters = 100000;
  /// Inner step; defaults to 1/(1 + lambda L_F) if F has a Lipschitz
  /// constant, 0.1/lambda otherwise.
  std::optional<Scalar> step;
};

/// The point y in K with <F(y), t - y> + <t - y, y - q>/lambda >= 0 for all
/// t in K. Computed by the projected iteration
///   y <- P_K(y - s (lambda F(y) + y - q))
/// started at P_K(q), until ||y_{k+1} - y_k|| <= tolerance.
template <typename Scalar>
Point<Scalar> resolvent_vi(const NonlinearMapping<Scalar>& F, const ConvexSet<Scalar>& K,
                           Scalar lambda, const Point<Scalar>& q,
                           const ResolventOptions<Scalar>& options = {}) {
  if (!(lambda > Scalar(0))) throw InvalidInput("resolvent: lambda must be positive");
  const Scalar s = options.step ? *options.step
                   : F.lipschitz() ? Scalar(1) / (Scalar(1) + lambda * *F.lipschitz())
                                   : Scalar(0.1) / lambda;
  if (!(s > Scalar(0))) throw InvalidInput("resolvent: inner step must be positive");

  Point<Scalar> y = project(K, q);
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    Point<Scalar> next = project(K, Point<Scalar>(y - s * (lambda * evaluate(F, y) + y - q)));
    residual = (next - y).norm();
    y = std::move(next);
    if (residual <= options.tolerance) return y;
    if (!std::isfinite(residual)) break;
  }
  Eigen::VectorXd last = y.template cast<double>();
  throw NumericalFailure("resolvent: inner iteration did not reach tolerance (residual " +
                             std::to_string(static_cast<double>(residual)) + ")",
                         static_cast<double>(residual), std::move(last));
}

/// q -> resolvent_vi(F, K, lambda, q). Resolvents of monotone maps are
/// firmly nonexpansive, so the mapping is tagged 1-Lipschitz.
template <typename Scalar>
NonlinearMapping<Scalar> resolvent_mapping(NonlinearMapping<Scalar> F, ConvexSet<Scalar> K,
                                           Scalar lambda, ResolventOptions<Scalar> options = {}) {
  if (!(lambda > Scalar(0))) throw InvalidInput("resolvent mapping: lambda must be positive");
  const Index dim = K.dimension();
  return NonlinearMapping<Scalar>(
             [F = std::move(F), K = std::move(K), lambda,
              options](const Point<Scalar>& q) { return resolvent_vi(F, K, lambda, q, options); },
             "resolvent")
      .with_lipschitz(Scalar(1))
      .with_dimension(dim)
      .with_class(MappingClass::quasi_pseudocontractive);
}

// ---------------------------------------------------------------------------
// Sampled property checks

inline constexpr std::uint64_t kDefaultSeed = 20240607;
inline constexpr double kSampledInequalityTolerance = 1e-9;

template <typename Scalar>
struct InequalityReport {
  bool holds = true;
  /// max over samples of lhs - rhs; negative means slack everywhere.
  Scalar worst_violation = -std::numeric_limits<Scalar>::infinity();
  Point<Scalar> worst_sample;
  std::size_t samples = 0;
};

namespace detail {

template <typename Scalar>
Point<Scalar> evaluate_at_sample(const NonlinearMapping<Scalar>& T, const Point<Scalar>& x) {
  try {
    return evaluate(T, x);
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " (sampled point " + format_point(x) + ")",
                      e.coordinate());
  }
}

template <typename Scalar>
void require_fixed_point(const NonlinearMapping<Scalar>& T, const Point<Scalar>& p) {
  const Scalar r = (evaluate(T, p) - p).norm();
  if (!(r <= Scalar(kFixedPointTolerance)))
    throw InvalidInput(T.name() + ": " + format_point(p) + " is not a fixed point");
}

}  // namespace detail

/// Samples the demicontractive inequality
///   ||Ty - p||^2 <= ||y - p||^2 + beta ||y - Ty||^2
/// at uniform points of `domain`; holds iff the worst violation is <= 1e-9.
template <typename Scalar>
InequalityReport<Scalar> check_demicontractive(const NonlinearMapping<Scalar>& T,
                                               const Point<Scalar>& p, Scalar beta,
                                               std::size_t samples,
                                               const ConvexSet<Scalar>& domain,
                                               std::uint64_t seed = kDefaultSeed) {
  if (samples == 0) throw InvalidInput("check: need at least one sample");
  if (p.size() != domain.dimension()) throw InvalidInput("check: p and domain differ in dimension");
  detail::require_fixed_point(T, p);
  std::mt19937_64 rng(seed);
  InequalityReport<Scalar> report;
  report.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const Point<Scalar> y = sample_uniform(domain, rng);
    const Point<Scalar> ty = detail::evaluate_at_sample(T, y);
    const Scalar violation =
        (ty - p).squaredNorm() - (y - p).squaredNorm() - beta * (y - ty).squaredNorm();
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_sample = y;
    }
  }
  report.holds = report.worst_violation <= Scalar(kSampledInequalityTolerance);
  return report;
}

/// The beta = 1 case: ||Ty - p||^2 <= ||y - p||^2 + ||y - Ty||^2.
template <typename Scalar>
InequalityReport<Scalar> check_quasi_pseudocontractive(const NonlinearMapping<Scalar>& T,
                                                       const Point<Scalar>& p,
                                                       std::size_t samples,
                                                       const ConvexSet<Scalar>& domain,
                                                       std::uint64_t seed = kDefaultSeed) {
  return check_demicontractive(T, p, Scalar(1), samples, domain, seed);
}

/// Lower bound on the Lipschitz constant of T over `domain`: the largest
/// difference quotient over all pairs of `samples` uniform points.
template <typename Scalar>
Scalar estimate_lipschitz(const NonlinearMapping<Scalar>& T, const ConvexSet<Scalar>& domain,
                          std::size_t samples, std::uint64_t seed = kDefaultSeed) {
  if (samples < 2) throw InvalidInput("estimate_lipschitz: need at least two samples");
  if (is_singleton(domain)) throw InvalidInput("estimate_lipschitz: domain is a single point");
  std::mt19937_64 rng(seed);
  std::vector<Point<Scalar>> xs;
  std::vector<Point<Scalar>> ts;
  xs.reserve(samples);
  ts.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs.push_back(sample_uniform(domain, rng));
    ts.push_back(detail::evaluate_at_sample(T, xs.back()));
  }
  Scalar best(0);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = i + 1; j < samples; ++j) {
      const Scalar dx = (xs[i] - xs[j]).norm();
      if (dx == Scalar(0)) continue;
      best = std::max(best, (ts[i] - ts[j]).norm() / dx);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Scalar fixtures used by the table reproduction, tests and sample configs.

namespace fixtures {

/// x -> (x + c) / 2, Fix = {c}, L = 1/2.
template <typename Scalar>
NonlinearMapping<Scalar> midpoint_toward(Scalar c) {
  return NonlinearMapping<Scalar>(
             [c](const Point<Scalar>& x) -> Point<Scalar> { return (x.array() + c) / Scalar(2); },
             "midpoint")
      .with_lipschitz(Scalar(0.5))
      .with_class(MappingClass::quasi_nonexpansive)
      .with_fixed_points({Point<Scalar>::Constant(1, c)});
}

/// y -> (y^2 + 2) / (y + 4) on [0, inf), Fix = {1/2}, sup |T'| = 1.
template <typename Scalar>
NonlinearMapping<Scalar> quadratic_over_linear() {
  return rational_mapping<Scalar>({Scalar(2), Scalar(0), Scalar(1)}, {Scalar(4), Scalar(1)},
                                  "(y^2+2)/(y+4)")
      .with_dimension(1)
      .with_lipschitz(Scalar(1))
      .with_class(MappingClass::quasi_pseudocontractive)
      .with_fixed_points({Point<Scalar>::Constant(1, Scalar(0.5))});
}

/// x -> (x^5 + 6) / (x^4 + 2). The only real fixed point is 3 (x^5 + 2x =
/// x^5 + 6). sup |T'| on [0, inf) is about 1.4923; 1.5 is attached.
template <typename Scalar>
NonlinearMapping<Scalar> quintic_over_quartic() {
  return rational_mapping<Scalar>({Scalar(6), 0, 0, 0, 0, Scalar(1)}, {Scalar(2), 0, 0, 0, Scalar(1)},
                                  "(x^5+6)/(x^4+2)")
      .with_dimension(1)
      .with_lipschitz(Scalar(1.5))
      .with_class(MappingClass::quasi_pseudocontractive)
      .with_fixed_points({Point<Scalar>::Constant(1, Scalar(3))});
}

/// y -> (y^3 + 4) / (y^2 + y), Fix = {2} on (0, inf). Poles at 0 and -1,
/// so no global Lipschitz constant is attached.
template <typename Scalar>
NonlinearMapping<Scalar> cubic_over_quadratic() {
  return rational_mapping<Scalar>({Scalar(4), 0, 0, Scalar(1)}, {Scalar(0), Scalar(1), Scalar(1)},
                                  "(y^3+4)/(y^2+y)")
      .with_dimension(1)
      .with_fixed_points({Point<Scalar>::Constant(1, Scalar(2))});
}

}  // namespace fixtures

}  // namespace sefpp
