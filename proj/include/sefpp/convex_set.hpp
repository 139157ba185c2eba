#pragma once

#include "sefpp/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <variant>

namespace sefpp {

template <typename Scalar>
struct Box {
  Point<Scalar> lo;
  Point<Scalar> hi;
};

template <typename Scalar>
struct Ball {
  Point<Scalar> center;
  Scalar radius;
};

/// { x : <normal, x> <= offset }
template <typename Scalar>
struct HalfSpace {
  Point<Scalar> normal;
  Scalar offset;
};

/// Nonempty closed convex subset of R^d with a closed-form metric projection.
/// Boxes may have infinite bounds; box(-inf, inf) is the whole space.
template <typename Scalar>
class ConvexSet {
 public:
  using Shape = std::variant<Box<Scalar>, Ball<Scalar>, HalfSpace<Scalar>>;

  static ConvexSet box(Point<Scalar> lo, Point<Scalar> hi) {
    if (lo.size() < 1 || lo.size() != hi.size())
      throw InvalidInput("box bounds must be nonempty and of equal dimension");
    if (lo.hasNaN() || hi.hasNaN()) throw InvalidInput("box bounds contain NaN");
    if ((lo.array() > hi.array()).any()) throw InvalidInput("box requires lo <= hi componentwise");
    if ((lo.array() == std::numeric_limits<Scalar>::infinity()).any() ||
        (hi.array() == -std::numeric_limits<Scalar>::infinity()).any())
      throw InvalidInput("box would be empty");
    return ConvexSet(Box<Scalar>{std::move(lo), std::move(hi)});
  }

  static ConvexSet interval(Scalar lo, Scalar hi) {
    return box(Point<Scalar>::Constant(1, lo), Point<Scalar>::Constant(1, hi));
  }

  static ConvexSet whole_space(Index dim) {
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    return box(Point<Scalar>::Constant(dim, -inf), Point<Scalar>::Constant(dim, inf));
  }

  static ConvexSet ball(Point<Scalar> center, Scalar radius) {
    if (center.size() < 1) throw InvalidInput("ball center must be nonempty");
    require_finite(center, "ball center");
    if (!(radius > Scalar(0)) || !std::isfinite(radius))
      throw InvalidInput("ball radius must be positive and finite");
    return ConvexSet(Ball<Scalar>{std::move(center), radius});
  }

  static ConvexSet halfspace(Point<Scalar> normal, Scalar offset) {
    if (normal.size() < 1) throw InvalidInput("halfspace normal must be nonempty");
    require_finite(normal, "halfspace normal");
    if (!std::isfinite(offset)) throw InvalidInput("halfspace offset must be finite");
    if (normal.norm() == Scalar(0)) throw InvalidInput("halfspace normal must be nonzero");
    return ConvexSet(HalfSpace<Scalar>{std::move(normal), offset});
  }

  const Shape& shape() const noexcept { return shape_; }

  Index dimension() const {
    return std::visit(
        [](const auto& s) -> Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box<Scalar>>) return s.lo.size();
          else if constexpr (std::is_same_v<T, Ball<Scalar>>) return s.center.size();
          else return s.normal.size();
        },
        shape_);
  }

 private:
  explicit ConvexSet(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

template <typename Scalar>
Point<Scalar> project(const ConvexSet<Scalar>& set, const Point<Scalar>& x) {
  if (x.size() != set.dimension())
    throw InvalidInput("project: set has dimension " + std::to_string(set.dimension()) +
                       ", point has dimension " + std::to_string(x.size()));
  return std::visit(
      [&](const auto& s) -> Point<Scalar> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box<Scalar>>) {
          return x.cwiseMax(s.lo).cwiseMin(s.hi);
        } else if constexpr (std::is_same_v<T, Ball<Scalar>>) {
          const Point<Scalar> d = x - s.center;
          const Scalar r = d.norm();
          if (r <= s.radius) return x;
          return s.center + (s.radius / r) * d;
        } else {
          const Scalar excess = s.normal.dot(x) - s.offset;
          if (excess <= Scalar(0)) return x;
          return x - (excess / s.normal.squaredNorm()) * s.normal;
        }
      },
      set.shape());
}

template <typename Scalar>
bool contains(const ConvexSet<Scalar>& set, const Point<Scalar>& x, Scalar tol = Scalar(0)) {
  return (project(set, x) - x).norm() <= tol;
}

/// Uniform sample from a bounded set. Boxes need finite bounds; halfspaces
/// are unbounded and rejected.
template <typename Scalar, typename Rng>
Point<Scalar> sample_uniform(const ConvexSet<Scalar>& set, Rng& rng) {
  return std::visit(
      [&](const auto& s) -> Point<Scalar> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box<Scalar>>) {
          if (!s.lo.allFinite() || !s.hi.allFinite())
            throw InvalidInput("cannot sample from an unbounded box");
          Point<Scalar> out(s.lo.size());
          for (Index i = 0; i < out.size(); ++i) {
            std::uniform_real_distribution<double> u(static_cast<double>(s.lo[i]),
                                                     static_cast<double>(s.hi[i]));
            out[i] = s.lo[i] == s.hi[i] ? s.lo[i] : Scalar(u(rng));
          }
          return out;
        } else if constexpr (std::is_same_v<T, Ball<Scalar>>) {
          std::normal_distribution<double> g(0.0, 1.0);
          std::uniform_real_distribution<double> u(0.0, 1.0);
          const Index d = s.center.size();
          Point<Scalar> dir(d);
          do {
            for (Index i = 0; i < d; ++i) dir[i] = Scalar(g(rng));
          } while (dir.norm() == Scalar(0));
          const Scalar r = s.radius * Scalar(std::pow(u(rng), 1.0 / static_cast<double>(d)));
          return s.center + (r / dir.norm()) * dir;
        } else {
          throw InvalidInput("cannot sample uniformly from a halfspace");
        }
      },
      set.shape());
}

/// True when the set is a single point (a box with lo == hi everywhere).
template <typename Scalar>
bool is_singleton(const ConvexSet<Scalar>& set) {
  if (const auto* b = std::get_if<Box<Scalar>>(&set.shape())) return b->lo == b->hi;
  return false;
}

}  // namespace sefpp
