#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <utility>

namespace sefpp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatches, non-finite data, empty sets.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Operator parameters outside their admissible range (e.g. eta/zeta).
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

/// Solver configuration rejected by schedule or step-size validation.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// A mapping produced a non-finite coordinate.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, Eigen::Index coordinate)
      : Error(what), coordinate_(coordinate) {}

  Eigen::Index coordinate() const noexcept { return coordinate_; }

 private:
  Eigen::Index coordinate_;
};

/// An iterative procedure failed to converge or produced NaN/Inf.
/// Carries the best available estimate and, where meaningful, the last iterate.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double best_estimate,
                   Eigen::VectorXd last_iterate = {})
      : Error(what),
        best_estimate_(best_estimate),
        last_iterate_(std::move(last_iterate)) {}

  double best_estimate() const noexcept { return best_estimate_; }
  const Eigen::VectorXd& last_iterate() const noexcept { return last_iterate_; }

 private:
  double best_estimate_;
  Eigen::VectorXd last_iterate_;
};

}  // namespace sefpp
