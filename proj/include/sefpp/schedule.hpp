#pragma once

#include "sefpp/errors.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace sefpp {

enum class ScheduleKind { constant, harmonic, power };

inline const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::harmonic: return "harmonic";
    case ScheduleKind::power: break;
  }
  return "power";
}

/// Step-size rule k -> c / (k + offset)^p, k = 0, 1, 2, ... counting steps
/// from the initial point. constant ignores offset and p; harmonic fixes p = 1.
///
/// All three families are nonincreasing in k, so sup = value(0).
template <typename Scalar>
struct Schedule {
  ScheduleKind kind = ScheduleKind::constant;
  Scalar c = Scalar(0);
  Scalar p = Scalar(1);
  Scalar offset = Scalar(1);

  static Schedule constant(Scalar c) { return checked({ScheduleKind::constant, c, Scalar(0), Scalar(1)}); }
  static Schedule harmonic(Scalar c, Scalar offset = Scalar(1)) {
    return checked({ScheduleKind::harmonic, c, Scalar(1), offset});
  }
  static Schedule power(Scalar c, Scalar p, Scalar offset = Scalar(1)) {
    return checked({ScheduleKind::power, c, p, offset});
  }

  Scalar operator()(std::size_t k) const {
    if (kind == ScheduleKind::constant) return c;
    const Scalar base = static_cast<Scalar>(k) + offset;
    return kind == ScheduleKind::harmonic ? c / base : c / std::pow(base, p);
  }

  Scalar supremum() const { return (*this)(0); }
  Scalar infimum() const { return kind == ScheduleKind::constant ? c : Scalar(0); }

  bool tends_to_zero() const { return c == Scalar(0) || kind != ScheduleKind::constant; }
  bool sum_diverges() const { return c > Scalar(0) && (kind == ScheduleKind::constant || p <= Scalar(1)); }
  bool square_summable() const {
    return c == Scalar(0) || (kind != ScheduleKind::constant && p > Scalar(0.5));
  }

  std::string describe() const {
    std::string s = to_string(kind);
    s += "(c=" + std::to_string(static_cast<double>(c));
    if (kind != ScheduleKind::constant) {
      if (kind == ScheduleKind::power) s += ", p=" + std::to_string(static_cast<double>(p));
      s += ", offset=" + std::to_string(static_cast<double>(offset));
    }
    return s + ")";
  }

 private:
  static Schedule checked(Schedule s) {
    if (!(s.c >= Scalar(0)) || !std::isfinite(s.c))
      throw InvalidInput("schedule coefficient must be finite and nonnegative");
    if (s.kind != ScheduleKind::constant) {
      if (!(s.offset > Scalar(0)) || !std::isfinite(s.offset))
        throw InvalidInput("schedule offset must be positive");
      if (!(s.p > Scalar(0)) || !std::isfinite(s.p))
        throw InvalidInput("schedule exponent must be positive");
    }
    return s;
  }
};

template <typename Scalar>
Scalar tau_schedule(const Schedule<Scalar>& schedule, std::size_t n) {
  return schedule(n);
}

}  // namespace sefpp
