#pragma once

#include "sefpp/mapping.hpp"

#include <cmath>
#include <sstream>

namespace sefpp {

/// Upper bound 1/(1 + sqrt(1 + L^2)) for the normalization parameters.
template <typename Scalar>
Scalar zeta_upper_bound(Scalar lipschitz) {
  return Scalar(1) / (Scalar(1) + std::sqrt(Scalar(1) + lipschitz * lipschitz));
}

template <typename Scalar>
struct EtaZeta {
  Scalar eta;
  Scalar zeta;
};

/// zeta = 0.9 / (1 + sqrt(1 + L^2)), eta = zeta / 2.
template <typename Scalar>
EtaZeta<Scalar> default_eta_zeta(Scalar lipschitz) {
  if (!(lipschitz >= Scalar(0))) throw InvalidInput("default_eta_zeta: L must be nonnegative");
  const Scalar zeta = Scalar(0.9) * zeta_upper_bound(lipschitz);
  return {zeta / Scalar(2), zeta};
}

template <typename Scalar>
class NormalizedOperator;

template <typename Scalar>
NormalizedOperator<Scalar> make_normalized(NonlinearMapping<Scalar> T, Scalar eta, Scalar zeta,
                                           bool permissive = false);

/// U = (1 - eta) I + eta T((1 - zeta) I + zeta T).
///
/// For an L-Lipschitz quasi-pseudocontractive T and 0 < eta < zeta <
/// 1/(1 + sqrt(1 + L^2)), U is quasi-nonexpansive with Fix(U) = Fix(T).
template <typename Scalar>
class NormalizedOperator {
 public:
  const NonlinearMapping<Scalar>& base() const noexcept { return base_; }
  Scalar eta() const noexcept { return eta_; }
  Scalar zeta() const noexcept { return zeta_; }
  Scalar base_lipschitz() const noexcept { return lipschitz_; }

  /// Lipschitz bound provable from the composition: (1 + L)^2.
  Scalar lipschitz_bound() const noexcept { return (Scalar(1) + lipschitz_) * (Scalar(1) + lipschitz_); }

  Point<Scalar> operator()(const Point<Scalar>& x) const {
    const Point<Scalar> inner = (Scalar(1) - zeta_) * x + zeta_ * evaluate(base_, x);
    return (Scalar(1) - eta_) * x + eta_ * evaluate(base_, inner);
  }

 private:
  template <typename S>
  friend NormalizedOperator<S> make_normalized(NonlinearMapping<S>, S, S, bool);

  NormalizedOperator(NonlinearMapping<Scalar> base, Scalar eta, Scalar zeta, Scalar lipschitz)
      : base_(std::move(base)), eta_(eta), zeta_(zeta), lipschitz_(lipschitz) {}

  NonlinearMapping<Scalar> base_;
  Scalar eta_;
  Scalar zeta_;
  Scalar lipschitz_;
};

/// Builds U from T. T must carry a Lipschitz constant. With `permissive`,
/// any eta, zeta in (0, 1) is accepted regardless of ordering or the bound.
template <typename Scalar>
NormalizedOperator<Scalar> make_normalized(NonlinearMapping<Scalar> T, Scalar eta, Scalar zeta,
                                           bool permissive) {
  if (!T.lipschitz())
    throw InvalidParameters(T.name() + ": normalization needs a Lipschitz constant");
  const Scalar lip = *T.lipschitz();
  const Scalar bound = zeta_upper_bound(lip);
  if (!(eta > Scalar(0) && eta < Scalar(1) && zeta > Scalar(0) && zeta < Scalar(1)))
    throw InvalidParameters("eta and zeta must lie in (0, 1)");
  if (!permissive && !(eta < zeta && zeta < bound)) {
    std::ostringstream os;
    os.precision(10);
    os << "normalization parameters must satisfy 0 < eta < zeta < 1/(1+sqrt(1+L^2)) = " << bound
       << " (L = " << lip << "); got eta = " << eta << ", zeta = " << zeta;
    throw InvalidParameters(os.str());
  }
  return NormalizedOperator<Scalar>(std::move(T), eta, zeta, lip);
}

template <typename Scalar>
Point<Scalar> evaluate(const NormalizedOperator<Scalar>& U, const Point<Scalar>& x) {
  return U(x);
}

/// U wrapped as a mapping: Lipschitz (1 + L)^2, same declared fixed points.
template <typename Scalar>
NonlinearMapping<Scalar> as_mapping(const NormalizedOperator<Scalar>& U) {
  NonlinearMapping<Scalar> m([U](const Point<Scalar>& x) { return U(x); },
                             "normalized(" + U.base().name() + ")");
  m = m.with_lipschitz(U.lipschitz_bound()).with_dimension(U.base().dimension());
  return m.with_fixed_points(U.base().fixed_points());
}

template <typename Scalar>
struct NormalizationReport {
  bool fixed_points_preserved = false;
  Scalar worst_fixed_point_residual{};
  Scalar lipschitz_estimate{};
  /// (1 + L)^2
  Scalar lipschitz_bound{};
  bool lipschitz_within_bound = false;
  /// Whether the sharper L^2 figure also held on the samples.
  bool squared_lipschitz_held = false;
  bool quasi_nonexpansive = false;
  /// max over samples and declared p of ||Ux - p|| - ||x - p||.
  Scalar worst_qne_violation{};

  bool all_hold() const { return fixed_points_preserved && lipschitz_within_bound && quasi_nonexpansive; }
};

/// Sampled checks of the normalization properties on `domain`:
/// fixed points of T are fixed by U (to 1e-10), the sampled Lipschitz
/// quotient of U stays within (1 + L)^2 + 1e-6, and ||Ux - p|| <= ||x - p|| + 1e-9
/// for every declared p.
template <typename Scalar>
NormalizationReport<Scalar> verify_normalization(const NormalizedOperator<Scalar>& U,
                                                 const ConvexSet<Scalar>& domain,
                                                 std::size_t samples,
                                                 std::uint64_t seed = kDefaultSeed) {
  const auto& fixed = U.base().fixed_points();
  if (fixed.empty()) throw InvalidInput("verify_normalization: base mapping declares no fixed points");

  NormalizationReport<Scalar> r;
  r.worst_fixed_point_residual = Scalar(0);
  for (const auto& p : fixed)
    r.worst_fixed_point_residual = std::max(r.worst_fixed_point_residual, (U(p) - p).norm());
  r.fixed_points_preserved = r.worst_fixed_point_residual <= Scalar(kFixedPointTolerance);

  const NonlinearMapping<Scalar> as_map(
      [&U](const Point<Scalar>& x) { return U(x); }, "normalized");
  r.lipschitz_estimate = estimate_lipschitz(as_map, domain, samples, seed);
  r.lipschitz_bound = U.lipschitz_bound();
  r.lipschitz_within_bound = r.lipschitz_estimate <= r.lipschitz_bound + Scalar(1e-6);
  const Scalar l = U.base_lipschitz();
  r.squared_lipschitz_held = r.lipschitz_estimate <= l * l + Scalar(1e-6);

  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  r.worst_qne_violation = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const Point<Scalar> x = sample_uniform(domain, rng);
    const Point<Scalar> ux = detail::evaluate_at_sample(as_map, x);
    for (const auto& p : fixed)
      r.worst_qne_violation = std::max(r.worst_qne_violation, (ux - p).norm() - (x - p).norm());
  }
  r.quasi_nonexpansive = r.worst_qne_violation <= Scalar(kSampledInequalityTolerance);
  return r;
}

}  // namespace sefpp
