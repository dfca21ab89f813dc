#pragma once

// Classic subjective-logic opinions (uncertain evidence fixed at 2) and their
// combining/discounting operators, used by the SL* baseline.

#include <cmath>
#include <stdexcept>

#include "trustcalc/opinion.hpp"

namespace trustcalc {

template <typename Scalar>
class BasicSlOpinion {
public:
  static constexpr Scalar kUncertaintyMass = Scalar(2);

  BasicSlOpinion() = default;

  BasicSlOpinion(Scalar alpha, Scalar beta,
                 Scalar base_rate = BasicOpinion<Scalar>::kDefaultBaseRate)
      : alpha_(alpha), beta_(beta), base_rate_(base_rate) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0 || beta < 0)
      throw std::invalid_argument("SL evidence must be finite and >= 0");
    if (!(base_rate >= Scalar(0) && base_rate <= Scalar(1)))
      throw std::invalid_argument("SL base rate must lie in [0, 1]");
  }

  /// Keeps the certain evidence of a three-valued opinion; its uncertain
  /// evidence is replaced by the fixed SL mass.
  static BasicSlOpinion from_opinion(const BasicOpinion<Scalar>& op) {
    return BasicSlOpinion(op.alpha(), op.beta(), op.base_rate());
  }

  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }
  Scalar uncertainty_mass() const { return kUncertaintyMass; }
  Scalar base_rate() const { return base_rate_; }
  Scalar certain_evidence() const { return alpha_ + beta_; }

  // b, d, u masses.
  Scalar belief() const { return alpha_ / (alpha_ + beta_ + kUncertaintyMass); }
  Scalar disbelief() const { return beta_ / (alpha_ + beta_ + kUncertaintyMass); }
  Scalar uncertainty() const {
    return kUncertaintyMass / (alpha_ + beta_ + kUncertaintyMass);
  }

  friend bool operator==(const BasicSlOpinion&, const BasicSlOpinion&) = default;

private:
  Scalar alpha_ = 0;
  Scalar beta_ = 0;
  Scalar base_rate_ = BasicOpinion<Scalar>::kDefaultBaseRate;
};

using SlOpinion = BasicSlOpinion<double>;

template <typename Scalar>
BasicSlOpinion<Scalar> sl_combine(const BasicSlOpinion<Scalar>& a,
                                  const BasicSlOpinion<Scalar>& b) {
  return {a.alpha() + b.alpha(), a.beta() + b.beta(),
          (a.base_rate() + b.base_rate()) / Scalar(2)};
}

/// SL discounting of `b` (recommender's opinion on the target) by `a`
/// (trustor's opinion on the recommender). Keeps b's base rate.
template <typename Scalar>
BasicSlOpinion<Scalar> sl_discount(const BasicSlOpinion<Scalar>& a,
                                   const BasicSlOpinion<Scalar>& b) {
  constexpr Scalar u = BasicSlOpinion<Scalar>::kUncertaintyMass;
  const Scalar denom = (b.beta() + b.alpha() + u) * (a.beta() + a.alpha() + u);
  const Scalar kappa =
      Scalar(1) - (a.alpha() * b.alpha() + a.alpha() * b.beta()) / denom;
  if (!(kappa > Scalar(0)))
    throw std::domain_error("SL discount normaliser is not positive");
  const Scalar scale = u / (kappa * denom);
  return {a.alpha() * b.alpha() * scale, a.alpha() * b.beta() * scale,
          b.base_rate()};
}

/// Projected probability b + a * u.
template <typename Scalar>
double sl_expected_belief(const BasicSlOpinion<Scalar>& op) {
  return static_cast<double>(op.belief() + op.base_rate() * op.uncertainty());
}

} // namespace trustcalc
