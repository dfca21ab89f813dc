#pragma once

// Three-valued opinions: evidence triples over {positive, negative, uncertain}
// with a base rate, plus the discounting and combining algebra on them.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace trustcalc {

/// Opinion held by a trustor about a trustee, stored as the evidence vector
/// (alpha, beta, gamma) = (positive, negative, uncertain) and a base rate.
///
/// Evidence is real-valued: discounting produces fractional counts. The
/// all-zero evidence vector is the vacuous opinion returned when a search
/// runs out of depth.
template <typename Scalar>
class BasicOpinion {
public:
  using Evidence = Eigen::Matrix<Scalar, 3, 1>;

  static constexpr Scalar kDefaultBaseRate = Scalar(0.5);

  BasicOpinion() = default;

  BasicOpinion(Scalar alpha, Scalar beta, Scalar gamma,
               Scalar base_rate = kDefaultBaseRate)
      : BasicOpinion(Evidence(alpha, beta, gamma), base_rate) {}

  explicit BasicOpinion(const Evidence& evidence,
                        Scalar base_rate = kDefaultBaseRate)
      : evidence_(evidence), base_rate_(base_rate) {
    for (Eigen::Index i = 0; i < 3; ++i) {
      if (!std::isfinite(evidence_[i]) || evidence_[i] < Scalar(0))
        throw std::invalid_argument("opinion evidence must be finite and >= 0");
    }
    if (!(base_rate_ >= Scalar(0) && base_rate_ <= Scalar(1)))
      throw std::invalid_argument("opinion base rate must lie in [0, 1]");
  }

  static BasicOpinion vacuous(Scalar base_rate = kDefaultBaseRate) {
    return BasicOpinion(Evidence::Zero(), base_rate);
  }

  Scalar alpha() const { return evidence_[0]; }
  Scalar beta() const { return evidence_[1]; }
  Scalar gamma() const { return evidence_[2]; }
  Scalar base_rate() const { return base_rate_; }
  const Evidence& evidence() const { return evidence_; }

  Scalar total() const { return evidence_.sum(); }
  Scalar certain_evidence() const { return evidence_[0] + evidence_[1]; }
  bool is_vacuous() const { return total() == Scalar(0); }

  friend bool operator==(const BasicOpinion& a, const BasicOpinion& b) {
    return a.evidence_ == b.evidence_ && a.base_rate_ == b.base_rate_;
  }

private:
  Evidence evidence_ = Evidence::Zero();
  Scalar base_rate_ = kDefaultBaseRate;
};

using Opinion = BasicOpinion<double>;

/// Opinion with the uncertain component dropped; the parameters of the Beta
/// density used to compute an expected belief.
template <typename Scalar>
struct BasicCollapsedOpinion {
  Scalar alpha = 0;
  Scalar beta = 0;
  Scalar base_rate = BasicOpinion<Scalar>::kDefaultBaseRate;
};

using CollapsedOpinion = BasicCollapsedOpinion<double>;

/// Posterior predictive probabilities of the positive, negative and
/// uncertain outcomes, i.e. evidence / total.
template <typename Scalar>
typename BasicOpinion<Scalar>::Evidence
expected_probabilities(const BasicOpinion<Scalar>& op) {
  const Scalar total = op.total();
  if (!(total > Scalar(0)))
    throw std::domain_error("undefined distribution: opinion has no evidence");
  return op.evidence() / total;
}

/// Propagates `original` (B's opinion on C) through `distorting` (A's
/// opinion on B). Certain evidence in the original is kept in proportion
/// alpha_d / total_d; the remainder moves into the uncertain component, so
/// the total evidence of the result equals that of the original.
///
/// A distorting opinion without evidence turns the whole original into
/// uncertainty. The result keeps the original's base rate.
template <typename Scalar>
BasicOpinion<Scalar> discount(const BasicOpinion<Scalar>& distorting,
                              const BasicOpinion<Scalar>& original) {
  using Evidence = typename BasicOpinion<Scalar>::Evidence;
  const Scalar total_d = distorting.total();
  const Scalar total_o = original.total();
  if (total_d == Scalar(0))
    return BasicOpinion<Scalar>(Evidence(0, 0, total_o), original.base_rate());

  const Scalar keep = distorting.alpha() / total_d;
  const Scalar lost = (distorting.beta() + distorting.gamma()) / total_d;
  return BasicOpinion<Scalar>(
      Evidence(keep * original.alpha(), keep * original.beta(),
               lost * total_o + keep * original.gamma()),
      original.base_rate());
}

/// Fuses two independent opinions on the same trustee: evidence adds up,
/// base rates are averaged.
template <typename Scalar>
BasicOpinion<Scalar> combine(const BasicOpinion<Scalar>& a,
                             const BasicOpinion<Scalar>& b) {
  return BasicOpinion<Scalar>(a.evidence() + b.evidence(),
                              (a.base_rate() + b.base_rate()) / Scalar(2));
}

/// N-ary combine. Evidence is summed in the given order; the base rate is the
/// mean over all operands so the result does not depend on operand order.
template <typename Scalar>
BasicOpinion<Scalar> combine_many(std::span<const BasicOpinion<Scalar>> ops) {
  if (ops.empty())
    throw std::invalid_argument("combine_many needs at least one opinion");
  typename BasicOpinion<Scalar>::Evidence sum = ops.front().evidence();
  Scalar base_rate_sum = ops.front().base_rate();
  for (const auto& op : ops.subspan(1)) {
    sum += op.evidence();
    base_rate_sum += op.base_rate();
  }
  return BasicOpinion<Scalar>(sum, base_rate_sum / Scalar(ops.size()));
}

template <typename Scalar>
BasicCollapsedOpinion<Scalar> collapse(const BasicOpinion<Scalar>& op) {
  return {op.alpha(), op.beta(), op.base_rate()};
}

} // namespace trustcalc
