#pragma once

// Mapping from opinions to scalar trust values: the certainty factor of the
// collapsed Beta density and the expected belief built on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "trustcalc/detail/quadrature.hpp"
#include "trustcalc/opinion.hpp"

namespace trustcalc {

inline constexpr double kCertaintyTolerance = 1e-8;

namespace detail {

// Beta(alpha + 1, beta + 1) log-density; zero evidence gives the uniform pdf.
class ShiftedBetaLogPdf {
public:
  ShiftedBetaLogPdf(double alpha, double beta)
      : a_(alpha), b_(beta),
        log_norm_(std::lgamma(alpha + 1) + std::lgamma(beta + 1) -
                  std::lgamma(alpha + beta + 2)) {}

  double operator()(double x) const {
    double v = -log_norm_;
    if (a_ != 0.0)
      v += a_ * std::log(x);
    if (b_ != 0.0)
      v += b_ * std::log1p(-x);
    return v;
  }

  double mode() const { return a_ + b_ > 0 ? a_ / (a_ + b_) : 0.5; }

private:
  double a_, b_, log_norm_;
};

// Root of a monotone log-density segment crossing zero between lo and hi.
inline double bisect_unit_crossing(const ShiftedBetaLogPdf& logpdf, double lo,
                                   double hi) {
  const bool rising = logpdf(lo) < logpdf(hi);
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((logpdf(mid) < 0.0) == rising)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace detail

/// Certainty factor: half the L1 distance between the Beta(alpha+1, beta+1)
/// density and the uniform density on [0, 1]. Zero for no certain evidence,
/// approaching one as evidence accumulates.
///
/// Integrated adaptively after splitting [0, 1] at the mode and at the
/// points where the density crosses 1, so every piece is smooth.
template <typename Scalar>
double certainty(const BasicCollapsedOpinion<Scalar>& op) {
  const double alpha = static_cast<double>(op.alpha);
  const double beta = static_cast<double>(op.beta);
  if (alpha == 0.0 && beta == 0.0)
    return 0.0;

  const detail::ShiftedBetaLogPdf logpdf(alpha, beta);
  std::vector<double> cuts{0.0, 1.0};
  const double mode = logpdf.mode();
  if (mode > 0.0 && mode < 1.0)
    cuts.push_back(mode);
  // Log-density is concave, so it crosses zero at most once on each side of
  // the mode.
  constexpr double kEdge = 1e-300;
  if (mode > 0.0 && logpdf(kEdge) < 0.0)
    cuts.push_back(detail::bisect_unit_crossing(logpdf, 0.0, mode));
  if (mode < 1.0 && logpdf(1.0 - 1e-16) < 0.0)
    cuts.push_back(detail::bisect_unit_crossing(logpdf, mode, 1.0));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto integrand = [&](double x) {
    return std::abs(std::exp(logpdf(x)) - 1.0);
  };
  const double piece_tol = kCertaintyTolerance / double(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += detail::integrate_adaptive(integrand, cuts[i], cuts[i + 1],
                                        piece_tol);
  return std::clamp(0.5 * total, 0.0, 1.0);
}

/// Expected belief E = r * c + a * (1 - c), where r is the share of positive
/// evidence among certain evidence, c the certainty factor of the collapsed
/// opinion and a the base rate. Uncertain evidence does not enter.
template <typename Scalar>
double expected_belief(const BasicOpinion<Scalar>& op) {
  const auto collapsed = collapse(op);
  const double a = static_cast<double>(op.base_rate());
  const double certain = static_cast<double>(collapsed.alpha + collapsed.beta);
  if (certain == 0.0)
    return a;
  const double r = static_cast<double>(collapsed.alpha) / certain;
  const double c = certainty(collapsed);
  return std::clamp(r * c + a * (1.0 - c), 0.0, 1.0);
}

} // namespace trustcalc
