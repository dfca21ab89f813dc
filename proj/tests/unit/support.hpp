#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include <doctest.h>

#include "trustcalc/level_scale.hpp"
#include "trustcalc/opinion.hpp"
#include "trustcalc/trust_graph.hpp"

namespace testing {

inline std::string fixture(const std::string& name) {
  return std::string(TRUSTCALC_FIXTURE_DIR) + "/" + name;
}

inline trustcalc::TrustGraph load_fixture(const std::string& name) {
  std::ifstream in(fixture(name));
  REQUIRE(in.good());
  return trustcalc::load_edge_list(in, {}, trustcalc::EvidenceStyle::PositiveNegative, 1.0)
      .graph;
}

// Evidence in [0, 20) per component, base rate in [0, 1].
inline trustcalc::Opinion random_opinion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ev(0.0, 20.0), br(0.0, 1.0);
  const double a = ev(rng), b = ev(rng), g = ev(rng);
  return {a, b, g, br(rng)};
}

// Same, but with strictly positive total so ratios are defined.
inline trustcalc::Opinion random_nonvacuous_opinion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ev(0.0, 20.0), br(0.0, 1.0);
  const double a = ev(rng), b = ev(rng), g = ev(rng) + 1e-3;
  return {a, b, g, br(rng)};
}

inline void check_evidence_close(const trustcalc::Opinion& x, const trustcalc::Opinion& y,
                                 double tol) {
  CHECK(std::abs(x.alpha() - y.alpha()) <= tol);
  CHECK(std::abs(x.beta() - y.beta()) <= tol);
  CHECK(std::abs(x.gamma() - y.gamma()) <= tol);
}

// Certainty factor by the composite midpoint rule: 1/2 * integral over [0,1]
// of |Beta(alpha+1, beta+1) pdf - 1|.
inline double midpoint_certainty(double alpha, double beta, int points = 1'000'000) {
  const double log_norm =
      std::lgamma(alpha + beta + 2) - std::lgamma(alpha + 1) - std::lgamma(beta + 1);
  const double h = 1.0 / points;
  long double sum = 0;
  for (int i = 0; i < points; ++i) {
    const double x = (i + 0.5) * h;
    const double pdf = std::exp(log_norm + alpha * std::log(x) + beta * std::log1p(-x));
    sum += std::abs(pdf - 1.0);
  }
  return double(0.5L * sum * h);
}

} // namespace testing
