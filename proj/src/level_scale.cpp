#include "trustcalc/level_scale.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace trustcalc {

std::optional<std::size_t> LevelScale::parse_level(std::string_view token) const {
  for (std::size_t i = 0; i < level_names.size(); ++i)
    if (level_names[i] == token)
      return i;
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
  if (ec == std::errc{} && ptr == token.data() + token.size() && index < size())
    return index;
  return std::nullopt;
}

std::size_t LevelScale::nearest_level(double value) const {
  if (fractions.empty())
    throw std::logic_error("empty level scale");
  std::size_t best = 0;
  double best_dist = std::abs(value - fractions[0]);
  for (std::size_t k = 1; k < fractions.size(); ++k) {
    const double d = std::abs(value - fractions[k]);
    if (d < best_dist) { // strict: ties stay with the lower level
      best = k;
      best_dist = d;
    }
  }
  return best;
}

std::vector<std::string> advogato_level_names() {
  return {"observer", "apprentice", "journeyer", "master"};
}

std::vector<std::string> indexed_level_names(std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    names.push_back(std::to_string(i));
  return names;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0)
      return -INFINITY;
    if (p == 1.0)
      return INFINITY;
    throw std::domain_error("normal quantile needs p in [0, 1]");
  }
  // 1 - p is exact here; refining in the lower tail keeps full precision.
  if (p > 0.5)
    return -normal_quantile(1.0 - p);
  // Acklam's rational approximation (relative error ~1e-9) followed by one
  // Halley step against erfc, which brings it to full double precision.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

LevelScale build_scale(std::span<const std::size_t> level_counts,
                       double lowest_fraction, double highest_fraction,
                       std::vector<std::string> level_names) {
  const std::size_t levels = level_counts.size();
  if (levels < 2)
    throw std::invalid_argument("a level scale needs at least two levels");
  if (std::find(level_counts.begin(), level_counts.end(), 0u) != level_counts.end())
    throw std::invalid_argument("every trust level needs a positive count");
  if (!(lowest_fraction > 0.0 && lowest_fraction < highest_fraction &&
        highest_fraction < 1.0))
    throw std::invalid_argument("need 0 < lowest fraction < highest fraction < 1");
  if (level_names.empty())
    level_names = indexed_level_names(levels);
  if (level_names.size() != levels)
    throw std::invalid_argument("level name count does not match level counts");

  const double n = double(std::accumulate(level_counts.begin(), level_counts.end(),
                                          std::size_t{0}));
  std::vector<double> z(levels);
  double below = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    z[k] = normal_quantile((below + 0.5 * double(level_counts[k])) / n);
    below += double(level_counts[k]);
  }
  for (std::size_t k = 1; k < levels; ++k)
    if (!(z[k] > z[k - 1]))
      throw std::invalid_argument("normal scores are not strictly increasing");

  LevelScale scale;
  scale.level_names = std::move(level_names);
  scale.fractions.resize(levels);
  const double span_z = z.back() - z.front();
  for (std::size_t k = 0; k < levels; ++k)
    scale.fractions[k] = lowest_fraction +
                         (z[k] - z.front()) / span_z * (highest_fraction - lowest_fraction);
  scale.fractions.front() = lowest_fraction;
  scale.fractions.back() = highest_fraction;
  return scale;
}

} // namespace trustcalc
