#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trustcalc {

inline constexpr double kHighestLevelFraction = 0.9;

/// Ordinal trust levels (lowest first) and the positive-evidence fraction
/// assigned to each.
struct LevelScale {
  std::vector<std::string> level_names;
  std::vector<double> fractions;

  std::size_t size() const { return fractions.size(); }

  /// Index of a level given by name or by integer index.
  std::optional<std::size_t> parse_level(std::string_view token) const;

  /// Level whose fraction is closest to `value`; exact midpoints go to the
  /// lower level.
  std::size_t nearest_level(double value) const;
};

/// Advogato level vocabulary, lowest first.
std::vector<std::string> advogato_level_names();

/// Names "0", "1", ... for `count` levels.
std::vector<std::string> indexed_level_names(std::size_t count);

/// Standard normal quantile function.
double normal_quantile(double p);

/// Normal-score scale construction. Each level gets the z-score of its
/// mid-rank cumulative frequency; fractions are then placed linearly in
/// z-space between `lowest_fraction` (lowest level) and `highest_fraction`
/// (highest level).
///
/// Throws std::invalid_argument for fewer than two levels, a zero count, or
/// fractions outside 0 < lowest < highest < 1.
LevelScale build_scale(std::span<const std::size_t> level_counts,
                       double lowest_fraction,
                       double highest_fraction = kHighestLevelFraction,
                       std::vector<std::string> level_names = {});

} // namespace trustcalc
