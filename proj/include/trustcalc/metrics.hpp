#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace trustcalc {

/// Rows are true levels, columns predicted levels.
using ConfusionMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted,
                                 std::size_t levels);

/// Micro-averaged F1; for single-label multi-class data this is accuracy.
double f1_micro(const ConfusionMatrix& m);

/// Mean per-class F1 over classes that occur in the truth or the predictions.
double f1_macro(const ConfusionMatrix& m);

/// Kendall's tau-b. Returns 0 when either side is entirely tied. Throws
/// std::invalid_argument on length mismatch or fewer than two items.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

struct NormalFit {
  double mean = 0.0;
  double stddev = 0.0; // n - 1 denominator
};

/// Throws std::invalid_argument for fewer than two samples.
NormalFit fit_error_distribution(std::span<const double> errors);

/// Sorted distinct values with the fraction of samples <= each.
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> samples);

} // namespace trustcalc
