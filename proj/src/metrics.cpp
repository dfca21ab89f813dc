#include "trustcalc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trustcalc {

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted,
                                 std::size_t levels) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("truth and prediction lengths differ");
  ConfusionMatrix m = ConfusionMatrix::Zero(Eigen::Index(levels), Eigen::Index(levels));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= levels || predicted[i] >= levels)
      throw std::out_of_range("level outside the confusion matrix");
    ++m(Eigen::Index(truth[i]), Eigen::Index(predicted[i]));
  }
  return m;
}

double f1_micro(const ConfusionMatrix& m) {
  const long total = m.sum();
  if (total == 0)
    throw std::invalid_argument("F1 of an empty confusion matrix");
  // Pooled TP = trace; pooled FP = pooled FN = total - trace.
  return double(m.trace()) / double(total);
}

double f1_macro(const ConfusionMatrix& m) {
  double sum = 0.0;
  std::size_t classes = 0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const double tp = double(m(k, k));
    const double support = double(m.row(k).sum());
    const double predicted = double(m.col(k).sum());
    if (support == 0.0 && predicted == 0.0)
      continue;
    ++classes;
    // F1 = 2TP / (2TP + FP + FN) = 2TP / (support + predicted).
    sum += 2.0 * tp / (support + predicted);
  }
  if (classes == 0)
    throw std::invalid_argument("F1 of an empty confusion matrix");
  return sum / double(classes);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("tau needs equally long rankings");
  if (x.size() < 2)
    throw std::invalid_argument("tau needs at least two items");
  long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0)
        continue;
      if (dx == 0.0)
        ++tied_x;
      else if (dy == 0.0)
        ++tied_y;
      else if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  const double n_x = double(concordant + discordant + tied_y); // pairs untied in x
  const double n_y = double(concordant + discordant + tied_x); // pairs untied in y
  if (n_x == 0.0 || n_y == 0.0)
    return 0.0;
  return double(concordant - discordant) / std::sqrt(n_x * n_y);
}

NormalFit fit_error_distribution(std::span<const double> errors) {
  if (errors.size() < 2)
    throw std::invalid_argument("fitting a normal needs at least two samples");
  const Eigen::Map<const Eigen::VectorXd> e(errors.data(), Eigen::Index(errors.size()));
  NormalFit fit;
  fit.mean = e.mean();
  fit.mean += (e.array() - fit.mean).sum() / double(errors.size()); // rounding correction
  fit.stddev = std::sqrt((e.array() - fit.mean).square().sum() / double(errors.size() - 1));
  return fit;
}

std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = double(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i])
      cdf.emplace_back(sorted[i], double(i + 1) / n);
  return cdf;
}

} // namespace trustcalc
