#include "trustcalc/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace trustcalc {

namespace {

// Uniform double in [0, 1) from the top 53 bits; portable across libraries.
double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return std::min<std::size_t>(std::size_t(unit(rng) * double(n)), n - 1);
}

std::size_t draw_level(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double x = unit(rng) * cumulative.back();
  return std::size_t(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                     cumulative.begin());
}

} // namespace

EdgeRecords generate_level_graph(const SyntheticGraphOptions& options) {
  const std::size_t n = options.num_nodes;
  if (n < 3)
    throw std::invalid_argument("synthetic graph needs at least three nodes");
  if (!(options.mean_out_degree >= 1.0))
    throw std::invalid_argument("mean out-degree must be at least 1");
  if (options.level_weights.size() < 2)
    throw std::invalid_argument("need at least two trust levels");
  std::vector<double> cumulative(options.level_weights.size());
  std::partial_sum(options.level_weights.begin(), options.level_weights.end(),
                   cumulative.begin());
  if (!(cumulative.back() > 0.0))
    throw std::invalid_argument("level weights must have positive mass");

  std::mt19937_64 rng(options.seed);
  std::vector<std::set<std::size_t>> out(n);
  const auto max_degree = std::size_t(2.0 * options.mean_out_degree - 1.0);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t degree = std::min(1 + below(rng, max_degree), n - 1);
    std::size_t attempts = 0;
    while (out[u].size() < degree && attempts++ < 20 * degree) {
      std::size_t v = below(rng, n);
      if (!out[u].empty() && unit(rng) < options.closure_probability) {
        auto mid = std::next(out[u].begin(), std::ptrdiff_t(below(rng, out[u].size())));
        if (!out[*mid].empty())
          v = *std::next(out[*mid].begin(), std::ptrdiff_t(below(rng, out[*mid].size())));
      }
      if (v != u)
        out[u].insert(v);
    }
  }

  char name[32];
  auto node_name = [&](std::size_t i) {
    std::snprintf(name, sizeof name, "u%04zu", i);
    return std::string(name);
  };
  EdgeRecords records;
  records.num_levels = options.level_weights.size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : out[u]) {
      EdgeRecord rec;
      rec.src = node_name(u);
      rec.dst = node_name(v);
      rec.level = draw_level(rng, cumulative);
      rec.line = records.records.size() + 1;
      records.records.push_back(std::move(rec));
    }
  // Guarantee every level is present.
  auto counts = records.level_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > 0)
      continue;
    for (auto& rec : records.records)
      if (counts[*rec.level] > 1) {
        --counts[*rec.level];
        rec.level = k;
        ++counts[k];
        break;
      }
  }
  return records;
}

void write_level_records(std::ostream& out, const EdgeRecords& records) {
  out << "# src\tdst\tlevel\n";
  for (const auto& r : records.records) {
    if (!r.level)
      throw std::invalid_argument("record without a trust level");
    out << r.src << '\t' << r.dst << '\t' << *r.level << '\n';
  }
}

} // namespace trustcalc
