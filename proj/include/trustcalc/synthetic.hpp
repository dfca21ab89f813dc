#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trustcalc/trust_graph.hpp"

namespace trustcalc {

struct SyntheticGraphOptions {
  std::size_t num_nodes = 500;
  double mean_out_degree = 8.0;
  double closure_probability = 0.3; // chance a new edge closes a triangle
  std::vector<double> level_weights{0.15, 0.25, 0.35, 0.25};
  std::uint64_t seed = 1;
};

/// Random level-annotated trust graph with nodes "u0000", "u0001", ... Out
/// degrees are uniform in [1, 2 * mean - 1]; targets are random nodes or, with
/// closure_probability, a neighbour of an existing neighbour. Every level is
/// used at least once so a normal-score scale can be built from the result.
EdgeRecords generate_level_graph(const SyntheticGraphOptions& options);

/// Writes `src dst level` lines using integer level indices.
void write_level_records(std::ostream& out, const EdgeRecords& records);

} // namespace trustcalc
