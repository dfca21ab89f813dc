#include <stdexcept>

#include "trustcalc/assess.hpp"

namespace trustcalc {

namespace {

using DenseGraph = std::vector<std::vector<std::optional<Opinion>>>;

// ω_AC over `g` with at most `depth` hops. Takes the graph by value: every
// sub-problem owns its own copy.
Opinion reduce(DenseGraph g, std::size_t trustor, std::size_t trustee, int depth) {
  if (depth <= 0)
    return Opinion::vacuous();

  DenseGraph without_trustee = g;
  for (std::size_t i = 0; i < g.size(); ++i) {
    without_trustee[i][trustee].reset();
    without_trustee[trustee][i].reset();
  }

  std::vector<Opinion> branches;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!g[c][trustee])
      continue;
    if (c == trustor)
      branches.push_back(*g[c][trustee]);
    else
      branches.push_back(
          discount(reduce(without_trustee, trustor, c, depth - 1), *g[c][trustee]));
  }

  if (branches.empty())
    return Opinion::vacuous();
  Opinion acc = branches.front();
  for (std::size_t i = 1; i < branches.size(); ++i)
    acc = combine(acc, branches[i]);
  return acc;
}

} // namespace

Opinion oracle_assess(const TrustGraph& g, const AssessQuery& q) {
  if (g.num_nodes() > kOracleMaxNodes)
    throw std::invalid_argument("oracle_assess is limited to " +
                                std::to_string(kOracleMaxNodes) + " nodes");
  const NodeId trustor = g.id(q.trustor);
  const NodeId trustee = g.id(q.trustee);
  if (trustor == trustee)
    throw std::invalid_argument("trustor and trustee must differ");

  DenseGraph dense(g.num_nodes(), std::vector<std::optional<Opinion>>(g.num_nodes()));
  for (NodeId s = 0; s < g.num_nodes(); ++s)
    for (const auto& a : g.out_edges(s))
      dense[s][a.peer] = a.opinion;
  return reduce(std::move(dense), trustor, trustee, q.depth);
}

} // namespace trustcalc
