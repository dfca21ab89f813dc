#include "trustcalc/baselines.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace trustcalc {

double positive_fraction(const Opinion& op) {
  const double total = op.total();
  return total > 0.0 ? op.alpha() / total : 0.0;
}

namespace {

bool is_hidden(const std::optional<EdgeKey>& hidden, NodeId src, NodeId dst) {
  return hidden && hidden->src == src && hidden->dst == dst;
}

} // namespace

double tidal_trust(const TrustGraph& g, NodeId source, NodeId sink,
                   const TidalTrustOptions& options) {
  if (source == sink)
    throw std::invalid_argument("TidalTrust needs distinct source and sink");
  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

  // Breadth-first levels out to the horizon.
  std::vector<std::size_t> level(g.num_nodes(), kUnseen);
  std::vector<std::vector<NodeId>> layers{{source}};
  level[source] = 0;
  while (level[sink] == kUnseen && layers.size() <= options.max_depth &&
         !layers.back().empty()) {
    std::vector<NodeId> next;
    for (NodeId u : layers.back())
      for (const auto& a : g.out_edges(u)) {
        if (level[a.peer] != kUnseen || is_hidden(options.hidden, u, a.peer))
          continue;
        level[a.peer] = layers.size();
        next.push_back(a.peer);
      }
    layers.push_back(std::move(next));
  }
  if (level[sink] == kUnseen)
    throw std::domain_error("unreachable");
  const std::size_t depth = level[sink];

  // Successors on shortest paths that still lead to the sink.
  auto on_layer_dag = [&](NodeId u, NodeId v) {
    return level[v] == level[u] + 1 && (level[v] < depth || v == sink) &&
           !is_hidden(options.hidden, u, v);
  };
  std::vector<char> reaches(g.num_nodes(), 0);
  reaches[sink] = 1;
  for (std::size_t l = depth; l-- > 0;)
    for (NodeId u : layers[l])
      for (const auto& a : g.out_edges(u))
        if (on_layer_dag(u, a.peer) && reaches[a.peer])
          reaches[u] = 1;

  // Strongest bottleneck over source -> sink paths.
  std::vector<double> strength(g.num_nodes(), -1.0);
  strength[source] = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < depth; ++l)
    for (NodeId u : layers[l]) {
      if (!reaches[u])
        continue;
      for (const auto& a : g.out_edges(u))
        if (on_layer_dag(u, a.peer) && reaches[a.peer])
          strength[a.peer] = std::max(
              strength[a.peer], std::min(strength[u], options.edge_value(a.opinion)));
    }
  const double threshold = strength[sink];

  std::vector<double> trust(g.num_nodes(), -1.0);
  for (std::size_t l = depth; l-- > 0;)
    for (NodeId u : layers[l]) {
      if (!reaches[u])
        continue;
      if (auto direct = g.edge(u, sink); direct && l + 1 == depth &&
                                         !is_hidden(options.hidden, u, sink)) {
        trust[u] = options.edge_value(*direct);
        continue;
      }
      double weighted = 0.0, weights = 0.0;
      bool any = false;
      for (const auto& a : g.out_edges(u)) {
        if (!on_layer_dag(u, a.peer) || trust[a.peer] < 0.0)
          continue;
        const double w = options.edge_value(a.opinion);
        if (w < threshold)
          continue;
        weighted += w * trust[a.peer];
        weights += w;
        any = true;
      }
      if (any)
        trust[u] = weights > 0.0 ? weighted / weights : 0.0;
    }
  return std::clamp(trust[source], 0.0, 1.0);
}

double tidal_trust(const TrustGraph& g, std::string_view source,
                   std::string_view sink, const TidalTrustOptions& options) {
  return tidal_trust(g, g.id(source), g.id(sink), options);
}

RankScores personalized_rank(const TrustGraph& g, const Eigen::VectorXd& teleport,
                             const PowerIterationOptions& options) {
  const auto n = Eigen::Index(g.num_nodes());
  if (n == 0)
    throw std::invalid_argument("ranking needs a nonempty graph");
  if (teleport.size() != n || (teleport.array() < 0.0).any() || !(teleport.sum() > 0.0))
    throw std::invalid_argument("teleport vector must be nonnegative with positive mass");
  if (!(options.damping > 0.0 && options.damping < 1.0))
    throw std::invalid_argument("damping must lie in (0, 1)");
  const Eigen::VectorXd p = teleport / teleport.sum();

  // Column-stochastic transpose of the row-normalised trust matrix.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(g.num_edges());
  Eigen::VectorXd dangling = Eigen::VectorXd::Zero(n);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    double row_sum = 0.0;
    for (const auto& a : g.out_edges(u))
      if (!is_hidden(options.hidden, u, a.peer))
        row_sum += options.edge_value(a.opinion);
    if (row_sum <= 0.0) {
      dangling[u] = 1.0;
      continue;
    }
    for (const auto& a : g.out_edges(u))
      if (!is_hidden(options.hidden, u, a.peer))
        entries.emplace_back(a.peer, u, options.edge_value(a.opinion) / row_sum);
  }
  Eigen::SparseMatrix<double> transition(n, n);
  transition.setFromTriplets(entries.begin(), entries.end());

  RankScores result;
  Eigen::VectorXd t = p;
  const double d = options.damping;
  while (result.iterations < options.max_iterations) {
    const double dangling_mass = dangling.dot(t);
    Eigen::VectorXd next = (1.0 - d) * p + d * (transition * t + dangling_mass * p);
    const double change = (next - t).lpNorm<1>();
    t = std::move(next);
    ++result.iterations;
    result.residuals.push_back(change);
    if (change <= options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = t / t.sum();
  return result;
}

RankScores eigen_trust(const TrustGraph& g, const std::vector<NodeId>& pretrusted,
                       const PowerIterationOptions& options) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(Eigen::Index(g.num_nodes()));
  if (pretrusted.empty())
    p.setOnes();
  for (NodeId v : pretrusted) {
    if (v >= g.num_nodes())
      throw std::out_of_range("pretrusted node outside the graph");
    p[Eigen::Index(v)] = 1.0;
  }
  return personalized_rank(g, p, options);
}

RankScores trust_rank(const TrustGraph& g, const std::vector<NodeId>& seeds,
                      const PowerIterationOptions& options) {
  if (seeds.empty())
    throw std::invalid_argument("TrustRank needs at least one seed");
  return eigen_trust(g, seeds, options);
}

} // namespace trustcalc
