#pragma once

// Comparison algorithms: TidalTrust for absolute trust between two users,
// EigenTrust and TrustRank for global relative rankings.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "trustcalc/trust_graph.hpp"

namespace trustcalc {

/// Scalar trust in [0, 1] read off an edge opinion.
using EdgeValue = std::function<double(const Opinion&)>;

/// alpha / (alpha + beta + gamma); zero for an edge without evidence.
double positive_fraction(const Opinion& op);

struct TidalTrustOptions {
  std::size_t max_depth = 3; // BFS horizon in hops
  EdgeValue edge_value = positive_fraction;
  std::optional<EdgeKey> hidden;
};

/// TidalTrust over the shortest source -> sink paths within the horizon.
///
/// The threshold is the strongest path, where a path's strength is its
/// weakest edge. Working back from the sink, a node adjacent to the sink
/// takes its direct rating; any other node averages its successors' values
/// weighted by its ratings of them, using only successors rated at or above
/// the threshold. Throws std::domain_error("unreachable") when the sink is
/// not within the horizon.
double tidal_trust(const TrustGraph& g, NodeId source, NodeId sink,
                   const TidalTrustOptions& options = {});
double tidal_trust(const TrustGraph& g, std::string_view source,
                   std::string_view sink, const TidalTrustOptions& options = {});

struct RankScores {
  Eigen::VectorXd scores; // indexed by NodeId, sums to 1
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> residuals; // L1 change per iteration

  double operator[](NodeId v) const { return scores[Eigen::Index(v)]; }
};

struct PowerIterationOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
  EdgeValue edge_value = positive_fraction;
  std::optional<EdgeKey> hidden;
};

/// Power iteration t <- (1 - d) p + d C^T t over the row-normalised local
/// trust matrix C. Rows without outgoing trust hand their mass to p. The
/// iteration starts from p and stops when the L1 change is within
/// tolerance or after max_iterations steps.
RankScores personalized_rank(const TrustGraph& g, const Eigen::VectorXd& teleport,
                             const PowerIterationOptions& options = {});

/// EigenTrust with teleport uniform over `pretrusted`; empty means every node.
RankScores eigen_trust(const TrustGraph& g, const std::vector<NodeId>& pretrusted,
                       const PowerIterationOptions& options = {});

/// TrustRank: the same iteration with teleport uniform over `seeds`. Throws
/// std::invalid_argument for an empty seed set.
RankScores trust_rank(const TrustGraph& g, const std::vector<NodeId>& seeds,
                      const PowerIterationOptions& options = {});

} // namespace trustcalc
