#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trustcalc/opinion.hpp"

namespace trustcalc {

/// Dense node index. Indices follow the lexicographic order of node names,
/// so iterating adjacency lists by index visits neighbours in name order.
using NodeId = std::uint32_t;

/// One endpoint plus the opinion on the edge. In `in_edges(v)` the peer is
/// the source; in `out_edges(v)` it is the target.
struct Adjacent {
  NodeId peer;
  Opinion opinion;
};

struct EdgeKey {
  NodeId src;
  NodeId dst;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

/// Directed trust graph with one opinion per ordered pair and no self-loops.
/// Immutable once built; edits return new graphs.
class TrustGraph {
public:
  struct Edge {
    std::string src;
    std::string dst;
    Opinion opinion;
  };

  TrustGraph() = default;

  /// Builds a graph from distinct, non-loop edges. `extra_nodes` adds
  /// isolated nodes. Throws std::invalid_argument on a self-loop or a
  /// repeated (src, dst) pair.
  static TrustGraph from_edges(std::span<const Edge> edges,
                               std::span<const std::string> extra_nodes = {});

  std::size_t num_nodes() const { return names_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  std::optional<NodeId> find(std::string_view name) const;
  /// Throws std::out_of_range naming the node when it is absent.
  NodeId id(std::string_view name) const;
  const std::string& name(NodeId v) const { return names_.at(v); }
  std::span<const std::string> names() const { return names_; }

  std::span<const Adjacent> in_edges(NodeId v) const { return in_.at(v); }
  std::span<const Adjacent> out_edges(NodeId v) const { return out_.at(v); }

  std::optional<Opinion> edge(NodeId src, NodeId dst) const;
  bool has_edge(NodeId src, NodeId dst) const { return edge(src, dst).has_value(); }

  /// All edges ordered by (source name, target name).
  std::vector<Edge> edges() const;

  TrustGraph without_edge(std::string_view src, std::string_view dst) const;
  /// Adds or replaces an edge; unknown endpoints become new nodes.
  TrustGraph with_edge(std::string_view src, std::string_view dst,
                       const Opinion& opinion) const;

  friend bool operator==(const TrustGraph& a, const TrustGraph& b);

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<Adjacent>> in_;
  std::vector<std::vector<Adjacent>> out_;
  std::size_t num_edges_ = 0;
};

/// Returns a copy of `g` without the edge src -> dst. Throws
/// std::invalid_argument if the edge does not exist.
TrustGraph remove_edge(const TrustGraph& g, std::string_view src,
                       std::string_view dst);

/// True iff a directed path src -> dst of at most `max_hops` edges exists.
/// `hidden` is treated as absent, which lets leave-one-out callers skip
/// copying the graph.
bool path_exists(const TrustGraph& g, NodeId src, NodeId dst,
                 std::size_t max_hops, std::optional<EdgeKey> hidden = {});
bool path_exists(const TrustGraph& g, std::string_view src,
                 std::string_view dst, std::size_t max_hops);

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  double mean_out_degree = 0.0; // |E| / |V|
  double avg_degree = 0.0;      // 2 |E| / |V|, in + out
  std::size_t max_in_degree = 0;
  std::size_t max_out_degree = 0;
};

GraphStats graph_stats(const TrustGraph& g);

// ---------------------------------------------------------------------------
// Edge-list files

/// Line-oriented TSV error. `line` is 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// How a level fraction r becomes evidence for a total of lambda.
enum class EvidenceStyle {
  PositiveNegative,  // <lambda r, lambda (1 - r), 0>, Advogato-like
  PositiveUncertain, // <lambda r, 0, lambda (1 - r)>, PGP-like
};

std::optional<EvidenceStyle> parse_evidence_style(std::string_view text);
std::string_view to_string(EvidenceStyle style);

Opinion opinion_for_fraction(double fraction, EvidenceStyle style,
                             double lambda);

struct LevelScale; // level_scale.hpp

/// One parsed data line: either an ordinal trust level or explicit evidence.
struct EdgeRecord {
  std::string src;
  std::string dst;
  std::optional<std::size_t> level;
  std::optional<Opinion> opinion;
  std::size_t line = 0;
};

struct EdgeRecords {
  std::vector<EdgeRecord> records;
  std::size_t num_levels = 0; // width of the level vocabulary used to parse
  bool has_level_records() const;
  bool has_opinion_records() const;
  /// Edge count per level, indexed 0..num_levels-1.
  std::vector<std::size_t> level_counts() const;
};

/// Parses a TSV edge list. Data lines are `src dst level` (level is one of
/// `level_names` or an integer index below its size) or
/// `src dst alpha beta gamma [base_rate]`. Blank lines and lines starting
/// with '#' are skipped; CRLF is accepted.
EdgeRecords read_edge_records(std::istream& in,
                              std::span<const std::string> level_names);

struct LoadResult {
  TrustGraph graph;
  std::size_t duplicate_edges = 0; // later lines replaced earlier ones
  std::size_t self_loops = 0;      // dropped
};

/// Builds a graph from parsed records. Level records become
/// opinion_for_fraction(scale.fractions[level], style, lambda) with base
/// rate 0.5; explicit-opinion records are used as-is.
LoadResult build_graph(const EdgeRecords& records, const LevelScale& scale,
                       EvidenceStyle style, double lambda);

LoadResult load_edge_list(std::istream& in, const LevelScale& scale,
                          EvidenceStyle style, double lambda);

/// Writes `src dst alpha beta gamma base_rate` lines with round-trip
/// precision, in canonical edge order.
void write_edge_list(std::ostream& out, const TrustGraph& g);

} // namespace trustcalc
