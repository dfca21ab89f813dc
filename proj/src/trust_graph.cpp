#include "trustcalc/trust_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <deque>
#include <istream>
#include <map>
#include <ostream>

#include "trustcalc/level_scale.hpp"

namespace trustcalc {

namespace {

void sort_by_peer(std::vector<Adjacent>& list) {
  std::sort(list.begin(), list.end(),
            [](const Adjacent& a, const Adjacent& b) { return a.peer < b.peer; });
}

const Adjacent* find_peer(std::span<const Adjacent> list, NodeId peer) {
  auto it = std::lower_bound(
      list.begin(), list.end(), peer,
      [](const Adjacent& a, NodeId p) { return a.peer < p; });
  return it != list.end() && it->peer == peer ? &*it : nullptr;
}

bool same_opinions(std::span<const Adjacent> a, std::span<const Adjacent> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Adjacent& x, const Adjacent& y) {
                      return x.peer == y.peer && x.opinion == y.opinion;
                    });
}

} // namespace

TrustGraph TrustGraph::from_edges(std::span<const Edge> edges,
                                  std::span<const std::string> extra_nodes) {
  std::vector<std::string> names(extra_nodes.begin(), extra_nodes.end());
  names.reserve(names.size() + 2 * edges.size());
  for (const auto& e : edges) {
    if (e.src == e.dst)
      throw std::invalid_argument("self-loop on node '" + e.src + "'");
    names.push_back(e.src);
    names.push_back(e.dst);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  TrustGraph g;
  g.names_ = std::move(names);
  g.index_.reserve(g.names_.size());
  for (NodeId i = 0; i < g.names_.size(); ++i)
    g.index_.emplace(g.names_[i], i);
  g.in_.resize(g.names_.size());
  g.out_.resize(g.names_.size());
  for (const auto& e : edges) {
    const NodeId s = g.index_.at(e.src);
    const NodeId d = g.index_.at(e.dst);
    g.out_[s].push_back({d, e.opinion});
    g.in_[d].push_back({s, e.opinion});
  }
  for (NodeId v = 0; v < g.names_.size(); ++v) {
    sort_by_peer(g.out_[v]);
    sort_by_peer(g.in_[v]);
    for (std::size_t i = 1; i < g.out_[v].size(); ++i) {
      if (g.out_[v][i].peer == g.out_[v][i - 1].peer)
        throw std::invalid_argument("duplicate edge '" + g.names_[v] + "' -> '" +
                                    g.names_[g.out_[v][i].peer] + "'");
    }
  }
  g.num_edges_ = edges.size();
  return g;
}

std::optional<NodeId> TrustGraph::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

NodeId TrustGraph::id(std::string_view name) const {
  if (auto v = find(name))
    return *v;
  throw std::out_of_range("unknown node '" + std::string(name) + "'");
}

std::optional<Opinion> TrustGraph::edge(NodeId src, NodeId dst) const {
  if (const Adjacent* a = find_peer(out_edges(src), dst))
    return a->opinion;
  return std::nullopt;
}

std::vector<TrustGraph::Edge> TrustGraph::edges() const {
  std::vector<Edge> result;
  result.reserve(num_edges_);
  for (NodeId s = 0; s < names_.size(); ++s)
    for (const auto& a : out_[s])
      result.push_back({names_[s], names_[a.peer], a.opinion});
  return result;
}

TrustGraph TrustGraph::without_edge(std::string_view src,
                                    std::string_view dst) const {
  const auto s = find(src);
  const auto d = find(dst);
  if (!s || !d || !has_edge(*s, *d))
    throw std::invalid_argument("no edge '" + std::string(src) + "' -> '" +
                                std::string(dst) + "'");
  TrustGraph g = *this;
  auto drop = [](std::vector<Adjacent>& list, NodeId peer) {
    list.erase(std::find_if(list.begin(), list.end(),
                            [peer](const Adjacent& a) { return a.peer == peer; }));
  };
  drop(g.out_[*s], *d);
  drop(g.in_[*d], *s);
  --g.num_edges_;
  return g;
}

TrustGraph TrustGraph::with_edge(std::string_view src, std::string_view dst,
                                 const Opinion& opinion) const {
  if (src == dst)
    throw std::invalid_argument("self-loop on node '" + std::string(src) + "'");
  const auto s = find(src);
  const auto d = find(dst);
  if (!s || !d) {
    auto all = edges();
    all.push_back({std::string(src), std::string(dst), opinion});
    return from_edges(all, names_);
  }
  TrustGraph g = *this;
  auto upsert = [&opinion](std::vector<Adjacent>& list, NodeId peer) {
    auto it = std::lower_bound(
        list.begin(), list.end(), peer,
        [](const Adjacent& a, NodeId p) { return a.peer < p; });
    if (it != list.end() && it->peer == peer) {
      it->opinion = opinion;
      return false;
    }
    list.insert(it, {peer, opinion});
    return true;
  };
  upsert(g.in_[*d], *s);
  if (upsert(g.out_[*s], *d))
    ++g.num_edges_;
  return g;
}

bool operator==(const TrustGraph& a, const TrustGraph& b) {
  if (a.names_ != b.names_ || a.num_edges_ != b.num_edges_)
    return false;
  for (NodeId v = 0; v < a.names_.size(); ++v) {
    if (!same_opinions(a.out_[v], b.out_[v]) || !same_opinions(a.in_[v], b.in_[v]))
      return false;
  }
  return true;
}

TrustGraph remove_edge(const TrustGraph& g, std::string_view src,
                       std::string_view dst) {
  return g.without_edge(src, dst);
}

bool path_exists(const TrustGraph& g, NodeId src, NodeId dst,
                 std::size_t max_hops, std::optional<EdgeKey> hidden) {
  if (src == dst)
    throw std::invalid_argument("path query needs distinct endpoints");
  std::vector<std::size_t> hops(g.num_nodes(), SIZE_MAX);
  std::deque<NodeId> queue{src};
  hops[src] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (hops[u] == max_hops)
      continue;
    for (const auto& a : g.out_edges(u)) {
      if (hidden && hidden->src == u && hidden->dst == a.peer)
        continue;
      if (hops[a.peer] != SIZE_MAX)
        continue;
      if (a.peer == dst)
        return true;
      hops[a.peer] = hops[u] + 1;
      queue.push_back(a.peer);
    }
  }
  return false;
}

bool path_exists(const TrustGraph& g, std::string_view src,
                 std::string_view dst, std::size_t max_hops) {
  return path_exists(g, g.id(src), g.id(dst), max_hops);
}

GraphStats graph_stats(const TrustGraph& g) {
  GraphStats s;
  s.num_nodes = g.num_nodes();
  s.num_edges = g.num_edges();
  if (s.num_nodes == 0)
    return s;
  s.mean_out_degree = double(s.num_edges) / double(s.num_nodes);
  s.avg_degree = 2.0 * s.mean_out_degree;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    s.max_in_degree = std::max(s.max_in_degree, g.in_edges(v).size());
    s.max_out_degree = std::max(s.max_out_degree, g.out_edges(v).size());
  }
  return s;
}

// ---------------------------------------------------------------------------

std::optional<EvidenceStyle> parse_evidence_style(std::string_view text) {
  if (text == "positive-negative" || text == "advogato")
    return EvidenceStyle::PositiveNegative;
  if (text == "positive-uncertain" || text == "pgp")
    return EvidenceStyle::PositiveUncertain;
  return std::nullopt;
}

std::string_view to_string(EvidenceStyle style) {
  return style == EvidenceStyle::PositiveNegative ? "positive-negative"
                                                  : "positive-uncertain";
}

Opinion opinion_for_fraction(double fraction, EvidenceStyle style,
                             double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("total evidence lambda must be positive");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("level fraction must lie in [0, 1]");
  const double positive = lambda * fraction;
  const double rest = lambda * (1.0 - fraction);
  return style == EvidenceStyle::PositiveNegative
             ? Opinion(positive, rest, 0.0)
             : Opinion(positive, 0.0, rest);
}

bool EdgeRecords::has_level_records() const {
  return std::any_of(records.begin(), records.end(),
                     [](const EdgeRecord& r) { return r.level.has_value(); });
}

bool EdgeRecords::has_opinion_records() const {
  return std::any_of(records.begin(), records.end(),
                     [](const EdgeRecord& r) { return r.opinion.has_value(); });
}

std::vector<std::size_t> EdgeRecords::level_counts() const {
  std::vector<std::size_t> counts(num_levels, 0);
  for (const auto& r : records)
    if (r.level)
      ++counts.at(*r.level);
  return counts;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos)
      break;
    start = tab + 1;
  }
  return fields;
}

double parse_number(std::string_view text, std::size_t line, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(text) + "'");
  return value;
}

std::optional<std::size_t> parse_level_token(std::string_view token,
                                             std::span<const std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == token)
      return i;
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
  if (ec == std::errc{} && ptr == token.data() + token.size() && index < names.size())
    return index;
  return std::nullopt;
}

} // namespace

EdgeRecords read_edge_records(std::istream& in,
                              std::span<const std::string> level_names) {
  EdgeRecords out;
  out.num_levels = level_names.size();
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty() || line.front() == '#')
      continue;
    const auto fields = split_tabs(line);
    EdgeRecord rec;
    rec.line = line_no;
    if (fields.size() != 3 && fields.size() != 5 && fields.size() != 6)
      throw ParseError(line_no, "expected 3, 5 or 6 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    if (fields[0].empty() || fields[1].empty())
      throw ParseError(line_no, "empty node id");
    rec.src = fields[0];
    rec.dst = fields[1];
    if (fields.size() == 3) {
      rec.level = parse_level_token(fields[2], level_names);
      if (!rec.level)
        throw ParseError(line_no, "unknown trust level '" + std::string(fields[2]) + "'");
    } else {
      const double a = parse_number(fields[2], line_no, "alpha");
      const double b = parse_number(fields[3], line_no, "beta");
      const double c = parse_number(fields[4], line_no, "gamma");
      const double rate = fields.size() == 6
                              ? parse_number(fields[5], line_no, "base rate")
                              : Opinion::kDefaultBaseRate;
      try {
        rec.opinion = Opinion(a, b, c, rate);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

LoadResult build_graph(const EdgeRecords& records, const LevelScale& scale,
                       EvidenceStyle style, double lambda) {
  LoadResult result;
  std::map<std::pair<std::string, std::string>, Opinion> edges;
  for (const auto& r : records.records) {
    if (r.src == r.dst) {
      ++result.self_loops;
      continue;
    }
    Opinion op;
    if (r.level) {
      if (*r.level >= scale.size())
        throw ParseError(r.line, "level index outside the scale");
      op = opinion_for_fraction(scale.fractions[*r.level], style, lambda);
    } else {
      op = *r.opinion;
    }
    auto [it, inserted] = edges.insert_or_assign({r.src, r.dst}, op);
    if (!inserted)
      ++result.duplicate_edges;
  }
  std::vector<TrustGraph::Edge> list;
  list.reserve(edges.size());
  for (auto& [key, op] : edges)
    list.push_back({key.first, key.second, op});
  result.graph = TrustGraph::from_edges(list);
  return result;
}

LoadResult load_edge_list(std::istream& in, const LevelScale& scale,
                          EvidenceStyle style, double lambda) {
  return build_graph(read_edge_records(in, scale.level_names), scale, style,
                     lambda);
}

void write_edge_list(std::ostream& out, const TrustGraph& g) {
  char buf[256];
  out << "# src\tdst\talpha\tbeta\tgamma\tbase_rate\n";
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "\t%.17g\t%.17g\t%.17g\t%.17g\n",
                  e.opinion.alpha(), e.opinion.beta(), e.opinion.gamma(),
                  e.opinion.base_rate());
    out << e.src << '\t' << e.dst << buf;
  }
}

} // namespace trustcalc
