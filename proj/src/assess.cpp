#include "trustcalc/assess.hpp"

#include <stdexcept>

namespace trustcalc {

namespace {

struct ThreeValuedAlgebra {
  using Value = Opinion;
  static Value from_edge(const Opinion& op) { return op; }
  static Value vacuous() { return Opinion::vacuous(); }
  static Value discount(const Value& d, const Value& o) { return trustcalc::discount(d, o); }
  static Value combine(std::span<const Value> ops) { return combine_many(ops); }
  // A zero-evidence branch is the identity of combine.
  static bool negligible(const Value& v) { return v.total() == 0.0; }
};

struct SubjectiveLogicAlgebra {
  using Value = SlOpinion;
  static Value from_edge(const Opinion& op) { return SlOpinion::from_opinion(op); }
  static Value vacuous() { return SlOpinion{}; }
  static Value discount(const Value& d, const Value& o) { return sl_discount(d, o); }
  static Value combine(std::span<const Value> ops) {
    Value acc = ops.front();
    for (const auto& op : ops.subspan(1))
      acc = sl_combine(acc, op);
    return acc;
  }
  static bool negligible(const Value&) { return false; }
};

ExprNode edge_leaf(const TrustGraph& g, NodeId src, NodeId dst, const Opinion& op) {
  ExprNode n;
  n.kind = ExprNode::Kind::Edge;
  n.src = g.name(src);
  n.dst = g.name(dst);
  n.opinion = op;
  return n;
}

template <class Algebra>
class Search {
public:
  using Value = typename Algebra::Value;

  Search(const TrustGraph& g, NodeId trustor, std::optional<EdgeKey> hidden,
         AssessTrace* trace)
      : g_(g), trustor_(trustor), hidden_(hidden), trace_(trace),
        removed_(g.num_nodes(), 0) {}

  // `node` receives the parse tree when tracing.
  Value run(NodeId trustee, int depth, ExprNode* node,
            std::optional<std::size_t> parent) {
    if (depth <= 0)
      return Algebra::vacuous();

    std::optional<std::size_t> self;
    if (trace_) {
      self = trace_->invocations.size();
      trace_->invocations.push_back(
          {g_.name(trustor_), g_.name(trustee), depth, parent});
    }

    removed_[trustee] = 1;
    std::vector<Value> branches;
    std::vector<ExprNode> subtrees;
    for (const auto& [c, edge_op] : g_.in_edges(trustee)) {
      if (removed_[c] || (hidden_ && hidden_->src == c && hidden_->dst == trustee))
        continue;
      Value branch;
      ExprNode subtree;
      if (c == trustor_) {
        branch = Algebra::from_edge(edge_op);
        if (node)
          subtree = edge_leaf(g_, c, trustee, edge_op);
      } else {
        ExprNode distorting_tree;
        const Value distorting =
            depth > 1 ? run(c, depth - 1, node ? &distorting_tree : nullptr, self)
                      : Algebra::vacuous();
        branch = Algebra::discount(distorting, Algebra::from_edge(edge_op));
        if (node) {
          subtree.kind = ExprNode::Kind::Discount;
          subtree.children.push_back(std::move(distorting_tree));
          subtree.children.push_back(edge_leaf(g_, c, trustee, edge_op));
        }
      }
      if (Algebra::negligible(branch))
        continue;
      branches.push_back(branch);
      if (node)
        subtrees.push_back(std::move(subtree));
    }
    removed_[trustee] = 0;

    if (branches.empty()) {
      if (node)
        *node = ExprNode{};
      return Algebra::vacuous();
    }
    if (branches.size() == 1) {
      if (node)
        *node = std::move(subtrees.front());
      return branches.front();
    }
    if (node) {
      node->kind = ExprNode::Kind::Combine;
      node->children = std::move(subtrees);
    }
    return Algebra::combine(branches);
  }

private:
  const TrustGraph& g_;
  NodeId trustor_;
  std::optional<EdgeKey> hidden_;
  AssessTrace* trace_;
  std::vector<char> removed_;
};

std::pair<NodeId, NodeId> resolve(const TrustGraph& g, const AssessQuery& q) {
  const NodeId trustor = g.id(q.trustor);
  const NodeId trustee = g.id(q.trustee);
  if (trustor == trustee)
    throw std::invalid_argument("trustor and trustee must differ");
  return {trustor, trustee};
}

} // namespace

Opinion evaluate(const ExprNode& node) {
  switch (node.kind) {
  case ExprNode::Kind::Edge:
    return node.opinion;
  case ExprNode::Kind::Vacuous:
    return Opinion::vacuous();
  case ExprNode::Kind::Discount:
    return discount(evaluate(node.children.at(0)), evaluate(node.children.at(1)));
  case ExprNode::Kind::Combine: {
    std::vector<Opinion> parts;
    parts.reserve(node.children.size());
    for (const auto& child : node.children)
      parts.push_back(evaluate(child));
    return combine_many<double>(parts);
  }
  }
  throw std::logic_error("bad expression node");
}

std::string to_string(const ExprNode& node) {
  switch (node.kind) {
  case ExprNode::Kind::Edge:
    return node.src + ">" + node.dst;
  case ExprNode::Kind::Vacuous:
    return "0";
  case ExprNode::Kind::Discount:
  case ExprNode::Kind::Combine: {
    std::string s = node.kind == ExprNode::Kind::Discount ? "D(" : "C(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i)
        s += ',';
      s += to_string(node.children[i]);
    }
    return s + ')';
  }
  }
  return {};
}

std::size_t AssessTrace::chain_length(std::size_t i) const {
  std::size_t length = 1;
  for (auto p = invocations.at(i).parent; p; p = invocations.at(*p).parent)
    ++length;
  return length;
}

Opinion assess(const TrustGraph& g, const AssessQuery& q,
               std::optional<EdgeKey> hidden) {
  const auto [trustor, trustee] = resolve(g, q);
  Search<ThreeValuedAlgebra> search(g, trustor, hidden, nullptr);
  return search.run(trustee, q.depth, nullptr, std::nullopt);
}

std::pair<Opinion, AssessTrace> assess_with_trace(const TrustGraph& g,
                                                  const AssessQuery& q) {
  const auto [trustor, trustee] = resolve(g, q);
  AssessTrace trace;
  Search<ThreeValuedAlgebra> search(g, trustor, std::nullopt, &trace);
  Opinion result = search.run(trustee, q.depth, &trace.tree, std::nullopt);
  return {result, std::move(trace)};
}

SlOpinion assess_sl(const TrustGraph& g, const AssessQuery& q,
                    std::optional<EdgeKey> hidden) {
  const auto [trustor, trustee] = resolve(g, q);
  Search<SubjectiveLogicAlgebra> search(g, trustor, hidden, nullptr);
  return search.run(trustee, q.depth, nullptr, std::nullopt);
}

} // namespace trustcalc
