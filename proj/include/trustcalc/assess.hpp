#pragma once

// Recursive trust assessment between two users of a trust graph.
//
// Starting at the trustee, every incoming edge c -> trustee contributes one
// branch: the edge opinion itself when c is the trustor, otherwise the edge
// opinion discounted by the trustor's (recursively assessed) opinion on c.
// Branches are combined. Each recursive call works on the graph with the
// current trustee removed together with all its edges, which breaks cycles,
// and with the remaining depth reduced by one. An exhausted depth yields the
// vacuous opinion.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trustcalc/opinion.hpp"
#include "trustcalc/sl_opinion.hpp"
#include "trustcalc/trust_graph.hpp"

namespace trustcalc {

inline constexpr int kDefaultSearchDepth = 3;

struct AssessQuery {
  std::string trustor;
  std::string trustee;
  int depth = kDefaultSearchDepth; // maximum number of hops searched
};

/// Parse tree of an assessment. Leaves are edge opinions or the vacuous
/// opinion of an exhausted branch; inner nodes apply discount (two
/// children: distorting, original) or combine (any number of children).
struct ExprNode {
  enum class Kind { Edge, Vacuous, Discount, Combine };

  Kind kind = Kind::Vacuous;
  std::string src; // Edge leaves only
  std::string dst;
  Opinion opinion; // Edge leaves only
  std::vector<ExprNode> children;
};

Opinion evaluate(const ExprNode& node);

/// Renders a tree as nested D(...)/C(...) with `src>dst` leaves and `0` for
/// vacuous leaves.
std::string to_string(const ExprNode& node);

struct AssessTrace {
  struct Invocation {
    std::string trustor;
    std::string trustee;
    int depth;
    std::optional<std::size_t> parent; // index of the calling invocation
  };

  std::vector<Invocation> invocations; // in call order
  ExprNode tree;

  /// Number of invocations on the chain from the root down to entry `i`.
  std::size_t chain_length(std::size_t i) const;
};

/// Indirect opinion of the trustor on the trustee. Throws std::out_of_range
/// for an unknown node and std::invalid_argument when trustor == trustee.
/// `hidden` marks one edge as absent without copying the graph.
Opinion assess(const TrustGraph& g, const AssessQuery& q,
               std::optional<EdgeKey> hidden = {});

std::pair<Opinion, AssessTrace> assess_with_trace(const TrustGraph& g,
                                                  const AssessQuery& q);

/// SL* variant: same search, with edge opinions reduced to SL opinions and
/// the SL discount/combine operators.
SlOpinion assess_sl(const TrustGraph& g, const AssessQuery& q,
                    std::optional<EdgeKey> hidden = {});

/// Independent reference evaluation for small graphs (at most
/// kOracleMaxNodes nodes): applies the series/parallel reduction on explicit
/// adjacency-matrix copies, with no pruning. Throws std::invalid_argument for
/// larger graphs.
inline constexpr std::size_t kOracleMaxNodes = 12;
Opinion oracle_assess(const TrustGraph& g, const AssessQuery& q);

} // namespace trustcalc
