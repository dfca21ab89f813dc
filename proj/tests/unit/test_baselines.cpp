#include <random>
#include <vector>

#include "support.hpp"
#include "trustcalc/baselines.hpp"

using namespace trustcalc;
using doctest::Approx;

namespace {

// Edge whose positive fraction is exactly r.
Opinion valued(double r) { return Opinion(10 * r, 10 * (1 - r), 0); }

TrustGraph graph_of(const std::vector<TrustGraph::Edge>& edges) {
  return TrustGraph::from_edges(edges);
}

} // namespace

TEST_CASE("TidalTrust on small topologies") {
  CHECK(tidal_trust(graph_of({{"s", "t", valued(0.7)}}), "s", "t") == Approx(0.7));
  CHECK(tidal_trust(graph_of({{"s", "m", valued(0.8)}, {"m", "t", valued(0.5)}}), "s", "t") ==
        Approx(0.5));

  const TrustGraph parallel = graph_of({{"s", "a", valued(0.9)},
                                        {"a", "t", valued(0.9)},
                                        {"s", "b", valued(0.3)},
                                        {"b", "t", valued(0.3)}});
  CHECK(tidal_trust(parallel, "s", "t") == Approx(0.9));

  // Only shortest paths count: the direct edge wins over a stronger detour.
  const TrustGraph detour = graph_of({{"s", "t", valued(0.4)},
                                      {"s", "a", valued(1.0)},
                                      {"a", "t", valued(1.0)}});
  CHECK(tidal_trust(detour, "s", "t") == Approx(0.4));

  const TrustGraph series = graph_of({{"s", "m", valued(0.8)}, {"m", "t", valued(0.5)}});
  CHECK_THROWS_WITH_AS(tidal_trust(series, "t", "s"), "unreachable", std::domain_error);
  TidalTrustOptions one_hop;
  one_hop.max_depth = 1;
  CHECK_THROWS_AS(tidal_trust(series, "s", "t", one_hop), std::domain_error);
  TidalTrustOptions hide;
  hide.hidden = EdgeKey{series.id("m"), series.id("t")};
  CHECK_THROWS_AS(tidal_trust(series, "s", "t", hide), std::domain_error);
}

TEST_CASE("TidalTrust never exceeds the best edge value on any path") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::bernoulli_distribution has(0.35);
  for (int t = 0; t < 100; ++t) {
    std::vector<TrustGraph::Edge> edges;
    double best = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        if (i != j && has(rng)) {
          const double r = val(rng);
          edges.push_back({std::to_string(i), std::to_string(j), valued(r)});
          best = std::max(best, r);
        }
    const TrustGraph g = TrustGraph::from_edges(edges, std::vector<std::string>{"0", "6"});
    try {
      const double v = tidal_trust(g, "0", "6");
      CHECK(v >= 0.0);
      CHECK(v <= best + 1e-12);
    } catch (const std::domain_error&) {
      CHECK_FALSE(path_exists(g, "0", "6", 3));
    }
  }
}

TEST_CASE("EigenTrust two-node fixed point") {
  const TrustGraph g = graph_of({{"a", "b", valued(0.8)}});
  const RankScores s = eigen_trust(g, {});
  // t = 0.15 p + 0.85 (C^T t + t_b p) with p = (1/2, 1/2) and t_a + t_b = 1:
  // t_a = 0.075 + 0.425 t_b  =>  t_a = 0.5 / 1.425.
  const double ta = 0.5 / 1.425;
  CHECK(s.converged);
  CHECK(s[g.id("a")] == Approx(ta).epsilon(1e-9));
  CHECK(s[g.id("b")] == Approx(1 - ta).epsilon(1e-9));
  CHECK(s[g.id("b")] > s[g.id("a")]);
  CHECK(s.scores.sum() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("EigenTrust on a symmetric complete graph is uniform") {
  std::vector<TrustGraph::Edge> edges;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j)
        edges.push_back({std::to_string(i), std::to_string(j), valued(0.6)});
  const RankScores s = eigen_trust(TrustGraph::from_edges(edges), {});
  for (Eigen::Index i = 0; i < 5; ++i)
    CHECK(s.scores[i] == Approx(0.2).epsilon(1e-12));
}

TEST_CASE("zero iterations return the teleport vector") {
  const TrustGraph g = graph_of({{"a", "b", valued(0.8)}, {"b", "c", valued(0.3)}});
  PowerIterationOptions opts;
  opts.tolerance = 0;
  opts.max_iterations = 0;
  const RankScores s = eigen_trust(g, {g.id("a"), g.id("c")}, opts);
  CHECK(s.iterations == 0);
  CHECK(s[g.id("a")] == 0.5);
  CHECK(s[g.id("b")] == 0.0);
  CHECK(s[g.id("c")] == 0.5);
}

TEST_CASE("TrustRank") {
  // Star with mutual edges, seeded at the hub: t_hub = 1 / (1 + d).
  std::vector<TrustGraph::Edge> edges;
  for (int i = 0; i < 6; ++i) {
    edges.push_back({"hub", "leaf" + std::to_string(i), valued(0.7)});
    edges.push_back({"leaf" + std::to_string(i), "hub", valued(0.9)});
  }
  const TrustGraph star = TrustGraph::from_edges(edges);
  const RankScores s = trust_rank(star, {star.id("hub")});
  CHECK(s[star.id("hub")] == Approx(1 / 1.85).epsilon(1e-9));
  for (NodeId v = 0; v < star.num_nodes(); ++v)
    if (v != star.id("hub")) {
      CHECK(s[v] < s[star.id("hub")]);
      CHECK(s[v] == Approx(0.85 / 1.85 / 6).epsilon(1e-9));
    }

  CHECK_THROWS_AS(trust_rank(star, {}), std::invalid_argument);

  std::vector<NodeId> all(star.num_nodes());
  for (NodeId v = 0; v < star.num_nodes(); ++v)
    all[v] = v;
  CHECK(trust_rank(star, all).scores == eigen_trust(star, {}).scores);
}

TEST_CASE("power iteration residuals shrink and scores follow relabelling") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> val(0.05, 1.0);
  std::bernoulli_distribution has(0.3);
  for (int t = 0; t < 20; ++t) {
    std::vector<TrustGraph::Edge> edges, relabelled;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j)
        if (i != j && has(rng)) {
          const Opinion op = valued(val(rng));
          edges.push_back({"a" + std::to_string(i), "a" + std::to_string(j), op});
          // Reversing the name order permutes node ids.
          relabelled.push_back({"b" + std::to_string(8 - i), "b" + std::to_string(8 - j), op});
        }
    std::vector<std::string> nodes_a, nodes_b;
    for (int i = 0; i < 9; ++i) {
      nodes_a.push_back("a" + std::to_string(i));
      nodes_b.push_back("b" + std::to_string(8 - i));
    }
    const TrustGraph g = TrustGraph::from_edges(edges, nodes_a);
    const TrustGraph h = TrustGraph::from_edges(relabelled, nodes_b);

    const RankScores s = eigen_trust(g, {g.id("a0"), g.id("a3")});
    CHECK(s.converged);
    CHECK(s.scores.sum() == Approx(1.0).epsilon(1e-9));
    CHECK(s.scores.minCoeff() >= 0.0);
    for (std::size_t k = 1; k < s.residuals.size(); ++k)
      CHECK(s.residuals[k] <= s.residuals[k - 1] * (1 + 1e-9) + 1e-15);

    const RankScores r = eigen_trust(h, {h.id("b8"), h.id("b5")});
    for (int i = 0; i < 9; ++i)
      CHECK(s[g.id("a" + std::to_string(i))] ==
            Approx(r[h.id("b" + std::to_string(8 - i))]).epsilon(1e-12));
  }
}

TEST_CASE("positive fraction") {
  CHECK(positive_fraction(Opinion(5, 3, 2)) == 0.5);
  CHECK(positive_fraction(Opinion::vacuous()) == 0.0);
}
