// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any gating criterion fails. Criterion 8 needs the real
// datasets (TRUSTCALC_ADVOGATO_TSV, TRUSTCALC_PGP_TSV) and never gates.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "trustcalc/assess.hpp"
#include "trustcalc/belief.hpp"
#include "trustcalc/experiments.hpp"
#include "trustcalc/level_scale.hpp"
#include "trustcalc/metrics.hpp"
#include "trustcalc/sl_opinion.hpp"
#include "trustcalc/synthetic.hpp"
#include "trustcalc/trust_graph.hpp"

using namespace trustcalc;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass)
        detail = what;
      pass = false;
    }
  }
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass)
    ++failures;
}

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

bool close(const Opinion& a, const Opinion& b, double tol) {
  return (a.evidence() - b.evidence()).cwiseAbs().maxCoeff() <= tol;
}

Opinion random_opinion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ev(0.0, 20.0), br(0.0, 1.0);
  const double a = ev(rng), b = ev(rng), g = ev(rng);
  return {a, b, g, br(rng)};
}

TrustGraph load_opinion_fixture(const std::string& name) {
  std::ifstream in(std::string(TRUSTCALC_FIXTURE_DIR) + "/" + name);
  if (!in)
    throw std::runtime_error("missing fixture " + name);
  return load_edge_list(in, {}, EvidenceStyle::PositiveNegative, 1.0).graph;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 -------------------------------------------------------------------------

Outcome worked_example() {
  Outcome o;
  const auto start = Clock::now();
  const Opinion ac = discount(Opinion(5, 3, 2), Opinion(4, 4, 2));
  const SlOpinion sl = sl_discount(SlOpinion(5, 3), SlOpinion(4, 4));
  const double elapsed = seconds_since(start);
  o.require(ac.alpha() == 2 && ac.beta() == 2 && ac.gamma() == 6, "3VSL discount is not <2,2,6>");
  o.require(std::abs(sl.alpha() - 2.0 / 3) <= 1e-12 && std::abs(sl.beta() - 2.0 / 3) <= 1e-12,
            "SL discount is not <2/3,2/3>");
  o.require(elapsed < 1e-3, "took " + fmt("%.3g", elapsed) + " s");
  if (o.pass)
    o.detail = "<2,2,6> exact, SL <2/3,2/3> within 1e-12, " + fmt("%.2g", elapsed * 1e6) + " us";
  return o;
}

// 2 -------------------------------------------------------------------------

Outcome algebraic_properties() {
  Outcome o;
  constexpr double tol = 1e-9;
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 1000; ++i) {
    const Opinion a = random_opinion(rng), b = random_opinion(rng), c = random_opinion(rng);
    const Opinion d = discount(a, b);
    o.require(std::abs(d.total() - b.total()) <= tol, "conservation");
    o.require(d.alpha() <= b.alpha() && d.beta() <= b.beta() && d.gamma() >= b.gamma() - tol,
              "decay");
    o.require(close(discount(discount(a, b), c), discount(a, discount(b, c)), tol),
              "discount associativity");
    o.require(close(combine(a, b), combine(b, a), tol), "combine commutativity");
    o.require(close(combine(combine(a, b), c), combine(a, combine(b, c)), tol),
              "combine associativity");
    o.require(close(combine(discount(a, b), discount(a, c)), discount(a, combine(b, c)), tol),
              "distributivity over a shared distorting opinion");
  }
  const Opinion w1(5, 3, 2), w2(4, 4, 2), wbc(6, 1, 3);
  const Opinion split = combine(discount(w1, wbc), discount(w2, wbc));
  const Opinion merged = discount(combine(w1, w2), wbc);
  o.require(!close(split, merged, 1e-3), "combined distorting opinions unexpectedly distribute");
  const double elapsed = seconds_since(start);
  o.require(elapsed < 1.0, "took " + fmt("%.3g", elapsed) + " s");
  if (o.pass)
    o.detail = "1000 random triples within 1e-9, non-distributive witness holds, " +
               fmt("%.3g", elapsed) + " s";
  return o;
}

// 3 -------------------------------------------------------------------------

TrustGraph random_dag(std::mt19937_64& rng, int n) {
  std::bernoulli_distribution has(0.5);
  std::vector<TrustGraph::Edge> edges;
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back("n" + std::to_string(i));
    for (int j = i + 1; j < n; ++j)
      if (has(rng))
        edges.push_back({"n" + std::to_string(i), "n" + std::to_string(j), random_opinion(rng)});
  }
  return TrustGraph::from_edges(edges, nodes);
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> size(3, 8), depth(1, 8);
  for (int t = 0; t < 50; ++t) {
    const int n = size(rng);
    const TrustGraph g = random_dag(rng, n);
    const AssessQuery q{"n0", "n" + std::to_string(n - 1), depth(rng)};
    o.require(close(assess(g, q), oracle_assess(g, q), 1e-9),
              "random DAG " + std::to_string(t) + " differs from the oracle");
  }
  for (const char* name : {"bridge.tsv", "cyclic_bridge.tsv"}) {
    const TrustGraph g = load_opinion_fixture(name);
    for (int h = 1; h <= 4; ++h)
      o.require(close(assess(g, {"A", "D", h}), oracle_assess(g, {"A", "D", h}), 1e-9),
                std::string(name) + " differs from the oracle");
  }
  const auto trace = assess_with_trace(load_opinion_fixture("bridge.tsv"), {"A", "D", 3}).second;
  o.require(trace.invocations.size() == 4,
            "bridge trace has " + std::to_string(trace.invocations.size()) + " invocations");
  const double elapsed = seconds_since(start);
  o.require(elapsed < 10.0, "took " + fmt("%.3g", elapsed) + " s");
  if (o.pass)
    o.detail = "50 DAGs + bridge + cyclic bridge within 1e-9, bridge trace 4 calls, " +
               fmt("%.3g", elapsed) + " s";
  return o;
}

// 4 -------------------------------------------------------------------------

Outcome bridge_formula() {
  Outcome o;
  const TrustGraph g = load_opinion_fixture("bridge.tsv");
  const auto w = [&](const char* s, const char* d) { return *g.edge(g.id(s), g.id(d)); };
  const Opinion expected = combine(discount(w("A", "B"), w("B", "D")),
                                   discount(combine(discount(w("A", "B"), w("B", "C")), w("A", "C")),
                                            w("C", "D")));
  const Opinion got = assess(g, {"A", "D", 3});
  const double diff = (got.evidence() - expected.evidence()).cwiseAbs().maxCoeff();
  o.require(diff <= 1e-12, "max difference " + fmt("%.3g", diff));
  if (o.pass)
    o.detail = "max difference " + fmt("%.3g", diff);
  return o;
}

// 5 -------------------------------------------------------------------------

double midpoint_certainty(double alpha, double beta) {
  constexpr int points = 1'000'000;
  const double log_norm =
      std::lgamma(alpha + beta + 2) - std::lgamma(alpha + 1) - std::lgamma(beta + 1);
  long double sum = 0;
  for (int i = 0; i < points; ++i) {
    const double x = (i + 0.5) / points;
    sum += std::abs(std::exp(log_norm + alpha * std::log(x) + beta * std::log1p(-x)) - 1.0);
  }
  return double(0.5L * sum / points);
}

Outcome certainty_numerics() {
  Outcome o;
  const std::array<std::pair<double, double>, 20> grid{{
      {0, 1}, {1, 0}, {1, 1}, {2, 2}, {0.5, 0.5}, {3, 1}, {1, 3}, {5, 3}, {2, 6}, {10, 0},
      {0, 10}, {10, 10}, {30, 5}, {7.5, 2.5}, {0.1, 4}, {50, 50}, {100, 20}, {27, 3}, {9, 21},
      {200, 1},
  }};
  double worst = 0;
  for (const auto& [a, b] : grid)
    worst = std::max(worst, std::abs(certainty(CollapsedOpinion{a, b}) - midpoint_certainty(a, b)));
  o.require(worst <= 1e-6, "worst quadrature deviation " + fmt("%.3g", worst));
  o.require(expected_belief(Opinion(0, 0, 7, 0.5)) == 0.5, "E(<0,0,g>) is not exactly 0.5");
  const double e = expected_belief(Opinion(9000, 1000, 0, 0.5));
  o.require(std::abs(e - 0.9) <= 0.01, "E(<9000,1000,0>) = " + fmt("%.6g", e));
  if (o.pass)
    o.detail = "worst deviation " + fmt("%.2g", worst) + " on 20 cases, E(<9000,1000,0>) = " +
               fmt("%.6f", e);
  return o;
}

// 6 -------------------------------------------------------------------------

TrustGraph complete_digraph(int n) {
  std::mt19937_64 rng{std::uint64_t(n)};
  std::vector<TrustGraph::Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        edges.push_back({"v" + std::to_string(i), "v" + std::to_string(j), random_opinion(rng)});
  return TrustGraph::from_edges(edges);
}

// Seconds per query: best of several batches, each at least ~20 ms long.
double time_per_query(const TrustGraph& g, const AssessQuery& q) {
  std::size_t reps = 1;
  for (;;) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < reps; ++i)
      (void)assess(g, q);
    if (seconds_since(start) > 0.02)
      break;
    reps *= 2;
  }
  double best = INFINITY;
  for (int batch = 0; batch < 7; ++batch) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < reps; ++i)
      (void)assess(g, q);
    best = std::min(best, seconds_since(start) / double(reps));
  }
  return best;
}

Outcome depth_and_complexity() {
  Outcome o;
  for (int n = 4; n <= 8; ++n) {
    const TrustGraph g = complete_digraph(n);
    for (int h = 1; h <= 3; ++h)
      for (NodeId s = 0; s < g.num_nodes(); ++s)
        for (NodeId t = 0; t < g.num_nodes(); ++t) {
          if (s == t)
            continue;
          const auto trace = assess_with_trace(g, {g.name(s), g.name(t), h}).second;
          for (std::size_t i = 0; i < trace.invocations.size(); ++i)
            o.require(trace.chain_length(i) <= std::size_t(h),
                      "trace deeper than H on n=" + std::to_string(n));
        }
  }
  constexpr int h = 3;
  double c = 0;
  std::string ratios;
  for (int n = 4; n <= 8; ++n) {
    const TrustGraph g = complete_digraph(n);
    const double t = time_per_query(g, {"v0", "v1", h});
    const double cubic = double(n) * n * n;
    if (n == 4)
      c = t / cubic;
    const double ratio = t / (c * cubic);
    ratios += (ratios.empty() ? "" : " ") + std::to_string(n) + ":" + fmt("%.2f", ratio);
    o.require(ratio <= 4.0, "n=" + std::to_string(n) + " runs at " + fmt("%.2f", ratio) +
                                "x the cubic fit");
  }
  if (o.pass)
    o.detail = "all traces within H; time / (c n^3) = " + ratios;
  else
    o.detail += " (" + ratios + ")";
  return o;
}

// 7 -------------------------------------------------------------------------

// Mean and sample standard deviation evaluated in 50-digit binary floating
// point on the exact values of the double inputs, then rounded.
NormalFit reference_fit(const std::vector<double>& xs) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  Big sum = 0;
  for (double x : xs)
    sum += Big(x);
  const Big mean = sum / Big(xs.size());
  Big ss = 0;
  for (double x : xs)
    ss += (Big(x) - mean) * (Big(x) - mean);
  return {static_cast<double>(mean), static_cast<double>(sqrt(ss / Big(xs.size() - 1)))};
}

Outcome harness_identities() {
  Outcome o;
  const std::vector<std::size_t> truth{0, 1, 2, 3, 2, 1, 0, 3};
  const ConfusionMatrix perfect = confusion_matrix(truth, truth, 4);
  o.require(f1_micro(perfect) == 1.0 && f1_macro(perfect) == 1.0, "perfect predictions F1 != 1");

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> level(0, 3);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::size_t> x(50), y(50);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < 50; ++i) {
      x[i] = level(rng);
      y[i] = level(rng);
      hits += x[i] == y[i];
    }
    o.require(std::abs(f1_micro(confusion_matrix(x, y, 4)) - double(hits) / 50) <= 1e-15,
              "micro F1 differs from accuracy");
  }

  const std::vector<double> a{1, 2, 3, 4}, rev{4, 3, 2, 1};
  o.require(kendall_tau_b(a, a) == 1.0, "tau(x, x) != 1");
  o.require(kendall_tau_b(a, rev) == -1.0, "tau(x, reverse x) != -1");

  const std::vector<std::vector<double>> cases{{0, 0, 0}, {-1, 1}, {0.1, 0.2, 0.3}};
  const std::vector<std::pair<double, double>> hand{{0, 0}, {0, std::sqrt(2.0)}, {0.2, 0.1}};
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const NormalFit got = fit_error_distribution(cases[i]);
    const NormalFit ref = reference_fit(cases[i]);
    o.require(got.mean == ref.mean && got.stddev == ref.stddev,
              "fit case " + std::to_string(i) + " is not correctly rounded");
    // The decimal hand values agree with the correctly rounded results to
    // within one unit in the last place.
    o.require(std::abs(got.mean - hand[i].first) <=
                      std::nextafter(std::abs(hand[i].first), INFINITY) - std::abs(hand[i].first) &&
                  std::abs(got.stddev - hand[i].second) <=
                      std::nextafter(hand[i].second, INFINITY) - hand[i].second,
              "fit case " + std::to_string(i) + " differs from the hand value");
  }
  if (o.pass)
    o.detail = "F1 = 1, micro = accuracy on 100 matrices, tau endpoints, fits correctly rounded";
  return o;
}

// 8 -------------------------------------------------------------------------

void dataset_reproduction() {
  const std::array<std::pair<const char*, EvidenceStyle>, 2> sets{{
      {"TRUSTCALC_ADVOGATO_TSV", EvidenceStyle::PositiveNegative},
      {"TRUSTCALC_PGP_TSV", EvidenceStyle::PositiveUncertain},
  }};
  bool any = false;
  for (const auto& [var, style] : sets) {
    const char* path = std::getenv(var);
    if (!path)
      continue;
    any = true;
    try {
      std::ifstream in(path);
      if (!in)
        throw std::runtime_error(std::string("cannot read ") + path);
      const EdgeRecords records = read_edge_records(in, advogato_level_names());
      const bool pn = style == EvidenceStyle::PositiveNegative;
      double f1[3] = {0, 0, 0}, certain_median[2] = {0, 0};
      const Algorithm algos[3] = {Algorithm::AssessTrust, Algorithm::SlStar,
                                  Algorithm::TidalTrust};
      for (int k = 0; k < 3; ++k) {
        const double base = k == 2 ? (pn ? 0.2 : 0.1) : (pn ? 0.3 : 0.1);
        const LevelScale scale = build_scale(records.level_counts(), base);
        const TrustGraph g = build_graph(records, scale, style, 30).graph;
        ExperimentConfig cfg;
        cfg.algorithm = algos[k];
        cfg.base_level = base;
        const EvalReport r = run_f1_experiment(g, scale, cfg);
        f1[k] = r.f1_micro;
        if (k < 2) {
          std::vector<double> ce;
          for (const auto& p : r.pairs)
            ce.push_back(p.certain_evidence.value_or(0));
          std::nth_element(ce.begin(), ce.begin() + long(ce.size() / 2), ce.end());
          certain_median[k] = ce[ce.size() / 2];
        }
      }
      std::printf("[INFO] 8 %s: F1 micro 3vsl %.3f, sl %.3f, tidal %.3f; median certain "
                  "evidence 3vsl %.3g, sl %.3g; soft expectation 3vsl > sl: %s\n",
                  var, f1[0], f1[1], f1[2], certain_median[0], certain_median[1],
                  f1[0] > f1[1] ? "met" : "not met");
    } catch (const std::exception& e) {
      std::printf("[INFO] 8 %s: could not run (%s)\n", var, e.what());
    }
  }
  if (!any)
    std::printf("[SKIP] 8 dataset reproduction: not gating; set TRUSTCALC_ADVOGATO_TSV "
                "and/or TRUSTCALC_PGP_TSV to run it\n");
  std::fflush(stdout);
}

// 9 -------------------------------------------------------------------------

Outcome synthetic_end_to_end() {
  Outcome o;
  SyntheticGraphOptions opts;
  opts.num_nodes = 500;
  const EdgeRecords records = generate_level_graph(opts);
  const LevelScale scale = build_scale(records.level_counts(), 0.3);
  const TrustGraph g = build_graph(records, scale, EvidenceStyle::PositiveNegative, 30).graph;
  ExperimentConfig cfg;
  cfg.num_pairs = 50;
  cfg.depth = 3;
  std::string dumps[2];
  double worst = 0;
  for (auto& dump : dumps) {
    const auto start = Clock::now();
    dump = to_json(run_f1_experiment(g, scale, cfg)).dump();
    worst = std::max(worst, seconds_since(start));
  }
  o.require(worst < 60.0, "took " + fmt("%.3g", worst) + " s");
  o.require(dumps[0] == dumps[1], "reports differ between runs");
  if (o.pass)
    o.detail = std::to_string(g.num_nodes()) + " nodes, " + std::to_string(g.num_edges()) +
               " edges, 50 pairs, " + fmt("%.3g", worst) + " s per run, identical JSON";
  return o;
}

} // namespace

int main() {
  report(1, "worked-example exactness", guarded(worked_example));
  report(2, "algebraic property suite", guarded(algebraic_properties));
  report(3, "oracle equivalence", guarded(oracle_equivalence));
  report(4, "bridge formula", guarded(bridge_formula));
  report(5, "certainty and expected-belief numerics", guarded(certainty_numerics));
  report(6, "depth bound and complexity smoke test", guarded(depth_and_complexity));
  report(7, "evaluation-harness identities", guarded(harness_identities));
  dataset_reproduction();
  report(9, "synthetic end-to-end smoke", guarded(synthetic_end_to_end));
  std::printf("%d gating criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
