#include "trustcalc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "trustcalc/assess.hpp"
#include "trustcalc/baselines.hpp"
#include "trustcalc/belief.hpp"

namespace trustcalc {

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "3vsl" || text == "at" || text == "assesstrust")
    return Algorithm::AssessTrust;
  if (text == "sl" || text == "slstar" || text == "sl*")
    return Algorithm::SlStar;
  if (text == "tidal" || text == "tt" || text == "tidaltrust")
    return Algorithm::TidalTrust;
  if (text == "eigentrust" || text == "et")
    return Algorithm::EigenTrust;
  if (text == "trustrank" || text == "tr")
    return Algorithm::TrustRank;
  return std::nullopt;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
  case Algorithm::AssessTrust: return "3vsl";
  case Algorithm::SlStar: return "sl";
  case Algorithm::TidalTrust: return "tidal";
  case Algorithm::EigenTrust: return "eigentrust";
  case Algorithm::TrustRank: return "trustrank";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (!(lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  if (!(base_level > 0.0 && base_level < kHighestLevelFraction))
    throw std::invalid_argument("base level must lie in (0, 0.9)");
  if (depth < 1)
    throw std::invalid_argument("search depth must be at least 1");
  if (num_pairs < 1)
    throw std::invalid_argument("need at least one pair");
  if (num_ranking_seeds < 1)
    throw std::invalid_argument("need at least one ranking seed");
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("TRUSTCALC_JOBS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0)
      return std::size_t(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Portable bounded draw; std::uniform_int_distribution differs between
// standard libraries and would break cross-platform reproducibility.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit)
      return x % n;
  }
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index writes its
// own output slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  jobs = std::clamp<std::size_t>(jobs == 0 ? default_jobs() : jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
              error = std::current_exception();
          }
        }
      });
  }
  if (error)
    std::rethrow_exception(error);
}

struct Prediction {
  double value;
  std::optional<double> certain_evidence;
};

Prediction predict(const TrustGraph& g, NodeId u, NodeId v, const ExperimentConfig& cfg) {
  const EdgeKey hidden{u, v};
  const AssessQuery query{g.name(u), g.name(v), cfg.depth};
  switch (cfg.algorithm) {
  case Algorithm::AssessTrust: {
    const Opinion op = assess(g, query, hidden);
    return {expected_belief(op), op.certain_evidence()};
  }
  case Algorithm::SlStar: {
    const SlOpinion op = assess_sl(g, query, hidden);
    return {sl_expected_belief(op), op.certain_evidence()};
  }
  case Algorithm::TidalTrust: {
    TidalTrustOptions options;
    options.max_depth = std::size_t(cfg.depth);
    options.hidden = hidden;
    return {tidal_trust(g, u, v, options), std::nullopt};
  }
  case Algorithm::EigenTrust: {
    PowerIterationOptions options;
    options.hidden = hidden;
    return {eigen_trust(g, {}, options)[v], std::nullopt};
  }
  case Algorithm::TrustRank: {
    PowerIterationOptions options;
    options.hidden = hidden;
    return {trust_rank(g, {u}, options)[v], std::nullopt};
  }
  }
  throw std::logic_error("unknown algorithm");
}

bool has_alternative_path(const TrustGraph& g, NodeId u, NodeId v, int depth) {
  return path_exists(g, u, v, std::size_t(depth), EdgeKey{u, v});
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

EvalReport run_f1_experiment(const TrustGraph& g, const LevelScale& scale,
                             const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.algorithm == Algorithm::EigenTrust || cfg.algorithm == Algorithm::TrustRank)
    throw std::invalid_argument("F1 experiment needs an absolute-trust algorithm "
                                "(3vsl, sl or tidal)");
  if (scale.size() < 2)
    throw std::invalid_argument("F1 experiment needs a level scale");
  const auto start = std::chrono::steady_clock::now();

  std::vector<EdgeKey> candidates;
  candidates.reserve(g.num_edges());
  for (NodeId s = 0; s < g.num_nodes(); ++s)
    for (const auto& a : g.out_edges(s))
      candidates.push_back({s, a.peer});
  seeded_shuffle(candidates, cfg.seed);

  std::vector<EdgeKey> chosen;
  for (const auto& e : candidates) {
    if (chosen.size() == cfg.num_pairs)
      break;
    if (has_alternative_path(g, e.src, e.dst, cfg.depth))
      chosen.push_back(e);
  }
  if (chosen.size() < cfg.num_pairs)
    throw std::runtime_error(
        "only " + std::to_string(chosen.size()) + " eligible edges, " +
        std::to_string(cfg.num_pairs) + " requested (short by " +
        std::to_string(cfg.num_pairs - chosen.size()) + ")");

  EvalReport report;
  report.experiment = "f1";
  report.config = cfg;
  report.level_fractions = scale.fractions;
  report.pairs.resize(chosen.size());
  parallel_for(chosen.size(), cfg.jobs, [&](std::size_t i) {
    const auto [u, v] = chosen[i];
    PairRecord& rec = report.pairs[i];
    rec.trustor = g.name(u);
    rec.trustee = g.name(v);
    rec.truth_level = scale.nearest_level(positive_fraction(*g.edge(u, v)));
    rec.truth_value = scale.fractions[rec.truth_level];
    const Prediction p = predict(g, u, v, cfg);
    rec.predicted_value = p.value;
    rec.predicted_level = round_to_level(scale, p.value);
    rec.certain_evidence = p.certain_evidence;
  });

  std::vector<std::size_t> truth, predicted;
  for (const auto& rec : report.pairs) {
    truth.push_back(rec.truth_level);
    predicted.push_back(rec.predicted_level);
    report.errors.push_back(rec.predicted_value - rec.truth_value);
  }
  report.confusion = confusion_matrix(truth, predicted, scale.size());
  report.f1_micro = f1_micro(report.confusion);
  report.f1_macro = f1_macro(report.confusion);
  if (report.errors.size() >= 2)
    report.error_fit = fit_error_distribution(report.errors);
  report.runtime_seconds = seconds_since(start);
  return report;
}

EvalReport run_ranking_experiment(const TrustGraph& g, const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<NodeId> candidates(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    candidates[v] = v;
  seeded_shuffle(candidates, cfg.seed);

  struct Seed {
    NodeId node;
    std::vector<NodeId> neighbours;
    std::vector<double> truth;
  };
  std::vector<Seed> seeds;
  for (NodeId u : candidates) {
    if (seeds.size() == cfg.num_ranking_seeds)
      break;
    if (g.out_edges(u).size() < 3)
      continue;
    Seed seed{u, {}, {}};
    for (const auto& a : g.out_edges(u)) {
      if (!has_alternative_path(g, u, a.peer, cfg.depth))
        continue;
      seed.neighbours.push_back(a.peer);
      seed.truth.push_back(expected_belief(a.opinion));
    }
    const bool varied = std::adjacent_find(seed.truth.begin(), seed.truth.end(),
                                           std::not_equal_to<>()) != seed.truth.end();
    if (seed.neighbours.size() >= 3 && varied)
      seeds.push_back(std::move(seed));
  }
  if (seeds.size() < cfg.num_ranking_seeds)
    throw std::runtime_error(
        "only " + std::to_string(seeds.size()) + " eligible ranking seeds, " +
        std::to_string(cfg.num_ranking_seeds) + " requested (short by " +
        std::to_string(cfg.num_ranking_seeds - seeds.size()) + ")");

  EvalReport report;
  report.experiment = "ranking";
  report.config = cfg;
  report.rankings.resize(seeds.size());
  parallel_for(seeds.size(), cfg.jobs, [&](std::size_t i) {
    const Seed& seed = seeds[i];
    RankingRecord& rec = report.rankings[i];
    rec.seed = g.name(seed.node);
    rec.truth_scores = seed.truth;
    for (NodeId v : seed.neighbours) {
      rec.neighbours.push_back(g.name(v));
      rec.computed_scores.push_back(predict(g, seed.node, v, cfg).value);
    }
    rec.tau = kendall_tau_b(rec.computed_scores, rec.truth_scores);
  });
  for (const auto& rec : report.rankings)
    report.tau_samples.push_back(rec.tau);
  report.runtime_seconds = seconds_since(start);
  return report;
}

std::vector<SweepEntry> parameter_sweep(const EdgeRecords& records,
                                        std::span<const std::string> level_names,
                                        EvidenceStyle style,
                                        std::span<const double> lambdas,
                                        std::span<const double> base_levels,
                                        const ExperimentConfig& cfg_template) {
  if (lambdas.empty() || base_levels.empty())
    throw std::invalid_argument("sweep needs nonempty lambda and base-level lists");
  const auto counts = records.level_counts();
  std::vector<SweepEntry> entries;
  for (double lambda : lambdas)
    for (double base : base_levels) {
      const LevelScale scale = build_scale(
          counts, base, kHighestLevelFraction,
          std::vector<std::string>(level_names.begin(), level_names.end()));
      const TrustGraph graph = build_graph(records, scale, style, lambda).graph;
      ExperimentConfig cfg = cfg_template;
      cfg.lambda = lambda;
      cfg.base_level = base;
      entries.push_back({lambda, base, run_f1_experiment(graph, scale, cfg)});
    }
  return entries;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"lambda", cfg.lambda},
          {"base_level", cfg.base_level},
          {"depth", cfg.depth},
          {"algorithm", std::string(to_string(cfg.algorithm))},
          {"seed", cfg.seed},
          {"num_pairs", cfg.num_pairs},
          {"num_ranking_seeds", cfg.num_ranking_seeds}};
}

nlohmann::json to_json(const EvalReport& report) {
  using nlohmann::json;
  json j;
  j["experiment"] = report.experiment;
  j["config"] = to_json(report.config);
  if (report.experiment == "f1") {
    j["level_fractions"] = report.level_fractions;
    json pairs = json::array();
    for (const auto& p : report.pairs) {
      json rec = {{"trustor", p.trustor},
                  {"trustee", p.trustee},
                  {"truth_level", p.truth_level},
                  {"predicted_level", p.predicted_level},
                  {"truth_value", p.truth_value},
                  {"predicted_value", p.predicted_value}};
      if (p.certain_evidence)
        rec["certain_evidence"] = *p.certain_evidence;
      pairs.push_back(std::move(rec));
    }
    j["pairs"] = std::move(pairs);
    json confusion = json::array();
    for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < report.confusion.cols(); ++c)
        row.push_back(report.confusion(r, c));
      confusion.push_back(std::move(row));
    }
    j["confusion"] = std::move(confusion);
    j["f1_micro"] = report.f1_micro;
    j["f1_macro"] = report.f1_macro;
    j["errors"] = report.errors;
    if (report.error_fit)
      j["error_fit"] = {{"mean", report.error_fit->mean},
                        {"std", report.error_fit->stddev}};
    else
      j["error_fit"] = nullptr;
  } else {
    json rankings = json::array();
    for (const auto& r : report.rankings)
      rankings.push_back({{"seed", r.seed},
                          {"neighbours", r.neighbours},
                          {"truth_scores", r.truth_scores},
                          {"computed_scores", r.computed_scores},
                          {"tau", r.tau}});
    j["rankings"] = std::move(rankings);
    j["tau_samples"] = report.tau_samples;
    json cdf = json::array();
    for (const auto& [value, fraction] : empirical_cdf(report.tau_samples))
      cdf.push_back({value, fraction});
    j["tau_cdf"] = std::move(cdf);
  }
  return j;
}

void write_errors_csv(std::ostream& out, const EvalReport& report) {
  out << "trustor,trustee,truth_value,predicted_value,error\n";
  out.precision(17);
  for (const auto& p : report.pairs)
    out << p.trustor << ',' << p.trustee << ',' << p.truth_value << ','
        << p.predicted_value << ',' << p.predicted_value - p.truth_value << '\n';
}

void write_tau_csv(std::ostream& out, const EvalReport& report) {
  out << "seed,tau\n";
  out.precision(17);
  for (const auto& r : report.rankings)
    out << r.seed << ',' << r.tau << '\n';
}

} // namespace trustcalc
