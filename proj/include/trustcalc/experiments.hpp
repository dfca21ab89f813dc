#pragma once

// Evaluation protocols: leave-one-edge-out prediction scored with F1 and
// error statistics, neighbour ranking scored with Kendall's tau-b, and the
// (lambda, lowest fraction) parameter sweep.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trustcalc/level_scale.hpp"
#include "trustcalc/metrics.hpp"
#include "trustcalc/trust_graph.hpp"

#include <json.hpp>

namespace trustcalc {

enum class Algorithm {
  AssessTrust,   // 3VSL
  SlStar,        // same search, SL operators
  TidalTrust,
  EigenTrust,
  TrustRank,
};

std::optional<Algorithm> parse_algorithm(std::string_view text);
std::string_view to_string(Algorithm algorithm);

struct ExperimentConfig {
  double lambda = 30.0;
  double base_level = 0.3; // fraction of the lowest level
  int depth = 3;
  Algorithm algorithm = Algorithm::AssessTrust;
  std::uint64_t seed = 1;
  std::size_t num_pairs = 200;
  std::size_t num_ranking_seeds = 100;
  std::size_t jobs = 0; // 0: hardware concurrency

  void validate() const;
};

struct PairRecord {
  std::string trustor;
  std::string trustee;
  std::size_t truth_level = 0;
  std::size_t predicted_level = 0;
  double truth_value = 0.0;
  double predicted_value = 0.0;
  std::optional<double> certain_evidence; // alpha + beta, opinion algorithms
};

struct RankingRecord {
  std::string seed;
  std::vector<std::string> neighbours;
  std::vector<double> truth_scores;
  std::vector<double> computed_scores;
  double tau = 0.0;
};

struct EvalReport {
  std::string experiment; // "f1" or "ranking"
  ExperimentConfig config;
  std::vector<double> level_fractions;

  std::vector<PairRecord> pairs;
  ConfusionMatrix confusion;
  double f1_micro = 0.0;
  double f1_macro = 0.0;
  std::vector<double> errors; // predicted - truth value
  std::optional<NormalFit> error_fit;

  std::vector<RankingRecord> rankings;
  std::vector<double> tau_samples;

  double runtime_seconds = 0.0; // not serialised
};

/// Rounds a trust value to a level with ties going to the lower level.
inline std::size_t round_to_level(const LevelScale& scale, double value) {
  return scale.nearest_level(value);
}

/// Leave-one-edge-out prediction. Candidate edges are visited in a
/// seed-determined uniform random order; an edge is eligible when another
/// path of at most `depth` hops joins its endpoints. The first `num_pairs`
/// eligible edges are each hidden in turn and predicted by the configured
/// algorithm (AssessTrust, SlStar or TidalTrust).
///
/// Truth level = nearest level to the edge's positive fraction; truth value
/// = that level's fraction. Throws std::runtime_error naming the shortfall
/// when fewer than num_pairs edges are eligible.
EvalReport run_f1_experiment(const TrustGraph& g, const LevelScale& scale,
                             const ExperimentConfig& cfg);

/// For each sampled seed node, ranks its eligible out-neighbours by the
/// expected belief of the direct opinion (truth) and by the configured
/// algorithm's score with that edge hidden, and records tau-b. A seed is
/// eligible with at least three eligible neighbours whose truth scores are
/// not all equal.
EvalReport run_ranking_experiment(const TrustGraph& g, const ExperimentConfig& cfg);

struct SweepEntry {
  double lambda;
  double base_level;
  EvalReport report;
};

/// One F1 experiment per (lambda, base level) pair with the same seed, so
/// all combinations score the same sampled edges.
std::vector<SweepEntry> parameter_sweep(const EdgeRecords& records,
                                        std::span<const std::string> level_names,
                                        EvidenceStyle style,
                                        std::span<const double> lambdas,
                                        std::span<const double> base_levels,
                                        const ExperimentConfig& cfg_template);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const EvalReport& report);

/// `trustor,trustee,truth_value,predicted_value,error`
void write_errors_csv(std::ostream& out, const EvalReport& report);
/// `seed,tau`
void write_tau_csv(std::ostream& out, const EvalReport& report);

/// Default worker count: TRUSTCALC_JOBS when set, else hardware threads.
std::size_t default_jobs();

} // namespace trustcalc
