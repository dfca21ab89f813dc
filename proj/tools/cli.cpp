#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trustcalc/assess.hpp"
#include "trustcalc/baselines.hpp"
#include "trustcalc/belief.hpp"
#include "trustcalc/experiments.hpp"
#include "trustcalc/level_scale.hpp"
#include "trustcalc/synthetic.hpp"
#include "trustcalc/trust_graph.hpp"

namespace trustcalc::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphFlags {
  std::string path;
  std::string style;
  double lambda = 30.0;
  std::optional<double> base_level;
  std::string levels;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& flags, bool with_evidence = true) {
  cmd->add_option("--graph", flags.path, "TSV edge list")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--style", flags.style,
                  "evidence style for level edges: advogato|positive-negative, "
                  "pgp|positive-uncertain");
  if (with_evidence) {
    cmd->add_option("--lambda", flags.lambda, "total evidence per edge")
        ->capture_default_str();
    cmd->add_option("--base-level", flags.base_level,
                    "fraction of the lowest level (default 0.3 advogato, 0.1 pgp)");
  }
  cmd->add_option("--levels", flags.levels,
                  "comma-separated level names, lowest first "
                  "(default observer,apprentice,journeyer,master)");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      items.push_back(item);
  return items;
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": not a number: '" + item + "'");
    }
  }
  if (values.empty())
    throw UsageError(std::string(flag) + ": empty list");
  return values;
}

std::vector<std::string> level_names(const GraphFlags& flags) {
  return flags.levels.empty() ? advogato_level_names() : split_list(flags.levels);
}

EvidenceStyle require_style(const GraphFlags& flags) {
  if (flags.style.empty())
    throw UsageError("--style is required for level-annotated edge lists");
  if (auto style = parse_evidence_style(flags.style))
    return *style;
  throw UsageError("--style: unknown evidence style '" + flags.style + "'");
}

double default_base_level(EvidenceStyle style) {
  return style == EvidenceStyle::PositiveNegative ? 0.3 : 0.1;
}

double checked_base_level(double r) {
  if (!(r > 0.0 && r < kHighestLevelFraction))
    throw UsageError("--base-level must lie in (0, 0.9)");
  return r;
}

EdgeRecords read_records(const GraphFlags& flags) {
  std::ifstream in(flags.path);
  if (!in)
    throw std::runtime_error("cannot read '" + flags.path + "'");
  return read_edge_records(in, level_names(flags));
}

struct LoadedGraph {
  EdgeRecords records;
  std::optional<LevelScale> scale;
  std::optional<EvidenceStyle> style;
  double base_level = 0.0;
  LoadResult load;
};

LoadedGraph load_graph(const GraphFlags& flags) {
  LoadedGraph g;
  g.records = read_records(flags);
  LevelScale scale;
  if (g.records.has_level_records()) {
    g.style = require_style(flags);
    g.base_level = checked_base_level(flags.base_level.value_or(default_base_level(*g.style)));
    scale = build_scale(g.records.level_counts(), g.base_level,
                        kHighestLevelFraction, level_names(flags));
    g.scale = scale;
  }
  g.load = build_graph(g.records, scale,
                       g.style.value_or(EvidenceStyle::PositiveNegative), flags.lambda);
  return g;
}

const LevelScale& require_scale(const LoadedGraph& g) {
  if (!g.scale)
    throw std::runtime_error("experiments need a level-annotated edge list");
  return *g.scale;
}

std::size_t resolve_jobs(std::size_t flag) {
  if (const char* env = std::getenv("TRUSTCALC_JOBS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0)
      return std::size_t(n);
  }
  return flag;
}

Algorithm require_algorithm(const std::string& text) {
  if (auto a = parse_algorithm(text))
    return *a;
  throw UsageError("--algorithm: unknown algorithm '" + text + "'");
}

void warn_load(std::ostream& err, const LoadResult& load) {
  if (load.self_loops)
    err << "warning: dropped " << load.self_loops << " self-loop(s)\n";
  if (load.duplicate_edges)
    err << "warning: " << load.duplicate_edges
        << " duplicate edge(s), later lines kept\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f)
    throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct ExperimentFlags {
  int depth = kDefaultSearchDepth;
  std::string algorithm = "3vsl";
  std::size_t pairs = 200;
  std::size_t ranking_seeds = 100;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& flags, bool ranking) {
  cmd->add_option("--depth", flags.depth, "maximum search depth H")->capture_default_str();
  cmd->add_option("--algorithm", flags.algorithm,
                  ranking ? "3vsl|sl|tidal|eigentrust|trustrank" : "3vsl|sl|tidal")
      ->capture_default_str();
  if (ranking)
    cmd->add_option("--seeds", flags.ranking_seeds, "number of seed users")
        ->capture_default_str();
  else
    cmd->add_option("--pairs", flags.pairs, "number of held-out edges")
        ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "random seed")->capture_default_str();
  cmd->add_option("--jobs", flags.jobs,
                  "worker threads (0: all cores; TRUSTCALC_JOBS overrides)");
}

void validate_flags(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ExperimentConfig make_config(const ExperimentFlags& flags, const GraphFlags& graph,
                             const LoadedGraph& loaded) {
  ExperimentConfig cfg;
  cfg.lambda = graph.lambda;
  cfg.base_level = loaded.base_level > 0 ? loaded.base_level : 0.3;
  cfg.depth = flags.depth;
  cfg.algorithm = require_algorithm(flags.algorithm);
  cfg.seed = flags.seed;
  cfg.num_pairs = flags.pairs;
  cfg.num_ranking_seeds = flags.ranking_seeds;
  cfg.jobs = resolve_jobs(flags.jobs);
  validate_flags(cfg);
  return cfg;
}

void print_f1_summary(std::ostream& err, const EvalReport& r) {
  err << to_string(r.config.algorithm) << " (base " << r.config.base_level
      << ", lambda " << r.config.lambda << "): F1 micro " << std::fixed
      << std::setprecision(3) << r.f1_micro << ", macro " << r.f1_macro;
  if (r.error_fit)
    err << ", error mean " << r.error_fit->mean << " std " << r.error_fit->stddev;
  err << std::defaultfloat << " [" << r.pairs.size() << " pairs, "
      << std::setprecision(3) << r.runtime_seconds << " s]\n";
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trust assessment with three-valued subjective logic", "trustcalc"};
  app.require_subcommand(1);

  GraphFlags graph;
  ExperimentFlags exp;

  auto* assess_cmd = app.add_subcommand("assess", "indirect trust between two users");
  add_graph_flags(assess_cmd, graph);
  std::string from, to;
  bool with_trace = false;
  assess_cmd->add_option("--from", from, "trustor")->required();
  assess_cmd->add_option("--to", to, "trustee")->required();
  assess_cmd->add_option("--depth", exp.depth, "maximum search depth H")->capture_default_str();
  assess_cmd->add_option("--algorithm", exp.algorithm, "3vsl|sl|tidal")->capture_default_str();
  assess_cmd->add_flag("--trace", with_trace, "include invocation log and parse tree (3vsl)");

  auto* convert_cmd = app.add_subcommand("convert", "level edge list to evidence edge list");
  std::string output;
  add_graph_flags(convert_cmd, graph);
  convert_cmd->add_option("--output", output, "output TSV")->required();

  auto* stats_cmd = app.add_subcommand("stats", "graph statistics");
  add_graph_flags(stats_cmd, graph);

  auto* f1_cmd = app.add_subcommand("experiment-f1", "leave-one-edge-out F1 experiment");
  add_graph_flags(f1_cmd, graph);
  add_experiment_flags(f1_cmd, exp, false);
  std::string errors_csv;
  f1_cmd->add_option("--errors-csv", errors_csv, "write error samples as CSV");

  auto* rank_cmd = app.add_subcommand("experiment-rank", "neighbour ranking experiment");
  add_graph_flags(rank_cmd, graph);
  add_experiment_flags(rank_cmd, exp, true);
  std::string tau_csv;
  rank_cmd->add_option("--tau-csv", tau_csv, "write tau samples as CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "F1 over a lambda x base-level grid");
  add_graph_flags(sweep_cmd, graph, false);
  add_experiment_flags(sweep_cmd, exp, false);
  std::string lambdas = "10,20,30,40,50", base_levels = "0.1,0.2,0.3,0.4,0.5", out_dir;
  sweep_cmd->add_option("--lambdas", lambdas)->capture_default_str();
  sweep_cmd->add_option("--base-levels", base_levels)->capture_default_str();
  sweep_cmd->add_option("--out-dir", out_dir, "directory for per-combination reports")
      ->required();

  auto* compare_cmd = app.add_subcommand(
      "compare", "F1 and error fit of 3vsl, sl and tidal at their selected parameters");
  add_graph_flags(compare_cmd, graph);
  add_experiment_flags(compare_cmd, exp, false);
  std::optional<double> tidal_base;
  compare_cmd->add_option("--tidal-base-level", tidal_base,
                          "lowest-level fraction for tidal (default 0.2 advogato, 0.1 pgp)");

  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic level edge list");
  SyntheticGraphOptions synth;
  gen_cmd->add_option("--nodes", synth.num_nodes)->capture_default_str();
  gen_cmd->add_option("--degree", synth.mean_out_degree, "mean out-degree")
      ->capture_default_str();
  gen_cmd->add_option("--seed", synth.seed)->capture_default_str();
  gen_cmd->add_option("--output", output, "output TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    json result;
    if (assess_cmd->parsed()) {
      const auto loaded = load_graph(graph);
      warn_load(err, loaded.load);
      const TrustGraph& g = loaded.load.graph;
      const Algorithm algorithm = require_algorithm(exp.algorithm);
      const AssessQuery q{from, to, exp.depth};
      result = {{"trustor", from}, {"trustee", to}, {"depth", exp.depth},
                {"algorithm", std::string(to_string(algorithm))}};
      if (algorithm == Algorithm::AssessTrust) {
        Opinion op;
        if (with_trace) {
          auto [traced, trace] = assess_with_trace(g, q);
          op = traced;
          json calls = json::array();
          for (const auto& inv : trace.invocations)
            calls.push_back({inv.trustor, inv.trustee, inv.depth});
          result["trace"] = {{"invocations", calls}, {"expression", to_string(trace.tree)}};
        } else {
          op = assess(g, q);
        }
        result["opinion"] = {op.alpha(), op.beta(), op.gamma()};
        result["base_rate"] = op.base_rate();
        result["certainty"] = certainty(collapse(op));
        result["expected_belief"] = expected_belief(op);
        err << from << " -> " << to << ": <" << op.alpha() << ", " << op.beta() << ", "
            << op.gamma() << ">, expected belief " << expected_belief(op) << '\n';
      } else if (algorithm == Algorithm::SlStar) {
        const SlOpinion op = assess_sl(g, q);
        result["opinion"] = {op.alpha(), op.beta(), op.uncertainty_mass()};
        result["base_rate"] = op.base_rate();
        result["expected_belief"] = sl_expected_belief(op);
        err << from << " -> " << to << ": SL <" << op.alpha() << ", " << op.beta()
            << ", 2>, expected belief " << sl_expected_belief(op) << '\n';
      } else if (algorithm == Algorithm::TidalTrust) {
        TidalTrustOptions options;
        options.max_depth = std::size_t(std::max(exp.depth, 0));
        const double value = tidal_trust(g, from, to, options);
        result["value"] = value;
        err << from << " -> " << to << ": TidalTrust " << value << '\n';
      } else {
        throw UsageError("--algorithm: assess supports 3vsl, sl and tidal");
      }
    } else if (convert_cmd->parsed()) {
      const auto loaded = load_graph(graph);
      warn_load(err, loaded.load);
      std::ostringstream tsv;
      if (loaded.scale) {
        tsv << "# levels";
        for (std::size_t k = 0; k < loaded.scale->size(); ++k)
          tsv << ' ' << loaded.scale->level_names[k] << '=' << loaded.scale->fractions[k];
        tsv << "; lambda " << graph.lambda << "; style " << to_string(*loaded.style) << '\n';
      }
      write_edge_list(tsv, loaded.load.graph);
      write_file(output, tsv.str());
      result = {{"output", output},
                {"nodes", loaded.load.graph.num_nodes()},
                {"edges", loaded.load.graph.num_edges()},
                {"duplicate_edges", loaded.load.duplicate_edges},
                {"self_loops", loaded.load.self_loops}};
      if (loaded.scale)
        result["level_fractions"] = loaded.scale->fractions;
      err << "wrote " << loaded.load.graph.num_edges() << " edges to " << output << '\n';
    } else if (stats_cmd->parsed()) {
      const auto loaded = load_graph(graph);
      warn_load(err, loaded.load);
      const GraphStats s = graph_stats(loaded.load.graph);
      result = {{"nodes", s.num_nodes},
                {"edges", s.num_edges},
                {"mean_out_degree", s.mean_out_degree},
                {"avg_degree", s.avg_degree},
                {"max_in_degree", s.max_in_degree},
                {"max_out_degree", s.max_out_degree},
                {"duplicate_edges", loaded.load.duplicate_edges},
                {"self_loops", loaded.load.self_loops}};
      err << s.num_nodes << " nodes, " << s.num_edges << " edges\n";
    } else if (f1_cmd->parsed() || rank_cmd->parsed()) {
      const auto loaded = load_graph(graph);
      warn_load(err, loaded.load);
      const ExperimentConfig cfg = make_config(exp, graph, loaded);
      if (f1_cmd->parsed()) {
        const EvalReport report = run_f1_experiment(loaded.load.graph, require_scale(loaded), cfg);
        result = to_json(report);
        if (!errors_csv.empty()) {
          std::ostringstream csv;
          write_errors_csv(csv, report);
          write_file(errors_csv, csv.str());
        }
        print_f1_summary(err, report);
      } else {
        const EvalReport report = run_ranking_experiment(loaded.load.graph, cfg);
        result = to_json(report);
        if (!tau_csv.empty()) {
          std::ostringstream csv;
          write_tau_csv(csv, report);
          write_file(tau_csv, csv.str());
        }
        double mean_tau = 0.0;
        for (double t : report.tau_samples)
          mean_tau += t / double(report.tau_samples.size());
        err << to_string(cfg.algorithm) << ": mean tau " << mean_tau << " over "
            << report.tau_samples.size() << " seeds\n";
      }
    } else if (sweep_cmd->parsed()) {
      const auto records = read_records(graph);
      if (!records.has_level_records())
        throw std::runtime_error("sweep needs a level-annotated edge list");
      const EvidenceStyle style = require_style(graph);
      const auto lambda_list = parse_doubles(lambdas, "--lambdas");
      const auto base_list = parse_doubles(base_levels, "--base-levels");
      ExperimentConfig cfg;
      cfg.depth = exp.depth;
      cfg.algorithm = require_algorithm(exp.algorithm);
      cfg.seed = exp.seed;
      cfg.num_pairs = exp.pairs;
      cfg.jobs = resolve_jobs(exp.jobs);
      validate_flags(cfg);
      const auto entries = parameter_sweep(records, level_names(graph), style,
                                           lambda_list, base_list, cfg);
      std::filesystem::create_directories(out_dir);
      json summary = json::array();
      for (const auto& e : entries) {
        const std::string file = (std::filesystem::path(out_dir) /
                                  ("report_lambda" + format_number(e.lambda) + "_base" +
                                   format_number(e.base_level) + ".json"))
                                     .string();
        write_file(file, to_json(e.report).dump(2) + "\n");
        summary.push_back({{"lambda", e.lambda},
                           {"base_level", e.base_level},
                           {"f1_micro", e.report.f1_micro},
                           {"f1_macro", e.report.f1_macro},
                           {"report", file}});
        print_f1_summary(err, e.report);
      }
      result = {{"reports", summary}};
    } else if (compare_cmd->parsed()) {
      const auto records = read_records(graph);
      if (!records.has_level_records())
        throw std::runtime_error("compare needs a level-annotated edge list");
      const EvidenceStyle style = require_style(graph);
      const double base = checked_base_level(graph.base_level.value_or(default_base_level(style)));
      const double tt_base = tidal_base.value_or(
          style == EvidenceStyle::PositiveNegative ? 0.2 : 0.1);
      json rows = json::array();
      err << "algorithm  base  lambda  f1_micro  f1_macro  err_mean  err_std\n";
      for (Algorithm a : {Algorithm::AssessTrust, Algorithm::SlStar, Algorithm::TidalTrust}) {
        const double b = a == Algorithm::TidalTrust ? tt_base : base;
        const LevelScale scale = build_scale(records.level_counts(), b,
                                             kHighestLevelFraction, level_names(graph));
        const TrustGraph g = build_graph(records, scale, style, graph.lambda).graph;
        ExperimentConfig cfg;
        cfg.lambda = graph.lambda;
        cfg.base_level = b;
        cfg.depth = exp.depth;
        cfg.algorithm = a;
        cfg.seed = exp.seed;
        cfg.num_pairs = exp.pairs;
        cfg.jobs = resolve_jobs(exp.jobs);
        const EvalReport r = run_f1_experiment(g, scale, cfg);
        json row = {{"algorithm", std::string(to_string(a))},
                    {"base_level", b},
                    {"lambda", a == Algorithm::TidalTrust ? json(nullptr) : json(graph.lambda)},
                    {"f1_micro", r.f1_micro},
                    {"f1_macro", r.f1_macro},
                    {"error_mean", r.error_fit ? json(r.error_fit->mean) : json(nullptr)},
                    {"error_std", r.error_fit ? json(r.error_fit->stddev) : json(nullptr)}};
        std::vector<double> certain;
        for (const auto& p : r.pairs)
          if (p.certain_evidence)
            certain.push_back(*p.certain_evidence);
        if (!certain.empty()) {
          json cdf = json::array();
          for (const auto& [v, f] : empirical_cdf(certain))
            cdf.push_back({v, f});
          row["certain_evidence_cdf"] = std::move(cdf);
        }
        rows.push_back(std::move(row));
        char line[160];
        std::snprintf(line, sizeof line, "%-9s  %.2f  %6s  %8.3f  %8.3f  %8.4f  %7.4f\n",
                      std::string(to_string(a)).c_str(), b,
                      a == Algorithm::TidalTrust ? "-" : format_number(graph.lambda).c_str(),
                      r.f1_micro, r.f1_macro, r.error_fit ? r.error_fit->mean : 0.0,
                      r.error_fit ? r.error_fit->stddev : 0.0);
        err << line;
      }
      result = {{"style", std::string(to_string(style))}, {"rows", rows}};
    } else if (gen_cmd->parsed()) {
      const EdgeRecords records = generate_level_graph(synth);
      std::ostringstream tsv;
      write_level_records(tsv, records);
      write_file(output, tsv.str());
      result = {{"output", output}, {"edges", records.records.size()},
                {"nodes", synth.num_nodes}, {"level_counts", records.level_counts()}};
      err << "wrote " << records.records.size() << " edges to " << output << '\n';
    }
    out << result.dump(2) << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

} // namespace trustcalc::cli
