// Command-line surface for the embedding quality metrics library.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drqm/cli.hpp"
#include "drqm/io.hpp"

namespace {

struct CommonArgs {
  std::string data_path;
  bool precomputed = false;
  bool header = false;
  std::vector<std::string> embedding_paths;
  std::vector<std::string> labels;
  std::string metrics = "NS,SNS,NMS,SGS,FSNS";
  double perplexity = 30.0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool many_embeddings) {
  cmd->add_option("--data", args.data_path, "Dataset file (points, or condensed distances with --precomputed)")
      ->required();
  cmd->add_flag("--precomputed", args.precomputed,
                "Treat --data as a precomputed condensed-distance file");
  cmd->add_flag("--header", args.header,
                "Skip the first line of delimited files");
  auto* emb = cmd->add_option("--embedding", args.embedding_paths,
                              "Embedding file (points)");
  emb->required();
  if (!many_embeddings) emb->expected(1);
  cmd->add_option("--label", args.labels,
                  "Label for the matching --embedding (default: file stem)");
  cmd->add_option("--perplexity", args.perplexity,
                  "Perplexity for the KL-family metrics")->capture_default_str();
  cmd->add_option("--out", args.out_path, "Output path (default: stdout)");
}

drqm::cli::DataInput data_input(const CommonArgs& args) {
  return {args.data_path, args.precomputed, args.header};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-aware quality metrics for dimensionality-reduction embeddings"};
  app.set_version_flag("--version", drqm::kToolVersion);
  app.require_subcommand(1);

  CommonArgs metrics_args;
  auto* metrics_cmd =
      app.add_subcommand("metrics", "Evaluate metrics for one or more embeddings");
  add_common(metrics_cmd, metrics_args, true);
  metrics_cmd
      ->add_option("--metrics", metrics_args.metrics,
                   "Comma-separated metric list "
                   "(RS,NS,SNS,NMS,SGS,FSNS,KL,KLG,SNKL,FSKL,KLINF)")
      ->capture_default_str();

  CommonArgs curve_args;
  curve_args.metrics = "NS";
  double alpha_min = 0.0, alpha_max = 10.0;
  int alpha_count = 101;
  bool alpha_log = false;
  auto* curve_cmd = app.add_subcommand(
      "scale-curve", "Sample metric values over a grid of embedding scales");
  add_common(curve_cmd, curve_args, false);
  curve_cmd->add_option("--metrics", curve_args.metrics,
                        "Curve metrics: NS, KL, KLG")->capture_default_str();
  curve_cmd->add_option("--alpha-min", alpha_min, "Smallest scale")->capture_default_str();
  curve_cmd->add_option("--alpha-max", alpha_max, "Largest scale")->capture_default_str();
  curve_cmd->add_option("--alpha-count", alpha_count, "Grid size")->capture_default_str();
  curve_cmd->add_flag("--alpha-log", alpha_log, "Logarithmic grid spacing");

  CommonArgs sens_args;
  sens_args.metrics = "NS,SNS,NMS,SGS,FSNS";
  int steps = 50;
  double base_sigma = -1.0;
  std::string growth = "linear";
  double s_rescale_low = 0.1, s_rescale_high = 10.0;
  std::uint64_t s_seed = 0;
  auto* sens_cmd = app.add_subcommand(
      "sensitivity", "Noise-ladder experiment with per-step random rescaling");
  add_common(sens_cmd, sens_args, false);
  sens_cmd->add_option("--metrics", sens_args.metrics, "Metric list")->capture_default_str();
  sens_cmd->add_option("--steps", steps, "Number of noise steps")->capture_default_str();
  sens_cmd->add_option("--base-sigma", base_sigma,
                       "Noise std at step 1 (default: 2% of embedding diameter)");
  sens_cmd->add_option("--growth", growth, "Noise schedule: linear|constant")
      ->capture_default_str();
  sens_cmd->add_option("--rescale-low", s_rescale_low,
                       "Lower bound of the per-step rescale factor")->capture_default_str();
  sens_cmd->add_option("--rescale-high", s_rescale_high,
                       "Upper bound of the per-step rescale factor")->capture_default_str();
  sens_cmd->add_option("--seed", s_seed, "RNG seed")->capture_default_str();

  CommonArgs rank_args;
  std::string rank_metric = "SNS";
  int trials = 10;
  double r_rescale_low = 1.0, r_rescale_high = 1.0;
  std::uint64_t r_seed = 0;
  auto* rank_cmd = app.add_subcommand(
      "rank", "Ordering frequencies of embeddings under one metric");
  add_common(rank_cmd, rank_args, true);
  rank_cmd->add_option("--metric", rank_metric, "Ranking metric")->capture_default_str();
  rank_cmd->add_option("--trials", trials, "Number of trials")->capture_default_str();
  rank_cmd->add_option("--rescale-low", r_rescale_low,
                       "Lower bound of the per-embedding rescale factor")->capture_default_str();
  rank_cmd->add_option("--rescale-high", r_rescale_high,
                       "Upper bound of the per-embedding rescale factor")->capture_default_str();
  rank_cmd->add_option("--seed", r_seed, "RNG seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (metrics_cmd->parsed()) {
      drqm::cli::MetricsOptions opt;
      opt.data = data_input(metrics_args);
      opt.embeddings = drqm::cli::resolve_labels(metrics_args.embedding_paths,
                                                 metrics_args.labels);
      opt.metrics = drqm::parse_metric_list(metrics_args.metrics);
      opt.perplexity = metrics_args.perplexity;
      opt.out_path = metrics_args.out_path;
      return drqm::cli::run_metrics(opt);
    }
    if (curve_cmd->parsed()) {
      drqm::cli::ScaleCurveOptions opt;
      opt.data = data_input(curve_args);
      opt.embedding = drqm::cli::resolve_labels(curve_args.embedding_paths,
                                                curve_args.labels)[0];
      opt.metrics = drqm::parse_metric_list(curve_args.metrics);
      opt.grid = {alpha_min, alpha_max, alpha_count, alpha_log};
      opt.perplexity = curve_args.perplexity;
      opt.out_path = curve_args.out_path;
      return drqm::cli::run_scale_curve(opt);
    }
    if (sens_cmd->parsed()) {
      drqm::cli::SensitivityOptions opt;
      opt.data = data_input(sens_args);
      opt.embedding = drqm::cli::resolve_labels(sens_args.embedding_paths,
                                                sens_args.labels)[0];
      opt.steps = steps;
      if (base_sigma >= 0.0) opt.base_sigma = base_sigma;
      opt.growth = drqm::parse_growth(growth);
      opt.rescale_low = s_rescale_low;
      opt.rescale_high = s_rescale_high;
      opt.seed = s_seed;
      opt.metrics = drqm::parse_metric_list(sens_args.metrics);
      opt.perplexity = sens_args.perplexity;
      opt.out_path = sens_args.out_path;
      return drqm::cli::run_sensitivity(opt);
    }
    if (rank_cmd->parsed()) {
      drqm::cli::RankOptions opt;
      opt.data = data_input(rank_args);
      opt.embeddings = drqm::cli::resolve_labels(rank_args.embedding_paths,
                                                 rank_args.labels);
      opt.metric = drqm::parse_metric(rank_metric);
      opt.trials = trials;
      opt.rescale_low = r_rescale_low;
      opt.rescale_high = r_rescale_high;
      opt.seed = r_seed;
      opt.perplexity = rank_args.perplexity;
      opt.out_path = rank_args.out_path;
      return drqm::cli::run_rank(opt);
    }
  } catch (const drqm::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return drqm::cli::kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return drqm::cli::kExitInputError;
  }
  return drqm::cli::kExitInputError;
}
