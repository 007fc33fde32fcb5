#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drqm/experiments.hpp"
#include "drqm/io.hpp"
#include "drqm/metrics.hpp"

namespace drqm::cli {

// Exit statuses shared by every subcommand: 0 success, 2 input error,
// 3 partial metric failure. Input errors are thrown (input_error,
// parse_error) and mapped to 2 by the entry point.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitPartialFailure = 3;

struct DataInput {
  std::string data_path;
  bool precomputed = false;  // data file holds condensed distances
  bool header = false;       // skip the first line of delimited files
};

struct EmbeddingInput {
  std::string path;
  std::string label;  // defaults to the file stem
};

// Resolves labels (file stem when empty) and rejects duplicates.
std::vector<EmbeddingInput> resolve_labels(
    const std::vector<std::string>& paths,
    const std::vector<std::string>& labels);

struct MetricsOptions {
  DataInput data;
  std::vector<EmbeddingInput> embeddings;
  std::vector<MetricId> metrics;
  double perplexity = 30.0;
  std::string out_path;  // empty: stdout
};

// One MetricReport per (embedding, metric); per-metric failures are recorded
// in the report and turn the exit status into 3.
int run_metrics(const MetricsOptions& opt);

struct AlphaGrid {
  double min = 0.0;
  double max = 10.0;
  int count = 101;
  bool log_spacing = false;
};

std::vector<double> make_alpha_grid(const AlphaGrid& grid);

struct ScaleCurveOptions {
  DataInput data;
  EmbeddingInput embedding;
  std::vector<MetricId> metrics;  // curve-capable: NS, KL, KLG
  AlphaGrid grid;
  double perplexity = 30.0;
  std::string out_path;  // prefix; files are "<out>.<metric>.tsv"
};

int run_scale_curve(const ScaleCurveOptions& opt);

struct SensitivityOptions {
  DataInput data;
  EmbeddingInput embedding;
  int steps = 50;
  std::optional<double> base_sigma;  // default: 2% of embedding diameter
  GrowthSchedule growth = GrowthSchedule::Linear;
  double rescale_low = 0.1;
  double rescale_high = 10.0;
  std::uint64_t seed = 0;
  std::vector<MetricId> metrics;
  double perplexity = 30.0;
  std::string out_path;
};

// Runs the noise ladder and writes the ladder table plus per-metric Pearson
// correlations; byte-identical output for a fixed seed.
int run_sensitivity(const SensitivityOptions& opt);

struct RankOptions {
  DataInput data;
  std::vector<EmbeddingInput> embeddings;
  MetricId metric = MetricId::SNS;
  int trials = 10;
  double rescale_low = 1.0;   // per-embedding random rescale per trial
  double rescale_high = 1.0;  // low == high disables rescaling
  std::uint64_t seed = 0;
  double perplexity = 30.0;
  std::string out_path;
};

// Evaluates the metric over `trials` independently rescaled copies of the
// embeddings and writes ordering/pairwise percentage tables.
int run_rank(const RankOptions& opt);

}  // namespace drqm::cli
