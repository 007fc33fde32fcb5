#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "drqm/metrics.hpp"
#include "drqm/types.hpp"

namespace drqm {

// Per-step noise standard deviation: base_sigma * k (Linear) or base_sigma
// alone (Constant). Cumulative variance grows either way.
enum class GrowthSchedule { Linear, Constant };

const char* growth_name(GrowthSchedule g);
GrowthSchedule parse_growth(const std::string& name);

struct LadderParams {
  int steps = 50;
  double base_sigma = 0.0;
  GrowthSchedule growth = GrowthSchedule::Linear;
  double rescale_low = 0.1;
  double rescale_high = 10.0;
  std::uint64_t seed = 0;
  std::vector<MetricId> metrics;
  std::optional<double> perplexity;
};

// One metric evaluation inside a ladder; failed evaluations carry the error
// and leave the run going.
struct MetricCell {
  double value = 0.0;
  bool ok = false;
  std::string error;
};

// A noise-ladder run: step 0 is the unperturbed embedding, step k adds
// Gaussian noise on top of step k-1, and every step is evaluated after an
// independent uniform rescale.
struct LadderRun {
  LadderParams params;
  std::vector<double> noise_sigmas;                // per step, [0] = 0
  std::vector<double> rescale_factors;             // per step
  std::vector<std::vector<MetricCell>> values;     // [step][metric]
};

// n x t matrix with coordinates i.i.d. uniform on [0, 1); deterministic for
// a fixed seed.
DataMatrix random_embedding(std::size_t n, std::size_t t, std::uint64_t seed);

// Largest pairwise distance of the embedding.
double embedding_diameter(const DataMatrix& y);

// Default ladder noise magnitude: 2% of the unperturbed embedding diameter.
double default_base_sigma(const DataMatrix& y0);

// Runs the ladder. Fully reproducible from (seed, params): noise and rescale
// draws come from per-step derived streams.
LadderRun noise_ladder(const DataMatrix& y0, const CondensedDistances& d_hi,
                       const LadderParams& params);

// Pearson correlation between step index and metric value, one entry per
// requested metric. SGS is negated first so that higher correlation always
// means "degrades with noise". Metrics with fewer than 3 valid steps or a
// constant value sequence report no value and a note instead.
struct MetricCorrelation {
  MetricId metric;
  std::optional<double> value;
  std::string note;
};

std::vector<MetricCorrelation> metric_iteration_correlation(
    const LadderRun& run);

// Embeddings ranked best-first under the metric (SGS negated); ties keep
// input order.
struct RankedEmbedding {
  std::string label;
  MetricReport report;
};

std::vector<RankedEmbedding> rank_embeddings(
    const CondensedDistances& d_hi,
    const std::vector<std::pair<std::string, DataMatrix>>& embeddings,
    MetricId metric, std::optional<double> perplexity);

// Frequency table over full orderings and pairwise A-before-B events.
// Ordering keys look like "A<B<C". Pairwise entries cover each unordered
// label pair once, in input order.
struct OrderingTable {
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, double>> ordering_percent;
  std::vector<std::tuple<std::string, std::string, double>> pairwise_percent;
};

// trial_values[t][i] is the metric value of label i in trial t; lower is
// better and ties resolve to the earlier label. Throws input_error when a
// trial does not cover every label.
OrderingTable ordering_frequencies(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& trial_values);

}  // namespace drqm
