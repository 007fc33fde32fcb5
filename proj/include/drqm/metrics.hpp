#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drqm/kl.hpp"
#include "drqm/types.hpp"

namespace drqm {

// Stable metric identifiers used by the CLI and the experiment harness.
enum class MetricId {
  RS,     // raw stress
  NS,     // normalized stress
  SNS,    // scale-normalized stress
  NMS,    // non-metric (Kruskal) stress
  SGS,    // Shepard goodness score
  FSNS,   // forced-scale normalized stress
  KL,     // Student-t KL divergence at scale 1
  KLG,    // Gaussian KL divergence at scale 1
  SNKL,   // scale-normalized KL divergence
  FSKL,   // forced-scale KL divergence
  KLINF,  // KL divergence at the large-scale limit
};

const char* metric_name(MetricId id);
MetricId parse_metric(const std::string& name);  // input_error on unknown
std::vector<MetricId> parse_metric_list(const std::string& csv);
std::vector<MetricId> all_metrics();

bool metric_needs_perplexity(MetricId id);
bool metric_is_scale_invariant(MetricId id);
// True only for SGS; rankings negate it so lower-is-better applies uniformly.
bool metric_higher_is_better(MetricId id);

// Outcome of one metric evaluation: the value plus whatever the metric's
// scale search produced (SNS reports the closed-form optimal scale, SNKL the
// numeric minimizer and its bracket-edge diagnostics).
struct MetricReport {
  std::string metric;
  double value = 0.0;
  std::optional<double> optimal_alpha;
  bool at_lower_edge = false;
  bool at_upper_edge = false;
  bool converged = true;
};

// Evaluates metrics for one dataset against many embeddings, building the
// perplexity-calibrated P distributions lazily and only once.
class MetricEvaluator {
 public:
  MetricEvaluator(CondensedDistances d_hi, std::optional<double> perplexity);

  MetricReport evaluate(MetricId id, const CondensedDistances& d_lo);

  const CondensedDistances& input_distances() const { return d_hi_; }

 private:
  const PairAffinities& p();
  const PairAffinities& p_forced();

  CondensedDistances d_hi_;
  std::optional<double> perplexity_;
  std::optional<PairAffinities> p_;
  std::optional<PairAffinities> p_forced_;
};

}  // namespace drqm
