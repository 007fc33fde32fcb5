#include "drqm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "drqm/distances.hpp"
#include "drqm/numerics.hpp"
#include "drqm/rng.hpp"

namespace drqm {

const char* growth_name(GrowthSchedule g) {
  return g == GrowthSchedule::Linear ? "linear" : "constant";
}

GrowthSchedule parse_growth(const std::string& name) {
  if (name == "linear") return GrowthSchedule::Linear;
  if (name == "constant") return GrowthSchedule::Constant;
  throw input_error("unknown growth schedule: " + name);
}

DataMatrix random_embedding(std::size_t n, std::size_t t, std::uint64_t seed) {
  if (n < 2 || t < 1) throw input_error("random_embedding: need n >= 2, t >= 1");
  DataMatrix y(n, t);
  SplitRng rng(seed);
  auto g = rng.stream(0);
  for (double& v : y.values) v = uniform01(g);
  return y;
}

double embedding_diameter(const DataMatrix& y) {
  const CondensedDistances d = pairwise_euclidean(y);
  return *std::max_element(d.values.begin(), d.values.end());
}

double default_base_sigma(const DataMatrix& y0) {
  return 0.02 * embedding_diameter(y0);
}

LadderRun noise_ladder(const DataMatrix& y0, const CondensedDistances& d_hi,
                       const LadderParams& params) {
  y0.validate();
  d_hi.validate();
  if (y0.rows != d_hi.n_points)
    throw input_error("noise_ladder: embedding size does not match distances");
  if (params.steps < 1) throw input_error("noise_ladder: steps must be >= 1");
  if (!(params.base_sigma >= 0.0))
    throw input_error("noise_ladder: base_sigma must be >= 0");
  if (!(params.rescale_low > 0.0) ||
      !(params.rescale_high >= params.rescale_low))
    throw input_error("noise_ladder: need 0 < rescale_low <= rescale_high");
  if (params.metrics.empty()) throw input_error("noise_ladder: no metrics");
  for (MetricId m : params.metrics)
    if (metric_needs_perplexity(m) && !params.perplexity)
      throw input_error(std::string("noise_ladder: metric ") + metric_name(m) +
                        " needs a perplexity");

  LadderRun run;
  run.params = params;
  run.noise_sigmas.resize(params.steps + 1, 0.0);
  run.rescale_factors.resize(params.steps + 1, 1.0);
  run.values.assign(params.steps + 1,
                    std::vector<MetricCell>(params.metrics.size()));

  MetricEvaluator evaluator(d_hi, params.perplexity);
  SplitRng rng(params.seed);
  DataMatrix y = y0;

  for (int k = 0; k <= params.steps; ++k) {
    if (k > 0) {
      const double mult =
          params.growth == GrowthSchedule::Linear ? static_cast<double>(k) : 1.0;
      const double sigma = params.base_sigma * mult;
      run.noise_sigmas[k] = sigma;
      auto g = rng.stream(2 * static_cast<std::uint64_t>(k));
      for (double& v : y.values) v += sigma * normal01(g);
    }
    double u = params.rescale_low;
    if (params.rescale_high > params.rescale_low) {
      auto g = rng.stream(2 * static_cast<std::uint64_t>(k) + 1);
      u = uniform_in(g, params.rescale_low, params.rescale_high);
    }
    run.rescale_factors[k] = u;

    const CondensedDistances d_lo =
        scale_distances(pairwise_euclidean(y), u);
    for (std::size_t m = 0; m < params.metrics.size(); ++m) {
      MetricCell& cell = run.values[k][m];
      try {
        cell.value = evaluator.evaluate(params.metrics[m], d_lo).value;
        cell.ok = true;
      } catch (const error& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  }
  return run;
}

std::vector<MetricCorrelation> metric_iteration_correlation(
    const LadderRun& run) {
  std::vector<MetricCorrelation> out;
  for (std::size_t m = 0; m < run.params.metrics.size(); ++m) {
    MetricCorrelation mc;
    mc.metric = run.params.metrics[m];
    const bool negate = metric_higher_is_better(mc.metric);

    std::vector<double> steps, vals;
    for (std::size_t k = 0; k < run.values.size(); ++k) {
      const MetricCell& cell = run.values[k][m];
      if (!cell.ok) continue;
      steps.push_back(static_cast<double>(k));
      vals.push_back(negate ? -cell.value : cell.value);
    }
    if (vals.size() < 3) {
      mc.note = "fewer than 3 valid steps";
      out.push_back(mc);
      continue;
    }
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    const double span = *hi - *lo;
    const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
    if (span <= 1e-12 * scale) {
      mc.note = "constant metric sequence";
      out.push_back(mc);
      continue;
    }
    try {
      mc.value = pearson_r(steps, vals);
    } catch (const undefined_result_error&) {
      mc.note = "constant metric sequence";
    }
    out.push_back(mc);
  }
  return out;
}

std::vector<RankedEmbedding> rank_embeddings(
    const CondensedDistances& d_hi,
    const std::vector<std::pair<std::string, DataMatrix>>& embeddings,
    MetricId metric, std::optional<double> perplexity) {
  if (embeddings.size() < 2)
    throw input_error("rank_embeddings: need at least 2 embeddings");
  for (const auto& [label, y] : embeddings)
    if (y.rows != d_hi.n_points)
      throw input_error("rank_embeddings: embedding '" + label +
                        "' does not match the dataset size");

  MetricEvaluator evaluator(d_hi, perplexity);
  std::vector<RankedEmbedding> ranked;
  ranked.reserve(embeddings.size());
  for (const auto& [label, y] : embeddings) {
    RankedEmbedding re;
    re.label = label;
    re.report = evaluator.evaluate(metric, pairwise_euclidean(y));
    ranked.push_back(std::move(re));
  }

  const bool negate = metric_higher_is_better(metric);
  std::vector<std::size_t> order(ranked.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const double va = negate ? -ranked[a].report.value
                                              : ranked[a].report.value;
                     const double vb = negate ? -ranked[b].report.value
                                              : ranked[b].report.value;
                     return va < vb;
                   });
  std::vector<RankedEmbedding> out;
  out.reserve(ranked.size());
  for (std::size_t i : order) out.push_back(std::move(ranked[i]));
  return out;
}

OrderingTable ordering_frequencies(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& trial_values) {
  if (labels.size() < 2)
    throw input_error("ordering_frequencies: need at least 2 labels");
  if (trial_values.empty())
    throw input_error("ordering_frequencies: no trials");
  for (const auto& trial : trial_values)
    if (trial.size() != labels.size())
      throw input_error(
          "ordering_frequencies: a trial does not cover every label");

  const std::size_t n = labels.size();
  const double trials = static_cast<double>(trial_values.size());

  std::map<std::string, std::size_t> ordering_counts;
  std::vector<std::vector<std::size_t>> before_counts(
      n, std::vector<std::size_t>(n, 0));

  std::vector<std::size_t> order(n);
  for (const auto& trial : trial_values) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Lower value first; ties keep label order.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return trial[a] < trial[b];
                     });
    std::string key = labels[order[0]];
    for (std::size_t i = 1; i < n; ++i) key += "<" + labels[order[i]];
    ++ordering_counts[key];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        ++before_counts[order[i]][order[j]];
  }

  OrderingTable table;
  table.labels = labels;
  for (const auto& [key, count] : ordering_counts)
    table.ordering_percent.emplace_back(
        key, 100.0 * static_cast<double>(count) / trials);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      table.pairwise_percent.emplace_back(
          labels[i], labels[j],
          100.0 * static_cast<double>(before_counts[i][j]) / trials);
  return table;
}

}  // namespace drqm
