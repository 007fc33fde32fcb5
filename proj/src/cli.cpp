#include "drqm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "drqm/distances.hpp"
#include "drqm/kl.hpp"
#include "drqm/rng.hpp"
#include "drqm/stress.hpp"

namespace drqm::cli {

namespace {

LoadedMatrix load_data(const DataInput& in, ReportDocument& doc) {
  MatrixFile file;
  file.path = in.data_path;
  file.kind =
      in.precomputed ? MatrixFileKind::Distances : MatrixFileKind::Points;
  file.header = in.header;
  LoadedMatrix loaded = load_matrix(file);

  ReportInput ri;
  ri.role = "data";
  ri.path = in.data_path;
  ri.kind = in.precomputed ? "distances" : "points";
  ri.n = loaded.n_points();
  if (!in.precomputed) ri.dims = loaded.points.cols;
  ri.digest = loaded.digest;
  doc.inputs.push_back(ri);
  return loaded;
}

CondensedDistances data_distances(const LoadedMatrix& loaded) {
  return loaded.kind == MatrixFileKind::Points
             ? pairwise_euclidean(loaded.points)
             : loaded.distances;
}

DataMatrix load_embedding(const EmbeddingInput& in, bool header,
                          std::size_t expected_n, ReportDocument& doc) {
  MatrixFile file;
  file.path = in.path;
  file.kind = MatrixFileKind::Points;
  file.header = header;
  LoadedMatrix loaded = load_matrix(file);
  if (loaded.points.rows != expected_n)
    throw input_error("embedding '" + in.label + "' has " +
                      std::to_string(loaded.points.rows) +
                      " points but the dataset has " +
                      std::to_string(expected_n));
  ReportInput ri;
  ri.role = "embedding";
  ri.label = in.label;
  ri.path = in.path;
  ri.kind = "points";
  ri.n = loaded.points.rows;
  ri.dims = loaded.points.cols;
  ri.digest = loaded.digest;
  doc.inputs.push_back(ri);
  return std::move(loaded.points);
}

void emit_report(const ReportDocument& doc, const std::string& out_path) {
  const std::string text = serialize_report(doc);
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    atomic_write_file(out_path, text);
}

std::string metric_list_string(const std::vector<MetricId>& metrics) {
  std::string s;
  for (MetricId m : metrics) {
    if (!s.empty()) s += ',';
    s += metric_name(m);
  }
  return s;
}

bool any_needs_perplexity(const std::vector<MetricId>& metrics) {
  for (MetricId m : metrics)
    if (metric_needs_perplexity(m)) return true;
  return false;
}

}  // namespace

std::vector<EmbeddingInput> resolve_labels(
    const std::vector<std::string>& paths,
    const std::vector<std::string>& labels) {
  if (paths.empty()) throw input_error("at least one --embedding is required");
  if (!labels.empty() && labels.size() != paths.size())
    throw input_error("got " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(paths.size()) +
                      " embeddings");
  std::vector<EmbeddingInput> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    EmbeddingInput e;
    e.path = paths[i];
    e.label = !labels.empty() ? labels[i]
                              : std::filesystem::path(paths[i]).stem().string();
    if (!seen.insert(e.label).second)
      throw input_error("duplicate embedding label '" + e.label +
                        "'; pass distinct --label values");
    out.push_back(std::move(e));
  }
  return out;
}

int run_metrics(const MetricsOptions& opt) {
  if (opt.metrics.empty()) throw input_error("no metrics requested");
  ReportDocument doc;
  doc.command = "metrics";

  const LoadedMatrix data = load_data(opt.data, doc);
  const CondensedDistances d_hi = data_distances(data);

  std::vector<std::pair<std::string, CondensedDistances>> embeddings;
  for (const auto& e : opt.embeddings) {
    const DataMatrix y = load_embedding(e, opt.data.header, d_hi.n_points, doc);
    embeddings.emplace_back(e.label, pairwise_euclidean(y));
  }

  doc.params.emplace_back("metrics", metric_list_string(opt.metrics));
  if (any_needs_perplexity(opt.metrics))
    doc.params.emplace_back("perplexity", format_g12(opt.perplexity));

  MetricEvaluator evaluator(d_hi, opt.perplexity);
  bool any_failed = false;
  for (const auto& [label, d_lo] : embeddings) {
    for (MetricId m : opt.metrics) {
      ReportMetricEntry entry;
      entry.label = label;
      entry.metric = metric_name(m);
      try {
        entry.report = evaluator.evaluate(m, d_lo);
      } catch (const error& e) {
        entry.ok = false;
        entry.error = e.what();
        any_failed = true;
      }
      doc.metrics.push_back(std::move(entry));
    }
  }
  doc.status = any_failed ? "partial" : "ok";
  emit_report(doc, opt.out_path);
  return any_failed ? kExitPartialFailure : kExitOk;
}

std::vector<double> make_alpha_grid(const AlphaGrid& grid) {
  if (grid.count < 1) throw input_error("alpha grid count must be >= 1");
  if (!(grid.max >= grid.min)) throw input_error("alpha grid max < min");
  if (grid.log_spacing && !(grid.min > 0.0))
    throw input_error("log-spaced alpha grid needs min > 0");
  std::vector<double> alphas;
  alphas.reserve(grid.count);
  if (grid.count == 1) {
    alphas.push_back(grid.min);
    return alphas;
  }
  for (int i = 0; i < grid.count; ++i) {
    const double f = static_cast<double>(i) / (grid.count - 1);
    alphas.push_back(grid.log_spacing
                         ? grid.min * std::pow(grid.max / grid.min, f)
                         : grid.min + (grid.max - grid.min) * f);
  }
  return alphas;
}

int run_scale_curve(const ScaleCurveOptions& opt) {
  if (opt.metrics.empty()) throw input_error("no metrics requested");
  if (opt.out_path.empty())
    throw input_error("scale-curve needs --out (used as a file prefix)");

  ReportDocument doc;  // provenance only; curves go to per-metric files
  const LoadedMatrix data = load_data(opt.data, doc);
  const CondensedDistances d_hi = data_distances(data);
  const DataMatrix y =
      load_embedding(opt.embedding, opt.data.header, d_hi.n_points, doc);
  const CondensedDistances d_lo = pairwise_euclidean(y);
  const std::vector<double> alphas = make_alpha_grid(opt.grid);

  std::optional<PairAffinities> p;
  const auto get_p = [&]() -> const PairAffinities& {
    if (!p) p = joint_p(calibrate_perplexity(d_hi, opt.perplexity));
    return *p;
  };

  bool any_failed = false;
  for (MetricId m : opt.metrics) {
    ScaleCurve curve;
    switch (m) {
      case MetricId::NS:
        curve = stress_scale_curve(d_hi, d_lo, alphas);
        break;
      case MetricId::KL:
        curve = kl_scale_curve(get_p(), d_lo, alphas, KernelKind::StudentT);
        break;
      case MetricId::KLG:
        curve = kl_scale_curve(get_p(), d_lo, alphas, KernelKind::Gaussian);
        break;
      default:
        throw input_error(std::string("metric ") + metric_name(m) +
                          " has no scale curve (use NS, KL, or KLG)");
    }
    std::string text = std::string("# alpha\t") + metric_name(m) + "\n";
    for (const CurveSample& s : curve.samples) {
      if (s.ok)
        text += format_g12(s.alpha) + "\t" + format_g12(s.value) + "\n";
      else
        text += "# alpha=" + format_g12(s.alpha) + " error=" + s.error + "\n";
      any_failed = any_failed || !s.ok;
    }
    atomic_write_file(opt.out_path + "." + metric_name(m) + ".tsv", text);
  }
  return any_failed ? kExitPartialFailure : kExitOk;
}

int run_sensitivity(const SensitivityOptions& opt) {
  if (opt.metrics.empty()) throw input_error("no metrics requested");
  ReportDocument doc;
  doc.command = "sensitivity";

  const LoadedMatrix data = load_data(opt.data, doc);
  const CondensedDistances d_hi = data_distances(data);
  const DataMatrix y0 =
      load_embedding(opt.embedding, opt.data.header, d_hi.n_points, doc);

  LadderParams params;
  params.steps = opt.steps;
  params.base_sigma =
      opt.base_sigma ? *opt.base_sigma : default_base_sigma(y0);
  params.growth = opt.growth;
  params.rescale_low = opt.rescale_low;
  params.rescale_high = opt.rescale_high;
  params.seed = opt.seed;
  params.metrics = opt.metrics;
  params.perplexity = opt.perplexity;

  doc.params.emplace_back("steps", std::to_string(params.steps));
  doc.params.emplace_back("base-sigma", format_g12(params.base_sigma));
  doc.params.emplace_back("growth", growth_name(params.growth));
  doc.params.emplace_back("rescale-low", format_g12(params.rescale_low));
  doc.params.emplace_back("rescale-high", format_g12(params.rescale_high));
  doc.params.emplace_back("seed", std::to_string(params.seed));
  doc.params.emplace_back("metrics", metric_list_string(params.metrics));
  if (any_needs_perplexity(params.metrics))
    doc.params.emplace_back("perplexity", format_g12(opt.perplexity));

  LadderRun run = noise_ladder(y0, d_hi, params);
  doc.correlations = metric_iteration_correlation(run);

  bool any_failed = false;
  for (const auto& step : run.values)
    for (const auto& cell : step) any_failed = any_failed || !cell.ok;

  doc.ladder = std::move(run);
  doc.status = any_failed ? "partial" : "ok";
  emit_report(doc, opt.out_path);
  return any_failed ? kExitPartialFailure : kExitOk;
}

int run_rank(const RankOptions& opt) {
  if (opt.trials < 1) throw input_error("rank needs trials >= 1");
  if (!(opt.rescale_low > 0.0) || !(opt.rescale_high >= opt.rescale_low))
    throw input_error("rank needs 0 < rescale-low <= rescale-high");
  ReportDocument doc;
  doc.command = "rank";

  const LoadedMatrix data = load_data(opt.data, doc);
  const CondensedDistances d_hi = data_distances(data);

  std::vector<std::string> labels;
  std::vector<CondensedDistances> base;
  for (const auto& e : opt.embeddings) {
    const DataMatrix y = load_embedding(e, opt.data.header, d_hi.n_points, doc);
    labels.push_back(e.label);
    base.push_back(pairwise_euclidean(y));
  }
  if (labels.size() < 2)
    throw input_error("rank needs at least 2 embeddings");

  doc.params.emplace_back("metric", metric_name(opt.metric));
  doc.params.emplace_back("trials", std::to_string(opt.trials));
  doc.params.emplace_back("rescale-low", format_g12(opt.rescale_low));
  doc.params.emplace_back("rescale-high", format_g12(opt.rescale_high));
  doc.params.emplace_back("seed", std::to_string(opt.seed));
  if (metric_needs_perplexity(opt.metric))
    doc.params.emplace_back("perplexity", format_g12(opt.perplexity));

  MetricEvaluator evaluator(d_hi, opt.perplexity);
  const bool negate = metric_higher_is_better(opt.metric);
  SplitRng rng(opt.seed);

  std::vector<std::vector<double>> trial_values(
      opt.trials, std::vector<double>(labels.size()));
  for (int t = 0; t < opt.trials; ++t) {
    for (std::size_t e = 0; e < labels.size(); ++e) {
      double factor = opt.rescale_low;
      if (opt.rescale_high > opt.rescale_low) {
        auto g = rng.stream(static_cast<std::uint64_t>(t) * labels.size() + e);
        factor = uniform_in(g, opt.rescale_low, opt.rescale_high);
      }
      const CondensedDistances d_lo = scale_distances(base[e], factor);
      const double v = evaluator.evaluate(opt.metric, d_lo).value;
      trial_values[t][e] = negate ? -v : v;
    }
  }

  doc.ordering = ordering_frequencies(labels, trial_values);
  emit_report(doc, opt.out_path);
  return kExitOk;
}

}  // namespace drqm::cli
