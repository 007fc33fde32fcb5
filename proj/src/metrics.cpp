#include "drqm/metrics.hpp"

#include <sstream>
#include <utility>

#include "drqm/distances.hpp"
#include "drqm/stress.hpp"

namespace drqm {

namespace {

struct MetricInfo {
  MetricId id;
  const char* name;
  bool scale_invariant;
  bool needs_perplexity;
};

constexpr MetricInfo kMetricTable[] = {
    {MetricId::RS, "RS", false, false},
    {MetricId::NS, "NS", false, false},
    {MetricId::SNS, "SNS", true, false},
    {MetricId::NMS, "NMS", true, false},
    {MetricId::SGS, "SGS", true, false},
    {MetricId::FSNS, "FSNS", true, false},
    {MetricId::KL, "KL", false, true},
    {MetricId::KLG, "KLG", false, true},
    {MetricId::SNKL, "SNKL", true, true},
    {MetricId::FSKL, "FSKL", true, true},
    {MetricId::KLINF, "KLINF", true, true},
};

const MetricInfo& info(MetricId id) {
  for (const auto& m : kMetricTable)
    if (m.id == id) return m;
  throw input_error("unknown metric id");
}

}  // namespace

const char* metric_name(MetricId id) { return info(id).name; }

MetricId parse_metric(const std::string& name) {
  for (const auto& m : kMetricTable)
    if (name == m.name) return m.id;
  throw input_error("unknown metric name: " + name);
}

std::vector<MetricId> parse_metric_list(const std::string& csv) {
  std::vector<MetricId> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(parse_metric(tok));
  }
  if (out.empty()) throw input_error("empty metric list");
  return out;
}

std::vector<MetricId> all_metrics() {
  std::vector<MetricId> out;
  for (const auto& m : kMetricTable) out.push_back(m.id);
  return out;
}

bool metric_needs_perplexity(MetricId id) { return info(id).needs_perplexity; }
bool metric_is_scale_invariant(MetricId id) { return info(id).scale_invariant; }
bool metric_higher_is_better(MetricId id) { return id == MetricId::SGS; }

MetricEvaluator::MetricEvaluator(CondensedDistances d_hi,
                                 std::optional<double> perplexity)
    : d_hi_(std::move(d_hi)), perplexity_(perplexity) {
  d_hi_.validate();
}

const PairAffinities& MetricEvaluator::p() {
  if (!p_) {
    if (!perplexity_)
      throw input_error("KL-family metrics need a perplexity value");
    p_ = joint_p(calibrate_perplexity(d_hi_, *perplexity_));
  }
  return *p_;
}

const PairAffinities& MetricEvaluator::p_forced() {
  if (!p_forced_) {
    if (!perplexity_)
      throw input_error("KL-family metrics need a perplexity value");
    p_forced_ =
        joint_p(calibrate_perplexity(max_normalize(d_hi_), *perplexity_));
  }
  return *p_forced_;
}

MetricReport MetricEvaluator::evaluate(MetricId id,
                                       const CondensedDistances& d_lo) {
  MetricReport rep;
  rep.metric = metric_name(id);
  switch (id) {
    case MetricId::RS:
      rep.value = raw_stress(d_hi_, d_lo);
      break;
    case MetricId::NS:
      rep.value = normalized_stress(d_hi_, d_lo);
      break;
    case MetricId::SNS: {
      const StressReport sr = scale_normalized_stress(d_hi_, d_lo);
      rep.value = sr.value;
      rep.optimal_alpha = sr.optimal_alpha;
      break;
    }
    case MetricId::NMS:
      rep.value = nonmetric_stress(d_hi_, d_lo);
      break;
    case MetricId::SGS:
      rep.value = shepard_goodness(d_hi_, d_lo);
      break;
    case MetricId::FSNS:
      rep.value = forced_scale_normalized_stress(d_hi_, d_lo);
      break;
    case MetricId::KL:
      rep.value = kl_at_scale(p(), d_lo, 1.0, KernelKind::StudentT);
      break;
    case MetricId::KLG:
      rep.value = kl_at_scale(p(), d_lo, 1.0, KernelKind::Gaussian);
      break;
    case MetricId::SNKL: {
      const KlReport kr = scale_normalized_kl(
          p(), d_lo, default_snkl_bracket_upper(d_hi_, d_lo));
      rep.value = kr.value;
      rep.optimal_alpha = kr.alpha;
      rep.at_lower_edge = kr.at_lower_edge;
      rep.at_upper_edge = kr.at_upper_edge;
      rep.converged = kr.converged;
      break;
    }
    case MetricId::FSKL:
      rep.value = forced_scale_kl_given_p(p_forced(), d_lo);
      break;
    case MetricId::KLINF:
      rep.value = kl_asymptote(p(), d_lo);
      break;
  }
  return rep;
}

}  // namespace drqm
