#include "drqm/stress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drqm/distances.hpp"
#include "drqm/numerics.hpp"

namespace drqm {

namespace {

void check_pairing(const CondensedDistances& d_hi,
                   const CondensedDistances& d_lo) {
  if (d_hi.values.size() != d_lo.values.size())
    throw input_error("distance vectors have mismatched lengths");
  if (d_hi.values.empty()) throw input_error("empty distance vectors");
}

double sum_squares(const std::vector<double>& v) {
  detail::Accumulator acc;
  for (double x : v) acc.add(x * x);
  return acc.total();
}

}  // namespace

double raw_stress(const CondensedDistances& d_hi,
                  const CondensedDistances& d_lo) {
  check_pairing(d_hi, d_lo);
  detail::Accumulator acc;
  for (std::size_t k = 0; k < d_hi.values.size(); ++k) {
    const double r = d_hi.values[k] - d_lo.values[k];
    acc.add(r * r);
  }
  return acc.total();
}

double stress_at_scale(const CondensedDistances& d_hi,
                       const CondensedDistances& d_lo, double alpha) {
  check_pairing(d_hi, d_lo);
  if (!(alpha >= 0.0)) throw input_error("stress_at_scale: alpha must be >= 0");
  detail::Accumulator num, den;
  for (std::size_t k = 0; k < d_hi.values.size(); ++k) {
    const double r = d_hi.values[k] - alpha * d_lo.values[k];
    num.add(r * r);
    den.add(d_hi.values[k] * d_hi.values[k]);
  }
  const double d = den.total();
  if (d <= 0.0)
    throw degenerate_input_error("normalized stress: input distances all zero");
  return std::sqrt(num.total() / d);
}

double normalized_stress(const CondensedDistances& d_hi,
                         const CondensedDistances& d_lo) {
  return stress_at_scale(d_hi, d_lo, 1.0);
}

double optimal_scale_alpha(const CondensedDistances& d_hi,
                           const CondensedDistances& d_lo) {
  check_pairing(d_hi, d_lo);
  detail::Accumulator cross, lo2;
  for (std::size_t k = 0; k < d_hi.values.size(); ++k) {
    cross.add(d_hi.values[k] * d_lo.values[k]);
    lo2.add(d_lo.values[k] * d_lo.values[k]);
  }
  const double denom = lo2.total();
  if (denom <= 0.0)
    throw degenerate_input_error(
        "optimal_scale_alpha: embedding distances all zero");
  return cross.total() / denom;
}

StressReport scale_normalized_stress(const CondensedDistances& d_hi,
                                     const CondensedDistances& d_lo) {
  const double alpha = optimal_scale_alpha(d_hi, d_lo);
  StressReport rep;
  rep.metric = "SNS";
  rep.optimal_alpha = alpha;
  rep.value = stress_at_scale(d_hi, d_lo, alpha);
  return rep;
}

double shepard_goodness(const CondensedDistances& d_hi,
                        const CondensedDistances& d_lo) {
  check_pairing(d_hi, d_lo);
  try {
    return spearman_rho(d_hi.values, d_lo.values);
  } catch (const undefined_result_error&) {
    throw undefined_result_error(
        "shepard_goodness: undefined when either distance list is constant");
  }
}

double nonmetric_stress(const CondensedDistances& d_hi,
                        const CondensedDistances& d_lo) {
  check_pairing(d_hi, d_lo);
  const std::size_t m = d_hi.values.size();
  const double den = sum_squares(d_lo.values);
  if (den <= 0.0)
    throw degenerate_input_error(
        "nonmetric_stress: embedding distances all zero");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (d_hi.values[a] != d_hi.values[b])
      return d_hi.values[a] < d_hi.values[b];
    if (d_lo.values[a] != d_lo.values[b])
      return d_lo.values[a] < d_lo.values[b];
    return a < b;
  });

  std::vector<double> lo_sorted(m);
  for (std::size_t k = 0; k < m; ++k) lo_sorted[k] = d_lo.values[order[k]];
  const std::vector<double> disparities = pava_isotonic(lo_sorted);

  detail::Accumulator num;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = disparities[k] - lo_sorted[k];
    num.add(r * r);
  }
  return num.total() / den;
}

double forced_scale_normalized_stress(const CondensedDistances& d_hi,
                                      const CondensedDistances& d_lo) {
  check_pairing(d_hi, d_lo);
  const CondensedDistances hi = max_normalize(d_hi);
  const CondensedDistances lo = max_normalize(d_lo);
  detail::Accumulator num, den;
  for (std::size_t k = 0; k < hi.values.size(); ++k) {
    const double r = hi.values[k] - lo.values[k];
    num.add(r * r);
    den.add(hi.values[k]);
  }
  return num.total() / den.total();
}

ScaleCurve stress_scale_curve(const CondensedDistances& d_hi,
                              const CondensedDistances& d_lo,
                              const std::vector<double>& alphas) {
  if (alphas.empty()) throw input_error("stress_scale_curve: empty alpha grid");
  ScaleCurve curve;
  curve.samples.reserve(alphas.size());
  for (double a : alphas) {
    CurveSample s;
    s.alpha = a;
    s.value = stress_at_scale(d_hi, d_lo, a);
    curve.samples.push_back(s);
  }
  return curve;
}

}  // namespace drqm
