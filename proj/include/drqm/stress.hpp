#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drqm/types.hpp"

namespace drqm {

// Value of one stress metric; optimal_alpha is filled by the
// scale-normalized variant only.
struct StressReport {
  std::string metric;
  double value = 0.0;
  std::optional<double> optimal_alpha;
};

// Sum over unordered pairs of squared residuals between the two distance
// vectors. Throws input_error on length mismatch.
double raw_stress(const CondensedDistances& d_hi,
                  const CondensedDistances& d_lo);

// sqrt( sum (d_hi - d_lo)^2 / sum d_hi^2 ).
// Throws degenerate_input_error when d_hi is all zero.
double normalized_stress(const CondensedDistances& d_hi,
                         const CondensedDistances& d_lo);

// Normalized stress of the embedding distances scaled by alpha.
// Evaluates to exactly 1 at alpha = 0.
double stress_at_scale(const CondensedDistances& d_hi,
                       const CondensedDistances& d_lo, double alpha);

// Scale minimizing the stress residual: sum(d_hi*d_lo) / sum(d_lo^2).
// Throws degenerate_input_error when d_lo is all zero.
double optimal_scale_alpha(const CondensedDistances& d_hi,
                           const CondensedDistances& d_lo);

// Normalized stress minimized over a uniform scaling of the embedding;
// reports the minimizing scale.
StressReport scale_normalized_stress(const CondensedDistances& d_hi,
                                     const CondensedDistances& d_lo);

// Spearman rank correlation between the two pairwise distance lists
// (higher is better). Throws undefined_result_error when either side is
// constant.
double shepard_goodness(const CondensedDistances& d_hi,
                        const CondensedDistances& d_lo);

// Non-metric (Kruskal) stress: embedding distances are isotonically fitted
// in the order of ascending d_hi (ties broken by d_lo, then pair index) and
// the squared residual is normalized by sum(d_lo^2). No square root.
double nonmetric_stress(const CondensedDistances& d_hi,
                        const CondensedDistances& d_lo);

// Both distance vectors are max-normalized to [0, 1] first; the squared
// residual is divided by the plain (unsquared) sum of the normalized input
// distances, which makes this variant dimensionally inconsistent with
// normalized stress but matches its published form.
double forced_scale_normalized_stress(const CondensedDistances& d_hi,
                                      const CondensedDistances& d_lo);

// Samples stress_at_scale at each alpha, in order.
ScaleCurve stress_scale_curve(const CondensedDistances& d_hi,
                              const CondensedDistances& d_lo,
                              const std::vector<double>& alphas);

}  // namespace drqm
