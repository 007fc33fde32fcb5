#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "drqm/types.hpp"

namespace drqm {

// Result of a bracketed scalar minimization. The edge flags are set iff the
// minimizer lies within tol of the corresponding bracket edge; converged is
// false when max_iter ran out before the bracket shrank below tol.
struct BracketSearchResult {
  double minimizer = 0.0;
  double minimum_value = 0.0;
  bool at_lower_edge = false;
  bool at_upper_edge = false;
  bool converged = true;
  int iterations = 0;
};

// L2 isotonic regression by pool-adjacent-violators: returns the
// non-decreasing vector minimizing the sum of squared deviations from y.
// Throws input_error on empty or non-finite input.
std::vector<double> pava_isotonic(const std::vector<double>& y);

// Golden-section minimization of f over [lower, upper]. For unimodal f the
// minimizer is within tol of the argmin; for monotone f the corresponding
// bracket edge is returned with its edge flag set.
BracketSearchResult golden_section_min(const std::function<double(double)>& f,
                                       double lower, double upper, double tol,
                                       int max_iter);

// Defaults used throughout: tol = 1e-8 * (1 + upper), max_iter = 200.
double golden_section_default_tol(double upper);
inline constexpr int kGoldenSectionDefaultMaxIter = 200;

// 1-based ranks; tied values receive the mean of their rank span.
std::vector<double> rank_average_ties(const std::vector<double>& x);

// Spearman rank correlation (Pearson over average-tie ranks).
// Throws undefined_result_error when either input has constant ranks.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// Product-moment correlation. Throws undefined_result_error when either
// input has zero variance, input_error on length mismatch or length < 2.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

namespace detail {

// Neumaier compensated summation; keeps long condensed-pair sums accurate.
class Accumulator {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double total() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

}  // namespace drqm
