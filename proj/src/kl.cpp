#include "drqm/kl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drqm/distances.hpp"
#include "drqm/numerics.hpp"

namespace drqm {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Entropy state of one conditional row at a fixed bandwidth. Distances are
// shifted by the row minimum before exponentiation so tiny bandwidths do not
// underflow the whole row; the conditional distribution is shift-invariant.
struct RowKernel {
  double perplexity;     // exp of the entropy in nats = 2^(entropy in bits)
  double entropy_bits;
};

RowKernel row_kernel(const std::vector<double>& sq_dists, double sigma2,
                     std::vector<double>& weights) {
  const double beta = 0.5 / sigma2;
  const double d_min = *std::min_element(sq_dists.begin(), sq_dists.end());
  detail::Accumulator sum_w, sum_wd;
  for (std::size_t j = 0; j < sq_dists.size(); ++j) {
    const double shifted = sq_dists[j] - d_min;
    const double w = std::exp(-beta * shifted);
    weights[j] = w;
    sum_w.add(w);
    sum_wd.add(w * shifted);
  }
  const double s = sum_w.total();
  // s >= 1 always: the minimum-distance entry contributes exp(0).
  const double h_nats = beta * sum_wd.total() / s + std::log(s);
  return {std::exp(h_nats), h_nats / kLn2};
}

void check_pair_match(const PairAffinities& p, const CondensedDistances& d) {
  if (p.n_points != d.n_points || p.values.size() != d.values.size())
    throw input_error("affinities and distances have mismatched sizes");
}

}  // namespace

const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::StudentT: return "student-t";
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::InverseSquare: return "inverse-square";
  }
  return "unknown";
}

std::vector<double> conditional_given_sigma(const CondensedDistances& d_hi,
                                            std::size_t i, double sigma) {
  d_hi.validate();
  if (i >= d_hi.n_points)
    throw input_error("conditional_given_sigma: point index out of range");
  if (!(sigma > 0.0))
    throw input_error("conditional_given_sigma: sigma must be positive");
  const std::size_t n = d_hi.n_points;
  std::vector<double> sq(n - 1);
  std::size_t c = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double d = j < i ? d_hi.values[condensed_index(j, i, n)]
                           : d_hi.values[condensed_index(i, j, n)];
    sq[c++] = d * d;
  }
  std::vector<double> w(n - 1);
  row_kernel(sq, sigma * sigma, w);
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<double> out(n, 0.0);
  c = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    out[j] = w[c++] / total;
  }
  return out;
}

PerplexityCalibration calibrate_perplexity(const CondensedDistances& d_hi,
                                           double perplexity, double tol,
                                           int max_iter) {
  d_hi.validate();
  const std::size_t n = d_hi.n_points;
  if (!(perplexity > 1.0) || !(perplexity < static_cast<double>(n - 1)))
    throw input_error("perplexity must satisfy 1 < perplexity < N-1 (got " +
                      std::to_string(perplexity) + " for N=" +
                      std::to_string(n) + ")");
  if (!(tol > 0.0)) throw input_error("calibration tol must be positive");

  PerplexityCalibration cal;
  cal.n_points = n;
  cal.target_perplexity = perplexity;
  cal.sigmas.resize(n);
  cal.achieved_entropy_bits.resize(n);
  cal.conditional.assign(n * n, 0.0);

  std::vector<double> sq(n - 1), weights(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = j < i ? d_hi.values[condensed_index(j, i, n)]
                             : d_hi.values[condensed_index(i, j, n)];
      sq[c++] = d * d;
    }

    // Bisection on log(sigma^2); perplexity is non-decreasing in sigma.
    double lo = std::log(1e-20);
    double hi = std::log(1e20);
    const double widen = std::log(1e10);
    for (int e = 0; e < 2 && row_kernel(sq, std::exp(lo), weights).perplexity >
                                 perplexity; ++e)
      lo -= widen;
    for (int e = 0; e < 2 && row_kernel(sq, std::exp(hi), weights).perplexity <
                                 perplexity; ++e)
      hi += widen;

    bool found = false;
    double x = 0.5 * (lo + hi);
    RowKernel rk{0.0, 0.0};
    for (int it = 0; it < max_iter; ++it) {
      x = 0.5 * (lo + hi);
      rk = row_kernel(sq, std::exp(x), weights);
      if (std::abs(rk.perplexity - perplexity) <= tol) {
        found = true;
        break;
      }
      if (rk.perplexity > perplexity)
        hi = x;
      else
        lo = x;
    }
    if (!found)
      throw calibration_error(
          "perplexity search did not converge for point " + std::to_string(i) +
          " (achieved 2^H=" + std::to_string(rk.perplexity) + ", target " +
          std::to_string(perplexity) + ")");

    cal.sigmas[i] = std::sqrt(std::exp(x));
    cal.achieved_entropy_bits[i] = rk.entropy_bits;
    double total = 0.0;
    for (double w : weights) total += w;
    c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      cal.conditional[i * n + j] = weights[c++] / total;
    }
  }
  return cal;
}

PairAffinities joint_p(const PerplexityCalibration& cal) {
  const std::size_t n = cal.n_points;
  if (n < 2 || cal.conditional.size() != n * n)
    throw input_error("joint_p: calibration is incomplete");
  PairAffinities p;
  p.n_points = n;
  p.values.resize(CondensedDistances::pair_count(n));
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++k)
      p.values[k] =
          (cal.conditional[i * n + j] + cal.conditional[j * n + i]) * scale;
  return p;
}

double default_inverse_square_epsilon(const CondensedDistances& d_lo) {
  // Proportional to the largest squared distance so the floor engages for
  // the same pairs at every uniform rescale of the embedding; the absolute
  // fallback only matters for a fully collapsed embedding.
  double mx = 0.0;
  for (double v : d_lo.values) mx = std::max(mx, v * v);
  return mx > 0.0 ? 1e-12 * mx : 1e-12;
}

PairAffinities q_affinities(const CondensedDistances& d_lo, double alpha,
                            KernelKind kernel, double epsilon) {
  if (d_lo.values.empty()) throw input_error("q_affinities: empty distances");
  if (kernel != KernelKind::InverseSquare && !(alpha >= 0.0))
    throw input_error("q_affinities: alpha must be >= 0");

  PairAffinities q;
  q.n_points = d_lo.n_points;
  q.values.resize(d_lo.values.size());

  detail::Accumulator total;
  const double a2 = alpha * alpha;
  for (std::size_t k = 0; k < d_lo.values.size(); ++k) {
    const double d2 = d_lo.values[k] * d_lo.values[k];
    double w = 0.0;
    switch (kernel) {
      case KernelKind::StudentT:
        w = 1.0 / (1.0 + a2 * d2);
        break;
      case KernelKind::Gaussian:
        w = std::exp(-a2 * d2);
        break;
      case KernelKind::InverseSquare:
        w = 1.0 / std::max(d2, epsilon);
        break;
    }
    q.values[k] = w;
    total.add(w);
  }
  const double t = 2.0 * total.total();
  if (!(t > 0.0) || !std::isfinite(t))
    throw undefined_result_error(
        std::string("q_affinities: normalizer degenerate for ") +
        kernel_name(kernel) + " kernel at alpha=" + std::to_string(alpha));
  for (double& v : q.values) v /= t;
  return q;
}

double kl_divergence(const PairAffinities& p, const PairAffinities& q) {
  if (p.n_points != q.n_points || p.values.size() != q.values.size())
    throw input_error("kl_divergence: distributions of different size");
  detail::Accumulator acc;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    const double pv = p.values[k];
    if (pv == 0.0) continue;
    const double qv = q.values[k];
    if (qv <= 0.0)
      throw undefined_result_error(
          "kl_divergence: q is zero at a pair where p > 0");
    acc.add(pv * std::log(pv / qv));
  }
  double v = 2.0 * acc.total();
  // Gibbs bounds the true value at >= 0 up to normalization slack; anything
  // materially below zero means the inputs were not distributions.
  if (v < 0.0) {
    if (v < -1e-9)
      throw input_error("kl_divergence: inputs are not normalized");
    v = 0.0;
  }
  return v;
}

double kl_at_zero(const PairAffinities& p) {
  if (p.n_points < 2) throw input_error("kl_at_zero: need n >= 2");
  detail::Accumulator acc;
  for (double pv : p.values)
    if (pv > 0.0) acc.add(pv * std::log(pv));
  const double n = static_cast<double>(p.n_points);
  return 2.0 * acc.total() + std::log(n * (n - 1.0));
}

double kl_at_scale(const PairAffinities& p, const CondensedDistances& d_lo,
                   double alpha, KernelKind kernel) {
  check_pair_match(p, d_lo);
  const double eps = kernel == KernelKind::InverseSquare
                         ? default_inverse_square_epsilon(d_lo)
                         : 0.0;
  return kl_divergence(p, q_affinities(d_lo, alpha, kernel, eps));
}

KlReport scale_normalized_kl(const PairAffinities& p,
                             const CondensedDistances& d_lo,
                             double bracket_upper) {
  check_pair_match(p, d_lo);
  p.validate();
  if (!(bracket_upper > 0.0))
    throw input_error("scale_normalized_kl: bracket upper must be positive");

  const auto f = [&](double a) {
    return kl_at_scale(p, d_lo, a, KernelKind::StudentT);
  };
  const BracketSearchResult res =
      golden_section_min(f, 0.0, bracket_upper,
                         golden_section_default_tol(bracket_upper),
                         kGoldenSectionDefaultMaxIter);

  KlReport rep;
  rep.kernel = KernelKind::StudentT;
  rep.value = res.minimum_value;
  rep.alpha = res.minimizer;
  rep.at_lower_edge = res.at_lower_edge;
  rep.at_upper_edge = res.at_upper_edge;
  rep.converged = res.converged;
  rep.at_zero = kl_at_zero(p);
  rep.asymptote = kl_asymptote(p, d_lo);
  rep.second_derivative_at_zero = kl_second_derivative_at_zero(p, d_lo);
  return rep;
}

double default_snkl_bracket_upper(const CondensedDistances& d_hi,
                                  const CondensedDistances& d_lo) {
  const double mx_hi = *std::max_element(d_hi.values.begin(),
                                         d_hi.values.end());
  const double mx_lo = *std::max_element(d_lo.values.begin(),
                                         d_lo.values.end());
  if (!(mx_lo > 0.0))
    throw degenerate_input_error(
        "snkl bracket: embedding distances all zero");
  if (!(mx_hi > 0.0))
    throw degenerate_input_error("snkl bracket: input distances all zero");
  return 100.0 * mx_hi / mx_lo;
}

double forced_scale_kl(const CondensedDistances& d_hi,
                       const CondensedDistances& d_lo, double perplexity,
                       double calibration_tol, int calibration_max_iter) {
  if (d_hi.values.size() != d_lo.values.size())
    throw input_error("forced_scale_kl: distance vectors of different size");
  const CondensedDistances hi = max_normalize(d_hi);
  const PairAffinities p = joint_p(
      calibrate_perplexity(hi, perplexity, calibration_tol,
                           calibration_max_iter));
  return forced_scale_kl_given_p(p, d_lo);
}

double forced_scale_kl_given_p(const PairAffinities& p_on_normalized_hi,
                               const CondensedDistances& d_lo) {
  check_pair_match(p_on_normalized_hi, d_lo);
  const CondensedDistances lo = max_normalize(d_lo);
  const PairAffinities q = q_affinities(lo, 1.0, KernelKind::StudentT);
  return kl_divergence(p_on_normalized_hi, q);
}

double kl_asymptote(const PairAffinities& p, const CondensedDistances& d_lo,
                    double epsilon) {
  check_pair_match(p, d_lo);
  return kl_divergence(
      p, q_affinities(d_lo, 0.0, KernelKind::InverseSquare, epsilon));
}

double kl_asymptote(const PairAffinities& p, const CondensedDistances& d_lo) {
  return kl_asymptote(p, d_lo, default_inverse_square_epsilon(d_lo));
}

double kl_second_derivative_at_zero(const PairAffinities& p,
                                    const CondensedDistances& d_lo) {
  check_pair_match(p, d_lo);
  const double n = static_cast<double>(p.n_points);
  detail::Accumulator sq_sum;
  for (double d : d_lo.values) sq_sum.add(d * d);
  const double mean_sq = 2.0 * sq_sum.total() / (n * (n - 1.0));
  detail::Accumulator acc;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    const double d2 = d_lo.values[k] * d_lo.values[k];
    acc.add(p.values[k] * (d2 - mean_sq));
  }
  return 4.0 * acc.total();
}

ScaleCurve kl_scale_curve(const PairAffinities& p,
                          const CondensedDistances& d_lo,
                          const std::vector<double>& alphas,
                          KernelKind kernel) {
  if (alphas.empty()) throw input_error("kl_scale_curve: empty alpha grid");
  check_pair_match(p, d_lo);
  ScaleCurve curve;
  curve.samples.reserve(alphas.size());
  for (double a : alphas) {
    CurveSample s;
    s.alpha = a;
    try {
      s.value = kl_at_scale(p, d_lo, a, kernel);
    } catch (const undefined_result_error& e) {
      s.ok = false;
      s.error = e.what();
      s.value = std::numeric_limits<double>::quiet_NaN();
    }
    curve.samples.push_back(s);
  }
  return curve;
}

}  // namespace drqm
