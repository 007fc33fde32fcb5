#pragma once

#include <cstddef>
#include <vector>

#include "drqm/types.hpp"

namespace drqm {

// Low-dimensional similarity kernel. StudentT realizes q ~ (1+a^2 d^2)^-1,
// Gaussian realizes q ~ exp(-a^2 d^2), InverseSquare realizes the large-scale
// limit q ~ d^-2 of the Student-t kernel.
enum class KernelKind { StudentT, Gaussian, InverseSquare };

const char* kernel_name(KernelKind k);

// Per-point Gaussian bandwidths calibrated so each point's conditional
// neighbor distribution has the requested perplexity (2 to the Shannon
// entropy in bits). The conditional matrix is stored dense N x N, row-major,
// with an exactly-zero diagonal; row i holds p_{j|i} and sums to 1.
struct PerplexityCalibration {
  std::size_t n_points = 0;
  double target_perplexity = 0.0;
  std::vector<double> sigmas;
  std::vector<double> conditional;
  std::vector<double> achieved_entropy_bits;

  double conditional_at(std::size_t i, std::size_t j) const {
    return conditional[i * n_points + j];
  }
};

// Diagnostics attached to a KL evaluation: the value itself, the kernel and
// scale used (or found), the closed-form value at scale 0, the large-scale
// asymptote, the second derivative at 0, and bracket-edge flags from the
// scale search.
struct KlReport {
  double value = 0.0;
  KernelKind kernel = KernelKind::StudentT;
  double alpha = 0.0;
  double at_zero = 0.0;
  double asymptote = 0.0;
  double second_derivative_at_zero = 0.0;
  bool at_lower_edge = false;
  bool at_upper_edge = false;
  bool converged = true;
};

// Per-point binary search on sigma (in log sigma^2 space) such that
// 2^H(p_.|i) matches the target perplexity within tol.
// Requires 1 < perplexity < N-1; throws calibration_error naming the point
// index when a search does not converge within max_iter.
PerplexityCalibration calibrate_perplexity(const CondensedDistances& d_hi,
                                           double perplexity,
                                           double tol = 1e-5,
                                           int max_iter = 200);

// Conditional probabilities p_{j|i} for one point at a fixed bandwidth;
// exposed for direct inspection of the kernel form.
std::vector<double> conditional_given_sigma(const CondensedDistances& d_hi,
                                            std::size_t i, double sigma);

// Symmetrized joint distribution p_ij = (p_{i|j} + p_{j|i}) / 2N; the
// ordered-pair total is 1 by construction.
PairAffinities joint_p(const PerplexityCalibration& cal);

// Embedding-side affinities at scale alpha under the given kernel,
// normalized over ordered pairs. epsilon floors the squared distances for
// the InverseSquare kernel (alpha is ignored there). Throws
// undefined_result_error when the normalizer underflows to zero.
PairAffinities q_affinities(const CondensedDistances& d_lo, double alpha,
                            KernelKind kernel, double epsilon = 0.0);

// Default floor for the inverse-square kernel: 1e-12 * max(d_lo^2), so the
// floor commutes with uniform rescaling; 1e-12 when all distances are zero.
double default_inverse_square_epsilon(const CondensedDistances& d_lo);

// Sum over ordered pairs of p * log(p/q), natural log; p = 0 terms
// contribute 0. Throws undefined_result_error if q = 0 somewhere p > 0.
double kl_divergence(const PairAffinities& p, const PairAffinities& q);

// Closed form of the divergence at scale 0: sum p log p + log N(N-1).
double kl_at_zero(const PairAffinities& p);

// KL(P || Q(alpha)) for the given kernel.
double kl_at_scale(const PairAffinities& p, const CondensedDistances& d_lo,
                   double alpha, KernelKind kernel);

// Student-t KL divergence minimized over alpha in [0, bracket_upper] by
// golden-section search. A monotone-decreasing divergence is reported with
// the at_upper_edge flag set, not as an error.
KlReport scale_normalized_kl(const PairAffinities& p,
                             const CondensedDistances& d_lo,
                             double bracket_upper);

// Default search bracket: [0, 100 * max(d_hi) / max(d_lo)].
double default_snkl_bracket_upper(const CondensedDistances& d_hi,
                                  const CondensedDistances& d_lo);

// Max-normalizes both distance vectors, builds P on the normalized input
// distances and Q (Student-t, alpha = 1) on the normalized embedding
// distances, and returns their divergence.
double forced_scale_kl(const CondensedDistances& d_hi,
                       const CondensedDistances& d_lo, double perplexity,
                       double calibration_tol = 1e-5,
                       int calibration_max_iter = 200);

// FSKL with the P side already built from the max-normalized input
// distances; lets callers reuse one calibration across many embeddings.
double forced_scale_kl_given_p(const PairAffinities& p_on_normalized_hi,
                               const CondensedDistances& d_lo);

// Limit of the Student-t divergence as alpha grows, realized by the
// inverse-square kernel.
double kl_asymptote(const PairAffinities& p, const CondensedDistances& d_lo,
                    double epsilon);
double kl_asymptote(const PairAffinities& p, const CondensedDistances& d_lo);

// Second derivative of the Student-t divergence at alpha = 0:
// sum over ordered pairs of 2 p_ij (d_ij^2 - mean ordered d^2), where d are
// embedding distances. Negative means scale 0 is a local maximum.
double kl_second_derivative_at_zero(const PairAffinities& p,
                                    const CondensedDistances& d_lo);

// Ordered samples of kl_at_scale. Per-sample evaluation failures (e.g.
// Gaussian kernel underflow at large alpha) are recorded in the sample
// rather than aborting the curve.
ScaleCurve kl_scale_curve(const PairAffinities& p,
                          const CondensedDistances& d_lo,
                          const std::vector<double>& alphas,
                          KernelKind kernel);

}  // namespace drqm
