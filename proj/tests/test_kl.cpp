#include <doctest.h>

#include <cmath>
#include <vector>

#include "drqm/distances.hpp"
#include "drqm/kl.hpp"
#include "drqm/rng.hpp"
#include "test_util.hpp"

using namespace drqm;

namespace {

PairAffinities build_p(const CondensedDistances& d_hi, double perplexity) {
  return joint_p(calibrate_perplexity(d_hi, perplexity));
}

// Three points with a hand-picked P and the embedding (0,0),(0,1),(1,1).
// The inverse-square affinities of this embedding reproduce P exactly, so
// the divergence has a horizontal asymptote of exactly 0 approached from
// above.
struct AsymptoteFixture {
  PairAffinities p{3, {0.2, 0.1, 0.2}};
  CondensedDistances d_lo;
  AsymptoteFixture() {
    DataMatrix y(3, 2);
    y.at(0, 0) = 0; y.at(0, 1) = 0;
    y.at(1, 0) = 0; y.at(1, 1) = 1;
    y.at(2, 0) = 1; y.at(2, 1) = 1;
    d_lo = pairwise_euclidean(y);
  }
};

CondensedDistances equilateral() {
  DataMatrix pts(3, 2);
  pts.at(0, 0) = 0;   pts.at(0, 1) = 0;
  pts.at(1, 0) = 1;   pts.at(1, 1) = 0;
  pts.at(2, 0) = 0.5; pts.at(2, 1) = std::sqrt(3.0) / 2.0;
  return pairwise_euclidean(pts);
}

}  // namespace

TEST_CASE("perplexity calibration hits the target entropy") {
  const auto d_hi = testutil::random_distances(100, 11, 5);
  const double target = 30.0;
  const auto cal = calibrate_perplexity(d_hi, target);
  REQUIRE(cal.sigmas.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(cal.sigmas[i] > 0.0);
    // independent oracle: recompute the entropy from the conditional row
    double row_sum = 0.0, h_bits = 0.0;
    for (std::size_t j = 0; j < 100; ++j) {
      const double p = cal.conditional_at(i, j);
      row_sum += p;
      if (p > 0.0) h_bits -= p * std::log2(p);
    }
    CHECK(std::abs(row_sum - 1.0) < 1e-10);
    CHECK(std::abs(std::exp2(h_bits) - target) < 2e-5);
    CHECK(std::abs(std::exp2(cal.achieved_entropy_bits[i]) - target) < 1e-5);
  }
  CHECK(cal.conditional_at(0, 0) == 0.0);
}

TEST_CASE("equilateral triangle has symmetric conditionals at any sigma") {
  const auto d = equilateral();
  for (double sigma : {0.05, 1.0, 20.0}) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto row = conditional_given_sigma(d, i, sigma);
      for (std::size_t j = 0; j < 3; ++j) {
        if (j == i)
          CHECK(row[j] == 0.0);
        else
          CHECK(row[j] == doctest::Approx(0.5).epsilon(1e-12));
      }
    }
  }
  // With exactly equal distances the entropy is pinned at 1 bit, so no
  // in-range target is reachable and the search must say which point failed.
  // (The geometric triangle above is only equilateral to ~1 ulp, which is
  // already enough wiggle for the search to converge.)
  const CondensedDistances exact(3, {1.0, 1.0, 1.0});
  try {
    calibrate_perplexity(exact, 1.5);
    FAIL("expected calibration_error");
  } catch (const calibration_error& e) {
    CHECK(std::string(e.what()).find("point 0") != std::string::npos);
  }
}

TEST_CASE("duplicate input points get maximal conditional probability") {
  // two coincident points: no dedup, the zero-distance neighbor simply
  // carries the largest conditional mass
  DataMatrix x(5, 2);
  x.values = {0.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.4, 0.9, 0.8, 0.5};
  const auto d_hi = pairwise_euclidean(x);
  const auto cal = calibrate_perplexity(d_hi, 2.5);
  for (std::size_t j = 1; j < 5; ++j)
    CHECK(cal.conditional_at(0, 1) >= cal.conditional_at(0, j));
  const auto p = joint_p(cal);
  CHECK(std::abs(p.ordered_total() - 1.0) <= 1e-12);
}

TEST_CASE("perplexity bounds are enforced") {
  const auto d_hi = testutil::random_distances(10, 3);
  CHECK_THROWS_AS(calibrate_perplexity(d_hi, 10.0), input_error);  // = N
  CHECK_THROWS_AS(calibrate_perplexity(d_hi, 9.0), input_error);   // = N-1
  CHECK_THROWS_AS(calibrate_perplexity(d_hi, 1.0), input_error);
  CHECK_NOTHROW(calibrate_perplexity(d_hi, 5.0));
}

TEST_CASE("joint_p symmetrizes and normalizes") {
  SUBCASE("uniform conditionals give the uniform joint") {
    PerplexityCalibration cal;
    cal.n_points = 3;
    cal.conditional.assign(9, 0.5);
    for (std::size_t i = 0; i < 3; ++i) cal.conditional[i * 3 + i] = 0.0;
    const auto joint = joint_p(cal);
    for (double v : joint.values) CHECK(v == doctest::Approx(1.0 / 6.0));
    CHECK(std::abs(joint.ordered_total() - 1.0) <= 1e-12);
  }
  SUBCASE("random instance sums to one over ordered pairs") {
    const auto p = build_p(testutil::random_distances(40, 17), 12.0);
    CHECK(std::abs(p.ordered_total() - 1.0) <= 1e-12);
    for (double v : p.values) CHECK(v >= 0.0);
  }
}

TEST_CASE("q affinities at scale zero are uniform") {
  const auto d_lo = testutil::random_distances(12, 5, 2);
  const double uniform = 1.0 / (12.0 * 11.0);
  for (KernelKind k : {KernelKind::StudentT, KernelKind::Gaussian}) {
    const auto q = q_affinities(d_lo, 0.0, k);
    for (double v : q.values) CHECK(v == uniform);
  }
}

TEST_CASE("inverse-square affinities on the asymptote fixture") {
  // squared distances (1, 2, 1) give weights (1, 0.5, 1): q = (0.2, 0.1, 0.2)
  AsymptoteFixture fx;
  const auto q = q_affinities(fx.d_lo, 0.0, KernelKind::InverseSquare,
                              default_inverse_square_epsilon(fx.d_lo));
  CHECK(testutil::rel_diff(q.values[0], 0.2) < 1e-15);
  CHECK(testutil::rel_diff(q.values[1], 0.1) < 1e-15);
  CHECK(testutil::rel_diff(q.values[2], 0.2) < 1e-15);
}

TEST_CASE("q affinities normalize over ordered pairs") {
  const auto d_lo = testutil::random_distances(30, 9, 2);
  for (KernelKind k :
       {KernelKind::StudentT, KernelKind::Gaussian, KernelKind::InverseSquare}) {
    const auto q = q_affinities(d_lo, 1.3, k, 1e-12);
    CHECK(std::abs(q.ordered_total() - 1.0) <= 1e-12);
  }
}

TEST_CASE("student-t affinities depend only on alpha times distance") {
  const auto d_lo = testutil::random_distances(15, 23, 2);
  const auto a = q_affinities(d_lo, 2.0, KernelKind::StudentT);
  const auto b = q_affinities(scale_distances(d_lo, 2.0), 1.0,
                              KernelKind::StudentT);
  for (std::size_t k = 0; k < a.values.size(); ++k)
    CHECK(testutil::rel_diff(a.values[k], b.values[k]) < 1e-15);
}

TEST_CASE("gaussian normalizer underflow is a named error") {
  const auto d_lo = testutil::random_distances(8, 2, 2);
  try {
    q_affinities(d_lo, 1e9, KernelKind::Gaussian);
    FAIL("expected undefined_result_error");
  } catch (const undefined_result_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("gaussian") != std::string::npos);
    CHECK(msg.find("alpha=") != std::string::npos);
  }
}

TEST_CASE("kl divergence basics") {
  const auto d_hi = testutil::random_distances(20, 31);
  const auto p = build_p(d_hi, 8.0);
  CHECK(kl_divergence(p, p) == 0.0);

  const std::size_t pairs = p.values.size();
  PairAffinities uniform{20, std::vector<double>(pairs, 1.0 / (20.0 * 19.0))};
  CHECK(std::abs(kl_divergence(p, uniform) - kl_at_zero(p)) < 1e-12);

  PairAffinities q = uniform;
  q.values[3] = 0.0;
  CHECK_THROWS_AS(kl_divergence(p, q), undefined_result_error);
}

TEST_CASE("kl divergence is non-negative") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto p = build_p(testutil::random_distances(15, seed), 6.0);
    const auto q = q_affinities(testutil::random_distances(15, seed + 50, 2),
                                1.0, KernelKind::StudentT);
    CHECK(kl_divergence(p, q) >= 0.0);
  }
}

TEST_CASE("kl at scale zero matches the closed form") {
  const auto d_hi = testutil::random_distances(25, 41);
  const auto d_lo = testutil::random_distances(25, 42, 2);
  const auto p = build_p(d_hi, 10.0);
  CHECK(std::abs(kl_at_scale(p, d_lo, 0.0, KernelKind::StudentT) -
                 kl_at_zero(p)) < 1e-10);
  CHECK(std::abs(kl_at_scale(p, d_lo, 0.0, KernelKind::Gaussian) -
                 kl_at_zero(p)) < 1e-10);
}

TEST_CASE("asymptote fixture behaves as derived") {
  AsymptoteFixture fx;

  SUBCASE("value at zero") {
    CHECK(kl_at_zero(fx.p) ==
          doctest::Approx(0.0436921206819656).epsilon(1e-10));
    CHECK(std::abs(kl_at_scale(fx.p, fx.d_lo, 0.0, KernelKind::StudentT) -
                   kl_at_zero(fx.p)) < 1e-12);
  }
  SUBCASE("asymptote is exactly zero and approached from above") {
    CHECK(kl_asymptote(fx.p, fx.d_lo) <= 1e-12);
    // non-increasing up to the summation noise floor of ~1e-16
    double prev = kl_at_scale(fx.p, fx.d_lo, 1.0, KernelKind::StudentT);
    for (double a = 2.0; a <= 1e4; a *= 2.0) {
      const double v = kl_at_scale(fx.p, fx.d_lo, a, KernelKind::StudentT);
      CHECK(v <= prev + 1e-12);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
  SUBCASE("scale search lands on the upper bracket edge") {
    // bracket chosen so the descent stays resolvable in doubles
    const auto rep = scale_normalized_kl(fx.p, fx.d_lo, 100.0);
    CHECK(rep.at_upper_edge);
    CHECK(rep.value < 1e-6);
  }
  SUBCASE("second derivative at zero") {
    const double d2 = kl_second_derivative_at_zero(fx.p, fx.d_lo);
    CHECK(d2 == doctest::Approx(-4.0 / 15.0).epsilon(1e-12));
    // finite difference via the even extension of KL in alpha
    const double h = 1e-3;
    const double f0 = kl_at_scale(fx.p, fx.d_lo, 0.0, KernelKind::StudentT);
    const double fh = kl_at_scale(fx.p, fx.d_lo, h, KernelKind::StudentT);
    const double fd = 2.0 * (fh - f0) / (h * h);
    CHECK(testutil::rel_diff(fd, d2) < 1e-3);
  }
}

TEST_CASE("all-equal embedding distances give a zero second derivative") {
  const PairAffinities p{3, {0.2, 0.1, 0.2}};
  const CondensedDistances d_lo(3, {1.5, 1.5, 1.5});
  CHECK(kl_second_derivative_at_zero(p, d_lo) == doctest::Approx(0.0));
}

TEST_CASE("good embeddings put a local maximum at scale zero") {
  // P concentrates on close pairs; when the embedding keeps those pairs
  // close, the weighted mean-deviation of squared distances is negative
  const auto d_hi = testutil::random_distances(25, 61, 2);
  const auto p = build_p(d_hi, 10.0);
  CHECK(kl_second_derivative_at_zero(p, d_hi) < 0.0);
  CHECK(kl_second_derivative_at_zero(p, scale_distances(d_hi, 3.0)) < 0.0);
}

TEST_CASE("finite differences confirm the second derivative on random data") {
  for (std::uint64_t seed : {3u, 14u, 25u}) {
    const auto p = build_p(testutil::random_distances(20, seed), 8.0);
    const auto d_lo = testutil::random_distances(20, seed + 7, 2);
    const double d2 = kl_second_derivative_at_zero(p, d_lo);
    const double f0 = kl_at_scale(p, d_lo, 0.0, KernelKind::StudentT);
    double best = 1e300;
    for (double h : {1e-2, 1e-3, 1e-4}) {
      const double fh = kl_at_scale(p, d_lo, h, KernelKind::StudentT);
      best = std::min(best, testutil::rel_diff(2.0 * (fh - f0) / (h * h), d2));
    }
    CHECK(best < 1e-3);
  }
}

TEST_CASE("first derivative vanishes at scale zero") {
  const auto p = build_p(testutil::random_distances(20, 51), 8.0);
  const auto d_lo = testutil::random_distances(20, 52, 2);
  const double f0 = kl_at_scale(p, d_lo, 0.0, KernelKind::StudentT);
  const double h = 1e-5;
  const double slope =
      (kl_at_scale(p, d_lo, h, KernelKind::StudentT) - f0) / h;
  CHECK(std::abs(slope) <= 1e-4 * std::max(1.0, std::abs(f0)));
}

TEST_CASE("scale-normalized kl") {
  const auto d_hi = testutil::random_distances(20, 61);
  const auto d_lo = testutil::random_distances(20, 62, 2);
  const auto p = build_p(d_hi, 8.0);

  SUBCASE("scale invariance with the matching default bracket") {
    const auto base =
        scale_normalized_kl(p, d_lo, default_snkl_bracket_upper(d_hi, d_lo));
    for (double alpha : {0.1, 10.0}) {
      const auto scaled = scale_distances(d_lo, alpha);
      const auto rep = scale_normalized_kl(
          p, scaled, default_snkl_bracket_upper(d_hi, scaled));
      CHECK(testutil::rel_diff(base.value, rep.value) < 1e-6);
    }
  }
  SUBCASE("minimum property") {
    const auto rep =
        scale_normalized_kl(p, d_lo, default_snkl_bracket_upper(d_hi, d_lo));
    CHECK(rep.value <=
          kl_at_scale(p, d_lo, 1.0, KernelKind::StudentT) + 1e-12);
    CHECK(std::abs(rep.at_zero - kl_at_zero(p)) < 1e-12);
  }
}

TEST_CASE("forced-scale kl") {
  const auto d_hi = testutil::random_distances(20, 71);
  const auto d_lo = testutil::random_distances(20, 72, 2);
  const double base = forced_scale_kl(d_hi, d_lo, 8.0);

  SUBCASE("scale invariance") {
    for (double alpha : {1e-3, 0.5, 1e3})
      CHECK(testutil::rel_diff(
                base, forced_scale_kl(d_hi, scale_distances(d_lo, alpha), 8.0))
            < 1e-12);
  }
  SUBCASE("proportional embedding collapses to the self comparison") {
    const double self = forced_scale_kl(d_hi, d_hi, 8.0);
    CHECK(testutil::rel_diff(
              self, forced_scale_kl(d_hi, scale_distances(d_hi, 3.0), 8.0))
          < 1e-12);
  }
  SUBCASE("dominated by the scale minimum of the normalized system") {
    const auto p = joint_p(calibrate_perplexity(max_normalize(d_hi), 8.0));
    const auto lo = max_normalize(d_lo);
    double grid_min = 1e300;
    for (double a = 1e-2; a <= 1e3; a *= 1.1)
      grid_min =
          std::min(grid_min, kl_at_scale(p, lo, a, KernelKind::StudentT));
    CHECK(base >= grid_min - 1e-9);
  }
}

TEST_CASE("kl asymptote") {
  SUBCASE("large-scale evaluation approaches it") {
    const auto p = build_p(testutil::random_distances(30, 81), 10.0);
    const auto d_lo = testutil::random_distances(30, 82, 2);
    CHECK(std::abs(kl_at_scale(p, d_lo, 1e6, KernelKind::StudentT) -
                   kl_asymptote(p, d_lo)) <= 1e-4);
  }
  SUBCASE("duplicate embedded points stay finite through the epsilon floor") {
    DataMatrix y(3, 2);
    y.at(0, 0) = 0; y.at(0, 1) = 0;
    y.at(1, 0) = 0; y.at(1, 1) = 0;  // duplicate of point 0
    y.at(2, 0) = 1; y.at(2, 1) = 0;
    const auto d_lo = pairwise_euclidean(y);
    const PairAffinities p{3, {0.2, 0.1, 0.2}};
    const double v = kl_asymptote(p, d_lo);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("kl scale curve") {
  const auto d_hi = testutil::random_distances(20, 91);
  const auto d_lo = testutil::random_distances(20, 92, 2);
  const auto p = build_p(d_hi, 8.0);

  SUBCASE("starts at the closed form for any kernel") {
    for (KernelKind k : {KernelKind::StudentT, KernelKind::Gaussian}) {
      const auto curve = kl_scale_curve(p, d_lo, {0.0, 1.0}, k);
      CHECK(std::abs(curve.samples[0].value - kl_at_zero(p)) < 1e-10);
    }
  }
  SUBCASE("flattens onto the asymptote") {
    std::vector<double> alphas;
    for (double a = 1e5; a <= 1e6; a *= 1.5) alphas.push_back(a);
    const auto curve = kl_scale_curve(p, d_lo, alphas, KernelKind::StudentT);
    const double asym = kl_asymptote(p, d_lo);
    for (const auto& s : curve.samples)
      CHECK(std::abs(s.value - asym) < 1e-3);
  }
  SUBCASE("grid minimum respects the scale-normalized value") {
    std::vector<double> alphas;
    for (double a = 1e-3; a <= 1e3; a *= 1.2) alphas.push_back(a);
    const auto curve = kl_scale_curve(p, d_lo, alphas, KernelKind::StudentT);
    double grid_min = 1e300;
    for (const auto& s : curve.samples)
      grid_min = std::min(grid_min, s.value);
    const auto rep =
        scale_normalized_kl(p, d_lo, default_snkl_bracket_upper(d_hi, d_lo));
    CHECK(grid_min >= rep.value - 1e-6);
  }
  SUBCASE("gaussian underflow is reported per sample") {
    const auto curve =
        kl_scale_curve(p, d_lo, {1.0, 1e9}, KernelKind::Gaussian);
    CHECK(curve.samples[0].ok);
    CHECK_FALSE(curve.samples[1].ok);
    CHECK(!curve.samples[1].error.empty());
  }
}
