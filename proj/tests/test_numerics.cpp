#include <doctest.h>

#include <cmath>
#include <vector>

#include "drqm/numerics.hpp"
#include "drqm/rng.hpp"
#include "test_util.hpp"

using namespace drqm;

TEST_CASE("pava on monotone input is the identity") {
  const std::vector<double> y{1, 2, 3};
  CHECK(pava_isotonic(y) == y);
}

TEST_CASE("pava pools a fully decreasing sequence to its mean") {
  CHECK(pava_isotonic({3, 2, 1}) == std::vector<double>{2, 2, 2});
}

TEST_CASE("pava on (2,1,3)") {
  // Brute-force grid minimization over monotone vectors gives (1.5, 1.5, 3).
  const std::vector<double> y{2, 1, 3};
  const auto fit = pava_isotonic(y);
  CHECK(fit == std::vector<double>{1.5, 1.5, 3});
  double sse = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    sse += (fit[i] - y[i]) * (fit[i] - y[i]);
  CHECK(std::abs(sse - testutil::grid_isotonic_sse(y, 1e-3)) < 1e-5);
}

TEST_CASE("pava empty input is an error") {
  CHECK_THROWS_AS(pava_isotonic({}), input_error);
}

TEST_CASE("pava properties on random vectors") {
  SplitRng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = rng.stream(rep);
    std::vector<double> y(1 + (g() % 40));
    for (double& v : y) v = uniform_in(g, -2.0, 2.0);
    const auto fit = pava_isotonic(y);

    double mean_in = 0, mean_out = 0, sse = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i) CHECK(fit[i] >= fit[i - 1]);  // non-decreasing
      mean_in += y[i];
      mean_out += fit[i];
      sse += (fit[i] - y[i]) * (fit[i] - y[i]);
    }
    CHECK(std::abs(mean_in - mean_out) < 1e-9);  // mean preserved
    CHECK(pava_isotonic(fit) == fit);            // idempotent
    // matches the independent grid oracle
    CHECK(std::abs(sse - testutil::grid_isotonic_sse(y, 1e-3)) < 2e-5);
  }
}

TEST_CASE("golden section finds a quadratic minimum") {
  const auto f = [](double x) { return (x - 2.0) * (x - 2.0); };
  const auto res = golden_section_min(f, 0.0, 5.0, 1e-8, 200);
  CHECK(res.converged);
  CHECK(std::abs(res.minimizer - 2.0) < 1e-6);
  CHECK_FALSE(res.at_lower_edge);
  CHECK_FALSE(res.at_upper_edge);
}

TEST_CASE("golden section reports the edge for monotone functions") {
  const auto dec = [](double x) { return std::exp(-x); };
  const auto lo = golden_section_min(dec, 0.0, 10.0, 1e-8, 200);
  CHECK(lo.at_upper_edge);
  CHECK(lo.minimizer == 10.0);

  const auto inc = [](double x) { return x; };
  const auto hi = golden_section_min(inc, 0.0, 10.0, 1e-8, 200);
  CHECK(hi.at_lower_edge);
  CHECK(hi.minimizer == 0.0);
}

TEST_CASE("golden section flags exhausted iterations") {
  const auto f = [](double x) { return (x - 2.0) * (x - 2.0); };
  const auto res = golden_section_min(f, 0.0, 5.0, 1e-12, 3);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 3);
}

TEST_CASE("golden section beats a 1000-point grid on unimodal samples") {
  SplitRng rng(4242);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = rng.stream(rep);
    const double c = uniform_in(g, 0.5, 9.5);
    const double w = uniform_in(g, 0.1, 3.0);
    const auto f = [c, w](double x) { return w * (x - c) * (x - c) + 0.3 * x; };
    const auto res = golden_section_min(f, 0.0, 10.0, 1e-8, 200);
    double grid_min = f(0.0);
    double fscale = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = f(10.0 * i / 1000.0);
      grid_min = std::min(grid_min, v);
      fscale = std::max(fscale, std::abs(v));
    }
    CHECK(res.minimum_value <= grid_min + fscale * 1e-6);
  }
}

TEST_CASE("rank_average_ties") {
  CHECK(rank_average_ties({10, 20, 30}) == std::vector<double>{1, 2, 3});
  CHECK(rank_average_ties({5, 5}) == std::vector<double>{1.5, 1.5});
  CHECK(rank_average_ties({3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("spearman basics") {
  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 25, 70}) == doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {9, 7, 3, 1}) == doctest::Approx(-1.0));
  // rank pattern (1,2,3) vs (2,1,3): 1 - 6*2/(3*8) = 0.5
  CHECK(spearman_rho({1, 2, 3}, {2, 1, 3}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(spearman_rho({1, 1, 1}, {1, 2, 3}), undefined_result_error);
}

TEST_CASE("spearman is invariant under increasing transforms and scaling") {
  SplitRng rng(7);
  auto g = rng.stream(0);
  std::vector<double> x(30), y(30);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = uniform_in(g, 0.0, 5.0);
    y[i] = uniform_in(g, 0.0, 5.0);
  }
  const double base = spearman_rho(x, y);
  std::vector<double> y_exp = y, y_scaled = y;
  for (double& v : y_exp) v = std::exp(v);
  for (double& v : y_scaled) v *= 123.0;
  CHECK(spearman_rho(x, y_exp) == doctest::Approx(base));
  CHECK(spearman_rho(x, y_scaled) == doctest::Approx(base));
}

TEST_CASE("pearson basics") {
  std::vector<double> x{1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v + 1);
  CHECK(pearson_r(x, y) == doctest::Approx(1.0));
  for (auto& v : y) v = -v;
  CHECK(pearson_r(x, y) == doctest::Approx(-1.0));
  CHECK(pearson_r({1, 2, 3}, {1, 3, 2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(pearson_r({1, 1}, {1, 2}), undefined_result_error);
  CHECK_THROWS_AS(pearson_r({1}, {1}), input_error);
  CHECK_THROWS_AS(pearson_r({1, 2}, {1, 2, 3}), input_error);
}
