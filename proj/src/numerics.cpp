#include "drqm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace drqm {

std::vector<double> pava_isotonic(const std::vector<double>& y) {
  if (y.empty()) throw input_error("pava_isotonic: empty input");
  for (double v : y)
    if (!std::isfinite(v)) throw input_error("pava_isotonic: non-finite input");

  const std::size_t n = y.size();
  // Blocks of pooled values, each kept as (sum, count, mean).
  std::vector<double> sum(n), mean(n);
  std::vector<std::size_t> count(n);
  std::size_t top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum[top] = y[i];
    count[top] = 1;
    mean[top] = y[i];
    ++top;
    while (top > 1 && mean[top - 2] > mean[top - 1]) {
      sum[top - 2] += sum[top - 1];
      count[top - 2] += count[top - 1];
      mean[top - 2] = sum[top - 2] / static_cast<double>(count[top - 2]);
      --top;
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t b = 0; b < top; ++b)
    out.insert(out.end(), count[b], mean[b]);
  return out;
}

double golden_section_default_tol(double upper) {
  return 1e-8 * (1.0 + upper);
}

BracketSearchResult golden_section_min(const std::function<double(double)>& f,
                                       double lower, double upper, double tol,
                                       int max_iter) {
  if (!(lower < upper))
    throw input_error("golden_section_min requires lower < upper");
  if (!(tol > 0.0)) throw input_error("golden_section_min requires tol > 0");

  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lower, b = upper;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);

  int iter = 0;
  while ((b - a) > tol && iter < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++iter;
  }

  BracketSearchResult res;
  res.iterations = iter;
  res.converged = (b - a) <= tol;

  // Best interior sample, then let the bracket edges compete so that a
  // monotone f reports the edge itself rather than a point tol away from it.
  // An edge wins ties up to 1e-6 relative: near a flat approach the interior
  // samples differ from the edge only by evaluation noise.
  double x = fc < fd ? c : d;
  double fx = std::min(fc, fd);
  const double flo = f(lower);
  const double fhi = f(upper);
  const auto edge_wins = [&fx](double fe) {
    return fe <= fx + 1e-6 * std::max(std::abs(fe), std::abs(fx));
  };
  if (edge_wins(flo) && flo <= fhi) {
    x = lower;
    fx = flo;
  } else if (edge_wins(fhi)) {
    x = upper;
    fx = fhi;
  }
  res.minimizer = x;
  res.minimum_value = fx;
  res.at_lower_edge = (x - lower) <= tol;
  res.at_upper_edge = (upper - x) <= tol;
  return res;
}

std::vector<double> rank_average_ties(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v))
      throw input_error("rank_average_ties: non-finite input");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    // Tied run occupies ranks i+1 .. j+1; everyone gets the average.
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw input_error("pearson_r: length mismatch");
  if (x.size() < 2) throw input_error("pearson_r: need at least 2 samples");
  const std::size_t n = x.size();
  detail::Accumulator sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.total() / static_cast<double>(n);
  const double my = sy.total() / static_cast<double>(n);
  detail::Accumulator sxx, syy, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  const double vx = sxx.total();
  const double vy = syy.total();
  if (vx == 0.0 || vy == 0.0)
    throw undefined_result_error(
        "pearson_r: correlation undefined for a constant sequence");
  double r = sxy.total() / std::sqrt(vx * vy);
  return std::clamp(r, -1.0, 1.0);
}

double spearman_rho(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size()) throw input_error("spearman_rho: length mismatch");
  if (x.size() < 2) throw input_error("spearman_rho: need at least 2 samples");
  return pearson_r(rank_average_ties(x), rank_average_ties(y));
}

}  // namespace drqm
