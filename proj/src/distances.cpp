#include "drqm/distances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drqm {

void DataMatrix::validate() const {
  if (rows < 2) throw input_error("DataMatrix needs at least 2 rows");
  if (cols < 1) throw input_error("DataMatrix needs at least 1 column");
  if (values.size() != rows * cols)
    throw input_error("DataMatrix storage size does not match rows*cols");
  for (double v : values)
    if (!std::isfinite(v))
      throw input_error("DataMatrix contains a non-finite value");
}

void CondensedDistances::validate() const {
  if (n_points < 2) throw input_error("CondensedDistances needs n >= 2");
  if (values.size() != pair_count(n_points))
    throw input_error("CondensedDistances length is not n(n-1)/2");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw input_error("CondensedDistances entries must be finite and >= 0");
}

double PairAffinities::ordered_total() const {
  double s = 0.0, c = 0.0;
  for (double v : values) {
    double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return 2.0 * (s + c);
}

void PairAffinities::validate() const {
  if (n_points < 2) throw input_error("PairAffinities needs n >= 2");
  if (values.size() != CondensedDistances::pair_count(n_points))
    throw input_error("PairAffinities length is not n(n-1)/2");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw input_error("PairAffinities entries must be finite and >= 0");
  if (std::abs(ordered_total() - 1.0) > 1e-12)
    throw input_error("PairAffinities ordered-pair total is not 1");
}

std::size_t condensed_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= j || j >= n)
    throw input_error("condensed_index requires 0 <= i < j < n (got i=" +
                      std::to_string(i) + ", j=" + std::to_string(j) +
                      ", n=" + std::to_string(n) + ")");
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> condensed_pair(std::size_t k,
                                                   std::size_t n) {
  if (n < 2 || k >= CondensedDistances::pair_count(n))
    throw input_error("condensed_pair index out of range");
  // Row i is the largest i with i*n - i*(i+1)/2 <= k.
  std::size_t i = 0;
  std::size_t row_end = n - 1;  // pairs in rows 0..i inclusive
  while (k >= row_end) {
    ++i;
    row_end += n - 1 - i;
  }
  std::size_t row_start = row_end - (n - 1 - i);
  std::size_t j = i + 1 + (k - row_start);
  return {i, j};
}

CondensedDistances pairwise_euclidean(const DataMatrix& points) {
  points.validate();
  const std::size_t n = points.rows;
  const std::size_t m = points.cols;
  CondensedDistances out(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = points.values.data() + i * m;
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const double* b = points.values.data() + j * m;
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
      }
      out.values[k] = std::sqrt(s);
    }
  }
  return out;
}

CondensedDistances max_normalize(const CondensedDistances& d) {
  if (d.values.empty()) throw input_error("max_normalize on empty distances");
  const double mx = *std::max_element(d.values.begin(), d.values.end());
  if (mx <= 0.0)
    throw degenerate_input_error("max_normalize: all distances are zero");
  CondensedDistances out = d;
  for (double& v : out.values) v /= mx;
  return out;
}

CondensedDistances scale_distances(const CondensedDistances& d, double alpha) {
  if (!(alpha >= 0.0))
    throw input_error("scale_distances requires alpha >= 0");
  CondensedDistances out = d;
  for (double& v : out.values) v *= alpha;
  return out;
}

}  // namespace drqm
