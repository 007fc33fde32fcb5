#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace drqm {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments: bad parameters, mismatched lengths, malformed requests.
class input_error : public error {
 public:
  using error::error;
};

// Structurally valid input on which the requested quantity is not defined
// (e.g. all-zero distance vectors).
class degenerate_input_error : public error {
 public:
  using error::error;
};

// A result that exists formally but is undefined on this input
// (correlation of a constant sequence, KL with q=0 where p>0,
// normalizer underflow).
class undefined_result_error : public error {
 public:
  using error::error;
};

// Perplexity search did not converge for some point.
class calibration_error : public error {
 public:
  using error::error;
};

// File-format errors; carries the 1-based line number when known.
class parse_error : public error {
 public:
  parse_error(const std::string& msg, std::size_t line)
      : error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit parse_error(const std::string& msg) : error(msg), line_(0) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// N x m row-major matrix of point coordinates (dataset rows or embedding
// rows). All values must be finite, N >= 2, m >= 1.
struct DataMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  DataMatrix() = default;
  DataMatrix(std::size_t n, std::size_t m)
      : rows(n), cols(m), values(n * m, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  // Throws input_error if the invariants do not hold.
  void validate() const;
};

// Pairwise distances over unordered pairs (i, j), i < j, in lexicographic
// pair order; length is exactly n_points*(n_points-1)/2.
struct CondensedDistances {
  std::size_t n_points = 0;
  std::vector<double> values;

  CondensedDistances() = default;
  explicit CondensedDistances(std::size_t n)
      : n_points(n), values(pair_count(n), 0.0) {}
  CondensedDistances(std::size_t n, std::vector<double> v)
      : n_points(n), values(std::move(v)) {}

  static std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
  std::size_t size() const { return values.size(); }

  void validate() const;
};

// Symmetric pair probabilities stored condensed: the stored value for the
// unordered pair {i, j} equals the ordered-pair probability p_ij = p_ji,
// so the total over ordered pairs is 2 * sum(values) and must equal 1.
struct PairAffinities {
  std::size_t n_points = 0;
  std::vector<double> values;

  PairAffinities() = default;
  PairAffinities(std::size_t n, std::vector<double> v)
      : n_points(n), values(std::move(v)) {}

  std::size_t size() const { return values.size(); }

  // Ordered-pair total, 2 * sum of the condensed values.
  double ordered_total() const;

  void validate() const;
};

// One (alpha, metric value) sample of a scale curve. A sample that failed
// to evaluate carries ok = false and the error message.
struct CurveSample {
  double alpha = 0.0;
  double value = 0.0;
  bool ok = true;
  std::string error;
};

struct ScaleCurve {
  std::vector<CurveSample> samples;
};

}  // namespace drqm
