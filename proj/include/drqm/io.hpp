#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drqm/experiments.hpp"
#include "drqm/metrics.hpp"
#include "drqm/types.hpp"

namespace drqm {

inline constexpr const char* kToolVersion = "drqm 0.1.0";

// Input file declaration: delimited text holding point coordinates, or a
// precomputed condensed-distance file with an "n=<N>" preamble.
enum class MatrixFileKind { Points, Distances };

struct MatrixFile {
  std::string path;
  MatrixFileKind kind = MatrixFileKind::Points;
  bool header = false;
};

// Either payload, plus provenance recorded for reports.
struct LoadedMatrix {
  MatrixFileKind kind = MatrixFileKind::Points;
  DataMatrix points;
  CondensedDistances distances;
  std::string digest;

  std::size_t n_points() const {
    return kind == MatrixFileKind::Points ? points.rows : distances.n_points;
  }
};

// Parses a delimited-text matrix (comma and/or whitespace separated).
// Throws parse_error naming the offending line on ragged rows, non-numeric
// cells, or non-finite values.
DataMatrix load_data_matrix(const std::string& path, bool header = false);

// Parses a condensed-distance file: one "n=<N>" preamble line followed by
// exactly N(N-1)/2 values.
CondensedDistances load_condensed_distances(const std::string& path);

LoadedMatrix load_matrix(const MatrixFile& file);

// Writes with 12 significant digits so that a reload reproduces every value
// to full printed precision. Whole-file atomic (write temp, then rename).
void save_data_matrix(const DataMatrix& m, const std::string& path);
void save_condensed_distances(const CondensedDistances& d,
                              const std::string& path);

// 12-significant-digit formatting used for every float in reports.
std::string format_g12(double v);

// FNV-1a 64-bit content digest, 16 hex characters.
std::string fnv1a_digest(const std::string& bytes);
std::string fnv1a_digest_file(const std::string& path);

void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// A deterministic report: fixed section order, stable key order, fixed float
// formatting. Identical inputs and flags serialize to identical bytes.
struct ReportInput {
  std::string role;   // "data" or "embedding"
  std::string label;  // embeddings only
  std::string path;
  std::string kind;   // "points" or "distances"
  std::size_t n = 0;
  std::size_t dims = 0;  // points only
  std::string digest;
};

struct ReportMetricEntry {
  std::string label;
  std::string metric;
  bool ok = true;
  MetricReport report;
  std::string error;
};

struct ReportDocument {
  std::string command;
  std::vector<ReportInput> inputs;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<ReportMetricEntry> metrics;
  std::optional<LadderRun> ladder;
  std::vector<MetricCorrelation> correlations;
  std::optional<OrderingTable> ordering;
  std::string status = "ok";
};

std::string serialize_report(const ReportDocument& doc);

}  // namespace drqm
