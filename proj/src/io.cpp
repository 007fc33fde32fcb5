#include "drqm/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace drqm {

namespace {

// Splits a line on commas and whitespace; empty tokens are dropped.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() &&
           (line[i] == ',' || line[i] == ' ' || line[i] == '\t'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && line[j] != ' ' &&
           line[j] != '\t')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_cell(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw parse_error("not a number: '" + std::string(tok) + "'", line_no);
  if (!std::isfinite(v))
    throw parse_error("non-finite value: '" + std::string(tok) + "'", line_no);
  return v;
}

std::string rstrip(const std::string& s) {
  std::size_t e = s.size();
  while (e > 0 && (s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return s.substr(0, e);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DataMatrix load_data_matrix(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);

  DataMatrix m;
  std::string raw;
  std::size_t line_no = 0;
  bool skipped_header = !header;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = rstrip(raw);
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    if (m.cols == 0) {
      m.cols = toks.size();
    } else if (toks.size() != m.cols) {
      throw parse_error("ragged row: expected " + std::to_string(m.cols) +
                            " cells, got " + std::to_string(toks.size()),
                        line_no);
    }
    for (const auto& t : toks) m.values.push_back(parse_cell(t, line_no));
    ++m.rows;
  }
  if (m.rows < 2)
    throw parse_error("matrix in " + path + " has fewer than 2 rows");
  m.validate();
  return m;
}

CondensedDistances load_condensed_distances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);

  std::string raw;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_preamble = false;
  std::vector<double> values;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = rstrip(raw);
    if (!have_preamble) {
      if (line.empty()) continue;
      if (line.rfind("n=", 0) != 0)
        throw parse_error("condensed file must start with 'n=<N>'", line_no);
      const std::string_view num(line.data() + 2, line.size() - 2);
      auto [ptr, ec] =
          std::from_chars(num.data(), num.data() + num.size(), n);
      if (ec != std::errc() || ptr != num.data() + num.size() || n < 2)
        throw parse_error("bad point count in preamble: '" + line + "'",
                          line_no);
      have_preamble = true;
      values.reserve(CondensedDistances::pair_count(n));
      continue;
    }
    for (const auto& t : tokenize(line))
      values.push_back(parse_cell(t, line_no));
  }
  if (!have_preamble)
    throw parse_error("condensed file " + path + " is empty");
  if (values.size() != CondensedDistances::pair_count(n))
    throw parse_error("condensed file holds " + std::to_string(values.size()) +
                      " values, expected " +
                      std::to_string(CondensedDistances::pair_count(n)) +
                      " for n=" + std::to_string(n));
  CondensedDistances d(n, std::move(values));
  d.validate();
  return d;
}

LoadedMatrix load_matrix(const MatrixFile& file) {
  LoadedMatrix out;
  out.kind = file.kind;
  out.digest = fnv1a_digest_file(file.path);
  if (file.kind == MatrixFileKind::Points)
    out.points = load_data_matrix(file.path, file.header);
  else
    out.distances = load_condensed_distances(file.path);
  return out;
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void save_data_matrix(const DataMatrix& m, const std::string& path) {
  m.validate();
  std::string out;
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out += ',';
      out += format_g12(m.at(i, j));
    }
    out += '\n';
  }
  atomic_write_file(path, out);
}

void save_condensed_distances(const CondensedDistances& d,
                              const std::string& path) {
  d.validate();
  std::string out = "n=" + std::to_string(d.n_points) + "\n";
  for (double v : d.values) {
    out += format_g12(v);
    out += '\n';
  }
  atomic_write_file(path, out);
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_digest_file(const std::string& path) {
  return fnv1a_digest(read_file(path));
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write file: " + tmp);
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw input_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw input_error("rename failed for " + path + ": " +
                      std::strerror(errno));
}

std::string serialize_report(const ReportDocument& doc) {
  std::string s;
  s += "drqm-report: 1\n";
  s += std::string("tool: ") + kToolVersion + "\n";
  s += "command: " + doc.command + "\n";

  for (const auto& in : doc.inputs) {
    s += "input: role=" + in.role;
    if (!in.label.empty()) s += " label=" + in.label;
    s += " path=" + in.path + " kind=" + in.kind +
         " n=" + std::to_string(in.n);
    if (in.kind == "points") s += " dims=" + std::to_string(in.dims);
    s += " digest=" + in.digest + "\n";
  }
  for (const auto& [k, v] : doc.params) s += "param: " + k + "=" + v + "\n";

  for (const auto& e : doc.metrics) {
    s += "metric: label=" + e.label + " name=" + e.metric;
    if (e.ok) {
      s += " value=" + format_g12(e.report.value);
      if (e.report.optimal_alpha)
        s += " alpha=" + format_g12(*e.report.optimal_alpha);
      if (e.report.at_lower_edge) s += " at-lower-edge=1";
      if (e.report.at_upper_edge) s += " at-upper-edge=1";
      if (!e.report.converged) s += " converged=0";
    } else {
      s += " error=" + e.error;
    }
    s += "\n";
  }

  if (doc.ladder) {
    const LadderRun& run = *doc.ladder;
    s += "ladder-columns: step sigma rescale";
    for (MetricId m : run.params.metrics)
      s += std::string(" ") + metric_name(m);
    s += "\n";
    for (std::size_t k = 0; k < run.values.size(); ++k) {
      s += "ladder: " + std::to_string(k) + " " +
           format_g12(run.noise_sigmas[k]) + " " +
           format_g12(run.rescale_factors[k]);
      for (const MetricCell& cell : run.values[k])
        s += cell.ok ? " " + format_g12(cell.value) : " err";
      s += "\n";
    }
    for (std::size_t k = 0; k < run.values.size(); ++k)
      for (std::size_t m = 0; m < run.values[k].size(); ++m)
        if (!run.values[k][m].ok)
          s += "ladder-error: step=" + std::to_string(k) +
               " metric=" + metric_name(run.params.metrics[m]) +
               " message=" + run.values[k][m].error + "\n";
  }

  for (const auto& c : doc.correlations) {
    s += std::string("correlation: metric=") + metric_name(c.metric);
    if (c.value)
      s += " value=" + format_g12(*c.value);
    else
      s += " value=not-defined note=" + c.note;
    s += "\n";
  }

  if (doc.ordering) {
    const OrderingTable& t = *doc.ordering;
    for (const auto& [key, pct] : t.ordering_percent)
      s += "ordering: key=" + key + " percent=" + format_g12(pct) + "\n";
    for (const auto& [a, b, pct] : t.pairwise_percent)
      s += "pairwise: a=" + a + " b=" + b + " percent=" + format_g12(pct) +
           "\n";
  }

  s += "status: " + doc.status + "\n";
  return s;
}

}  // namespace drqm
