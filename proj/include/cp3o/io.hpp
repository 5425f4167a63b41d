#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cp3o/config.hpp"
#include "cp3o/errors.hpp"
#include "cp3o/result.hpp"
#include "cp3o/time_series.hpp"

namespace cp3o {

using json = nlohmann::json;

enum class HeaderMode { Auto, Yes, No };

struct CsvTable {
  std::vector<std::string> columns;           // names (col1.. when headerless)
  std::vector<std::vector<double>> rows;
  bool header_detected = false;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  return true;
}

}  // namespace detail

// Reads a comma-separated file, one observation per row. Header handling is
// explicit or auto-detected (first row counts as a header iff any cell is
// non-numeric); the decision is reported in the result, never silent.
inline CsvTable read_csv(const std::string& path, HeaderMode mode) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  CsvTable table;
  std::string line;
  int file_row = 0;
  std::vector<std::vector<std::string>> raw;
  while (std::getline(in, line)) {
    ++file_row;
    if (line.empty()) continue;
    raw.push_back(detail::split_csv_line(line));
    if (raw.back().size() != raw.front().size())
      throw InputError("row " + std::to_string(file_row) + " has " +
                       std::to_string(raw.back().size()) +
                       " cells, expected " +
                       std::to_string(raw.front().size()));
  }
  if (raw.empty()) throw InputError("input file '" + path + "' is empty");

  bool header = false;
  if (mode == HeaderMode::Yes) {
    header = true;
  } else if (mode == HeaderMode::Auto) {
    double tmp;
    for (const auto& cell : raw.front())
      if (!detail::parse_double(cell, tmp)) header = true;
  }
  table.header_detected = header;

  const std::size_t ncol = raw.front().size();
  if (header) {
    table.columns = raw.front();
  } else {
    for (std::size_t c = 0; c < ncol; ++c)
      table.columns.push_back("col" + std::to_string(c + 1));
  }
  for (std::size_t r = header ? 1 : 0; r < raw.size(); ++r) {
    std::vector<double> row(ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
      if (!detail::parse_double(raw[r][c], row[c]))
        throw InputError("non-numeric cell at row " + std::to_string(r + 1) +
                         ", column " + std::to_string(c + 1) + " ('" +
                         raw[r][c] + "')");
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty())
    throw InputError("input file '" + path + "' has no data rows");
  return table;
}

// Resolves a comma-separated column selection (names or 1-based indices)
// against a table; empty selection means all columns.
inline std::vector<int> resolve_columns(const CsvTable& table,
                                        const std::string& selection) {
  std::vector<int> cols;
  if (selection.empty()) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      cols.push_back(static_cast<int>(c));
    return cols;
  }
  std::stringstream ss(selection);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto by_name = std::find(table.columns.begin(), table.columns.end(), item);
    if (by_name != table.columns.end()) {
      cols.push_back(static_cast<int>(by_name - table.columns.begin()));
      continue;
    }
    double idx;
    if (!detail::parse_double(item, idx) || idx != std::floor(idx) ||
        idx < 1 || idx > static_cast<double>(table.columns.size()))
      throw InputError("unknown column '" + item + "'");
    cols.push_back(static_cast<int>(idx) - 1);
  }
  return cols;
}

inline TimeSeries table_to_series(const CsvTable& table,
                                  const std::vector<int>& cols) {
  const int T = static_cast<int>(table.rows.size());
  const int d = static_cast<int>(cols.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(T) * d);
  for (int t = 0; t < T; ++t)
    for (int c : cols) flat.push_back(table.rows[t][c]);
  return TimeSeries(std::move(flat), T, d);
}

// Natural log of every entry; rejects non-positive values instead of
// producing NaN.
inline TimeSeries apply_log(const TimeSeries& s) {
  std::vector<double> flat(s.flat().size());
  for (int t = 0; t < s.rows(); ++t)
    for (int j = 0; j < s.dim(); ++j) {
      const double v = s.value(t, j);
      if (v <= 0.0)
        throw InputError("log transform: non-positive value at row " +
                         std::to_string(t + 1) + ", column " +
                         std::to_string(j + 1));
      flat[static_cast<std::size_t>(t) * s.dim() + j] = std::log(v);
    }
  return TimeSeries(std::move(flat), s.rows(), s.dim());
}

// First difference per column; shortens the series by one row.
inline TimeSeries apply_diff(const TimeSeries& s) {
  if (s.rows() < 2) throw InputError("diff transform: series too short");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(s.rows() - 1) * s.dim());
  for (int t = 1; t < s.rows(); ++t)
    for (int j = 0; j < s.dim(); ++j)
      flat.push_back(s.value(t, j) - s.value(t - 1, j));
  return TimeSeries(std::move(flat), s.rows() - 1, s.dim());
}

inline TimeSeries apply_transforms(TimeSeries s,
                                   const std::vector<std::string>& transforms,
                                   int* diff_count = nullptr) {
  int diffs = 0;
  for (const auto& tr : transforms) {
    if (tr == "log") {
      s = apply_log(s);
    } else if (tr == "diff") {
      s = apply_diff(s);
      ++diffs;
    } else {
      throw ConfigError("unknown transform '" + tr + "' (expected log|diff)");
    }
  }
  if (diff_count) *diff_count = diffs;
  return s;
}

inline json metric_to_json(const GofMetric& m) {
  json j;
  j["kind"] = metric_kind_name(m.kind);
  if (metric_uses_alpha(m.kind)) j["alpha"] = m.alpha;
  if (metric_uses_delta(m.kind) && m.delta) j["delta"] = *m.delta;
  return j;
}

// The canonical result document. Change point indices are 1-based positions
// in the post-transform series; original_row_map gives the matching row
// numbers of the input file (1-based, data rows only).
inline json detection_to_json(const DetectionResult& r, const json& config_echo,
                              const std::vector<int>& original_row_map) {
  json j;
  j["config"] = config_echo;
  j["index_base"] = 1;
  j["change_points"] = r.change_points.change_points;
  j["original_row_map"] = original_row_map;
  j["selected_k"] = r.selected_k;
  j["gof_curve"] = r.gof_curve;
  j["segmentations"] = r.segmentations;
  j["degenerate_flag"] = r.degenerate;
  j["runtime_s"] = r.runtime_s;
  return j;
}

// Rebuilds the result fields present in the JSON document (prune sizes are
// not serialized; they travel separately as a CSV matrix).
inline DetectionResult detection_from_json(const json& j) {
  DetectionResult r;
  r.selected_k = j.at("selected_k").get<int>();
  r.gof_curve = j.at("gof_curve").get<std::vector<double>>();
  r.segmentations = j.at("segmentations").get<std::vector<std::vector<int>>>();
  r.degenerate = j.at("degenerate_flag").get<bool>();
  r.runtime_s = j.at("runtime_s").get<double>();
  const auto cps = j.at("change_points").get<std::vector<int>>();
  const auto echo = j.at("config");
  const int T = echo.contains("series_length")
                    ? echo.at("series_length").get<int>()
                    : 0;
  r.change_points = Segmentation{cps, T};
  if (echo.contains("k_capped")) r.k_capped = echo.at("k_capped").get<bool>();
  if (echo.contains("knee_fallback"))
    r.knee_fallback = echo.at("knee_fallback").get<bool>();
  return r;
}

// Shortest decimal text that still round-trips the double.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write output file '" + path + "'");
  out << content;
}

// t x kappa matrix of candidate-set sizes, one row per time index.
inline std::string prune_sizes_csv(const DetectionResult& r) {
  std::ostringstream out;
  out << "t";
  for (std::size_t k = 1; k <= r.prune_sizes.size(); ++k) out << ",S" << k;
  out << "\n";
  const int T = r.change_points.series_length;
  for (int t = 1; t <= T; ++t) {
    out << t;
    for (const auto& level : r.prune_sizes) out << "," << level[t];
    out << "\n";
  }
  return out.str();
}

// Flat convenience view of a detection: one row per change point.
inline std::string detection_csv(const DetectionResult& r,
                                 const std::vector<int>& original_row_map) {
  std::ostringstream out;
  out << "change_point,original_row\n";
  for (std::size_t i = 0; i < r.change_points.change_points.size(); ++i)
    out << r.change_points.change_points[i] << "," << original_row_map[i]
        << "\n";
  return out.str();
}

}  // namespace cp3o
