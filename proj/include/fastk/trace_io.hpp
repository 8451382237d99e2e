// Copyright (c) 2026 The fastk authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fastk/sim.hpp"
#include "fastk/theory.hpp"

namespace fastk {

namespace detail {

/// Shortest decimal form that round-trips a double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace detail

inline constexpr const char* kTraceHeader =
    "iteration,wall_clock,k,loss,download_units,upload_units";

inline void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << kTraceHeader << '\n';
  for (const auto& rec : trace) {
    out << rec.iteration << ',' << detail::format_double(rec.wall_clock) << ','
        << rec.k_used << ',' << (rec.loss ? detail::format_double(*rec.loss) : "nan")
        << ',' << rec.download_units << ',' << rec.upload_units << '\n';
  }
  if (!out) throw std::runtime_error("write_trace_csv: write failure on " + path);
}

inline std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("read_trace_csv: unexpected header in " + path);
  }
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 6) throw std::runtime_error("read_trace_csv: malformed row in " + path);
    TraceRecord rec;
    rec.iteration = std::stoull(fields[0]);
    rec.wall_clock = std::stod(fields[1]);
    rec.k_used = std::stoi(fields[2]);
    const double loss = std::stod(fields[3]);
    if (!std::isnan(loss)) rec.loss = loss;
    rec.download_units = std::stoull(fields[4]);
    rec.upload_units = std::stoull(fields[5]);
    trace.push_back(rec);
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Datasets as delimited text: header x0,...,x{d-1},y then one row per sample.
// ---------------------------------------------------------------------------

inline void write_dataset_csv(const std::string& path, const DataSet& data) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + path);
  for (std::size_t i = 0; i < data.d; ++i) out << 'x' << i << ',';
  out << "y\n";
  for (std::size_t l = 0; l < data.m; ++l) {
    const auto row = data.row(l);
    for (double v : row) out << detail::format_double(v) << ',';
    out << detail::format_double(data.labels[l]) << '\n';
  }
  if (!out) throw std::runtime_error("write_dataset_csv: write failure on " + path);
}

inline DataSet read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_dataset_csv: empty file " + path);
  const std::size_t d = detail::split_csv_line(line).size() - 1;
  if (d < 1) throw std::runtime_error("read_dataset_csv: no feature columns in " + path);
  std::vector<double> features;
  std::vector<double> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != d + 1) {
      throw std::runtime_error("read_dataset_csv: malformed row in " + path);
    }
    for (std::size_t i = 0; i < d; ++i) features.push_back(std::stod(fields[i]));
    labels.push_back(std::stod(fields[d]));
  }
  if (labels.empty()) throw std::runtime_error("read_dataset_csv: no rows in " + path);
  DataSet data(labels.size(), d);
  data.features = std::move(features);
  data.labels = std::move(labels);
  data.validate();
  return data;
}

// ---------------------------------------------------------------------------
// Theory curve emission.
// ---------------------------------------------------------------------------

/// Plot-ready table: time column, one bound column per fixed k, the adaptive
/// bound, and the best-fixed-k staircase.
struct CurveTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct TheoryTables {
  CurveTable curves;
  PolicySchedule schedule;
};

/// Evaluate all fixed-k bound curves, the adaptive bound, and the staircase
/// of bound-optimal fixed k on the given grid. The grid is caller-supplied
/// and must be strictly increasing and nonnegative.
inline TheoryTables emit_theory(const SystemParams& p, const std::vector<double>& t_grid) {
  p.validate();
  if (t_grid.empty()) throw std::invalid_argument("emit_theory: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
      throw std::invalid_argument("emit_theory: grid must be strictly increasing and nonnegative");
    }
  }
  TheoryTables out;
  out.schedule = switching_times(p);
  const std::vector<double> adaptive = adaptive_bound_curve(t_grid, p, out.schedule);

  out.curves.columns.push_back("t");
  for (std::size_t k = 1; k <= p.n; ++k) {
    out.curves.columns.push_back("bound_k" + std::to_string(k));
  }
  out.curves.columns.push_back("bound_adaptive");
  out.curves.columns.push_back("best_fixed_k");

  out.curves.rows.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    std::vector<double> row;
    row.reserve(p.n + 3);
    row.push_back(t_grid[i]);
    for (std::size_t k = 1; k <= p.n; ++k) row.push_back(error_bound_time(t_grid[i], k, p));
    row.push_back(adaptive[i]);
    row.push_back(static_cast<double>(best_fixed_k(t_grid[i], p)));
    out.curves.rows.push_back(std::move(row));
  }
  return out;
}

inline void write_curve_table(const std::string& path, const CurveTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_table: cannot open " + path);
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << table.columns[i] << (i + 1 < table.columns.size() ? ',' : '\n');
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << detail::format_double(row[i]) << (i + 1 < row.size() ? ',' : '\n');
    }
  }
  if (!out) throw std::runtime_error("write_curve_table: write failure on " + path);
}

inline void write_schedule_csv(const std::string& path, const PolicySchedule& sched) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_schedule_csv: cannot open " + path);
  out << "k_from,k_to,t_switch,gap_at_switch\n";
  for (std::size_t i = 0; i < sched.switch_times.size(); ++i) {
    out << (i + 1) << ',' << (i + 2) << ',' << detail::format_double(sched.switch_times[i])
        << ',' << detail::format_double(sched.gaps_at_switch[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write_schedule_csv: write failure on " + path);
}

}  // namespace fastk
