#include "qheom/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>

namespace qheom {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("csv: bad numeric field '" +
                                std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string to_csv(const TimeSeries& series) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : series.rows) {
    out += format_double(row.t);
    out += ',';
    out += format_double(row.concurrence);
    for (double p : row.populations) {
      out += ',';
      out += format_double(p);
    }
    out += ',';
    out += format_double(row.trace_error);
    out += ',';
    out += format_double(row.min_eigenvalue);
    out += ',';
    out += format_double(row.purity);
    out += '\n';
  }
  return out;
}

TimeSeries parse_csv(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  if (!std::getline(stream, line) || line != kCsvHeader) {
    throw std::invalid_argument("csv: missing or unexpected header");
  }
  TimeSeries series;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 9) {
      throw std::invalid_argument("csv: expected 9 fields per row");
    }
    ObservableRecord row;
    row.t = parse_double(fields[0]);
    row.concurrence = parse_double(fields[1]);
    for (int i = 0; i < 4; ++i) {
      row.populations[static_cast<std::size_t>(i)] =
          parse_double(fields[static_cast<std::size_t>(2 + i)]);
    }
    row.trace_error = parse_double(fields[6]);
    row.min_eigenvalue = parse_double(fields[7]);
    row.purity = parse_double(fields[8]);
    if (!series.rows.empty() && row.t <= series.rows.back().t) {
      throw std::invalid_argument("csv: time grid not strictly increasing");
    }
    series.rows.push_back(row);
  }
  return series;
}

void write_csv_file(const TimeSeries& series, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::invalid_argument("cannot open for writing: " + path);
  }
  file << to_csv(series);
  if (!file) {
    throw std::runtime_error("write failed: " + path);
  }
}

TimeSeries read_csv_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw std::invalid_argument("cannot open for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_csv(buffer.str());
}

std::optional<double> steady_state_extract(const TimeSeries& series,
                                           double window, double tol) {
  if (!(window > 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("steady_state_extract: window and tol must be > 0");
  }
  if (series.rows.size() < 2) {
    throw std::invalid_argument("steady_state_extract: series too short");
  }
  const double t_begin = series.rows.front().t;
  const double t_end = series.rows.back().t;
  if (t_end - t_begin < 3.0 * window) {
    throw std::invalid_argument(
        "steady_state_extract: series must span at least three windows");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& row : series.rows) {
    if (row.t < t_end - 2.0 * window) continue;
    lo = std::min(lo, row.concurrence);
    hi = std::max(hi, row.concurrence);
    if (row.t >= t_end - window) {
      sum += row.concurrence;
      ++count;
    }
  }
  if (hi - lo >= tol) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace qheom
