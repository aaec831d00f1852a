// timeseries.hpp — sampled observable series and its CSV form
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qheom/observables.hpp"

namespace qheom {

struct TimeSeries {
  std::vector<ObservableRecord> rows;  // strictly increasing t
};

inline constexpr const char* kCsvHeader =
    "t,concurrence,p11,p10,p01,p00,trace_error,min_eigenvalue,purity";

// Numbers are printed as shortest round-trip decimals, '.' separator,
// '\n' line endings; identical series produce byte-identical text.
std::string to_csv(const TimeSeries& series);
TimeSeries parse_csv(const std::string& text);

void write_csv_file(const TimeSeries& series, const std::string& path);
TimeSeries read_csv_file(const std::string& path);

std::string format_double(double value);  // shortest round-trip decimal

// Mean concurrence over the final window if the series has settled:
// (max - min) of concurrence over the final two windows must be < tol.
// Returns nullopt when not settled (e.g. undamped oscillation). The series
// must span at least three windows.
std::optional<double> steady_state_extract(const TimeSeries& series,
                                           double window, double tol);

}  // namespace qheom
