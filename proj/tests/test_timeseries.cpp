#include <doctest.h>

#include <cmath>
#include <random>

#include "qheom/timeseries.hpp"

using namespace qheom;

namespace {

TimeSeries random_series(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_real_distribution<double> tiny(1e-16, 1e-9);
  TimeSeries series;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ObservableRecord row;
    row.t = t;
    t += 0.1 * (1.0 + std::abs(dist(rng)));
    row.concurrence = std::abs(dist(rng));
    for (auto& p : row.populations) p = dist(rng);
    row.trace_error = tiny(rng);
    row.min_eigenvalue = dist(rng) * 1e-7;
    row.purity = std::abs(dist(rng));
    series.rows.push_back(row);
  }
  return series;
}

TimeSeries constant_series(double value, double t_end, double dt) {
  TimeSeries series;
  for (double t = 0.0; t <= t_end + 1e-12; t += dt) {
    ObservableRecord row;
    row.t = t;
    row.concurrence = value;
    series.rows.push_back(row);
  }
  return series;
}

}  // namespace

TEST_CASE("csv header is bit-exact") {
  CHECK(std::string(kCsvHeader) ==
        "t,concurrence,p11,p10,p01,p00,trace_error,min_eigenvalue,purity");
}

TEST_CASE("csv round trip preserves every field exactly") {
  std::mt19937 rng(51);
  const TimeSeries series = random_series(rng, 40);
  const TimeSeries parsed = parse_csv(to_csv(series));
  REQUIRE(parsed.rows.size() == series.rows.size());
  for (std::size_t i = 0; i < series.rows.size(); ++i) {
    const auto& a = series.rows[i];
    const auto& b = parsed.rows[i];
    CHECK(a.t == b.t);
    CHECK(a.concurrence == b.concurrence);
    CHECK(a.populations == b.populations);
    CHECK(a.trace_error == b.trace_error);
    CHECK(a.min_eigenvalue == b.min_eigenvalue);
    CHECK(a.purity == b.purity);
  }
  // identical input gives byte-identical output
  CHECK(to_csv(series) == to_csv(parsed));
}

TEST_CASE("csv parser rejects malformed input") {
  CHECK_THROWS_AS(parse_csv("nope\n1,2\n"), std::invalid_argument);
  const std::string header(kCsvHeader);
  CHECK_THROWS_AS(parse_csv(header + "\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_csv(header + "\n1,0,0,0,0,1,0,0,1\n0.5,0,0,0,0,1,0,0,1\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(header + "\n1,x,0,0,0,1,0,0,1\n"),
                  std::invalid_argument);
}

TEST_CASE("steady-state extraction") {
  const TimeSeries constant = constant_series(0.1, 30.0, 0.1);
  const auto steady = steady_state_extract(constant, 5.0, 1e-6);
  REQUIRE(steady.has_value());
  CHECK(*steady == doctest::Approx(0.1).epsilon(1e-12));

  // pure oscillation never settles
  TimeSeries sine;
  for (double t = 0.0; t <= 60.0; t += 0.05) {
    ObservableRecord row;
    row.t = t;
    row.concurrence = 0.2 * std::sin(t) + 0.3;
    sine.rows.push_back(row);
  }
  CHECK_FALSE(steady_state_extract(sine, 10.0, 1e-3).has_value());

  // damped approach settles onto the floor value
  TimeSeries damped;
  for (double t = 0.0; t <= 400.0; t += 0.2) {
    ObservableRecord row;
    row.t = t;
    row.concurrence = 0.1 + 0.2 * std::exp(-0.05 * t) * std::cos(1.3 * t);
    damped.rows.push_back(row);
  }
  const auto settled = steady_state_extract(damped, 80.0, 2e-3);
  REQUIRE(settled.has_value());
  CHECK(*settled == doctest::Approx(0.1).epsilon(2e-3));

  CHECK_THROWS_AS(steady_state_extract(constant, 20.0, 1e-3),
                  std::invalid_argument);
  TimeSeries tiny;
  tiny.rows.resize(1);
  CHECK_THROWS_AS(steady_state_extract(tiny, 1.0, 1e-3), std::invalid_argument);
}
