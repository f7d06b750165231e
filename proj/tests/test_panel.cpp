#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tdcast/errors.hpp"
#include "tdcast/panel.hpp"
#include "tdcast/rng.hpp"

using namespace tdcast;

namespace {

PanelDataset parse(const std::string& csv, const std::string& target = "GDP") {
  std::istringstream in(csv);
  return parse_panel_csv(in, target);
}

// Hand-built regularized dataset: one country, target series given directly.
PanelDataset tiny_regularized(const std::vector<double>& target_series) {
  PanelDataset ds;
  ds.target = "GDP";
  ds.indicators = {"X01"};
  ds.regularized = true;
  CountrySeries c;
  c.country = "AA";
  for (std::size_t t = 0; t < target_series.size(); ++t) {
    c.quarters.push_back(Quarter::from_serial(8000 + static_cast<int>(t)));
    c.states.push_back({0.5});
    c.target.push_back(target_series[t]);
  }
  ds.countries.push_back(std::move(c));
  return ds;
}

}  // namespace

TEST_CASE("structural round trip: 2 countries x 2 quarters x 2 indicators") {
  auto ds = parse(
      "country,quarter,indicator,value\n"
      "PT,2000Q1,GDP,1.0\n"
      "PT,2000Q1,IP,2.0\n"
      "PT,2000Q2,GDP,1.5\n"
      "PT,2000Q2,IP,2.5\n"
      "ES,2000Q1,GDP,3.0\n"
      "ES,2000Q1,IP,4.0\n"
      "ES,2000Q2,GDP,3.5\n"
      "ES,2000Q2,IP,4.5\n");
  REQUIRE(ds.countries.size() == 2);
  CHECK(ds.indicators == std::vector<std::string>{"IP"});
  CHECK(ds.countries[0].country == "ES");  // sorted by code
  CHECK(ds.countries[1].country == "PT");
  for (const auto& c : ds.countries) CHECK(c.quarters.size() == 2);
  CHECK(ds.countries[1].target[0] == 1.0);
  CHECK(ds.countries[1].states[1][0] == 2.5);
  CHECK(ds.observation_count() == 8);
}

TEST_CASE("quarter index out of range reports the line") {
  try {
    parse("country,quarter,indicator,value\nPT,2000Q5,GDP,1.0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("quarter index out of range") != std::string::npos);
    CHECK(e.line == 2);
  }
}

TEST_CASE("duplicate key names the key") {
  CHECK_THROWS_WITH_AS(parse("country,quarter,indicator,value\n"
                             "PT,2000Q1,GDP,1.0\n"
                             "PT,2000Q1,GDP,2.0\n"),
                       doctest::Contains("duplicate observation for (PT, 2000Q1, GDP)"),
                       ParseError);
}

TEST_CASE("malformed rows report line numbers") {
  try {
    parse("country,quarter,indicator,value\nPT,2000Q1,GDP,1.0\nPT,2000Q2,GDP\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("4 fields") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("country,quarter,indicator,value\nPT,2000Q1,GDP,abc\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse("country,quarter,indicator,value\nPT,2000Q1,GDP,inf\n"),
                       doctest::Contains("non-finite"), ParseError);
  CHECK_THROWS_WITH_AS(parse("country,quarter,indicator,value\nPT,2000Q1,GDP,1e999\n"),
                       doctest::Contains("non-finite"), ParseError);
  CHECK_THROWS_AS(parse("kountry,quarter,indicator,value\nPT,2000Q1,GDP,1.0\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse("country,quarter,indicator,value\nPT,2000-Q1,GDP,1.0\n"),
                       doctest::Contains("unknown quarter format"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("missing target indicator") {
  CHECK_THROWS_WITH_AS(parse("country,quarter,indicator,value\nPT,2000Q1,IP,1.0\n"),
                       doctest::Contains("target indicator 'GDP' not found"), ValidationError);
}

TEST_CASE("a quarter missing an indicator is dropped whole") {
  auto ds = parse(
      "country,quarter,indicator,value\n"
      "PT,2000Q1,GDP,1.0\n"
      "PT,2000Q1,IP,2.0\n"
      "PT,2000Q2,GDP,1.5\n"  // IP missing -> dropped
      "PT,2000Q3,GDP,1.7\n"
      "PT,2000Q3,IP,2.7\n");
  REQUIRE(ds.countries.size() == 1);
  CHECK(ds.countries[0].quarters.size() == 2);
  CHECK(ds.countries[0].gap_count() == 1);
  REQUIRE(ds.notes.size() == 1);
  CHECK(ds.notes[0].find("PT 2000Q2") != std::string::npos);
  CHECK(ds.notes[0].find("IP") != std::string::npos);
}

TEST_CASE("regularize maps min to 0 and max to 1") {
  auto ds = parse(
      "country,quarter,indicator,value\n"
      "PT,2000Q1,GDP,10\n"
      "PT,2000Q2,GDP,20\n"
      "PT,2000Q3,GDP,30\n"
      "PT,2000Q1,IP,2\n"
      "PT,2000Q2,IP,4\n"
      "PT,2000Q3,IP,8\n");
  auto reg = regularize(ds);
  CHECK(reg.regularized);
  CHECK(reg.countries[0].target == std::vector<double>{0.0, 0.5, 1.0});
  // hand oracle (x - 2) / 6
  CHECK(reg.countries[0].states[0][0] == 0.0);
  CHECK(reg.countries[0].states[1][0] == doctest::Approx((4.0 - 2.0) / 6.0).epsilon(1e-15));
  CHECK(reg.countries[0].states[2][0] == 1.0);
  const auto* params = reg.find_regularization("PT", "GDP");
  REQUIRE(params != nullptr);
  CHECK(params->min == 10.0);
  CHECK(params->max == 30.0);
  CHECK_THROWS_AS(regularize(reg), ValidationError);  // double regularization
}

TEST_CASE("constant series is a degenerate-series error naming the series") {
  auto ds = parse(
      "country,quarter,indicator,value\n"
      "PT,2000Q1,GDP,1\n"
      "PT,2000Q2,GDP,2\n"
      "PT,2000Q1,ESI,5\n"
      "PT,2000Q2,ESI,5\n");
  try {
    regularize(ds);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("degenerate series") != std::string::npos);
    CHECK(msg.find("PT") != std::string::npos);
    CHECK(msg.find("ESI") != std::string::npos);
  }
  std::vector<double> single{5.0};
  CHECK_THROWS_AS(fit_regularization(single, "x"), ValidationError);
}

TEST_CASE("inverse regularization") {
  CHECK(inverse_regularize(0.5, {10.0, 30.0}) == 20.0);
  CHECK(inverse_regularize(0.0, {10.0, 30.0}) == 10.0);
  CHECK(inverse_regularize(1.0, {10.0, 30.0}) == 30.0);
  // extrapolation beyond [0,1] is allowed
  CHECK(inverse_regularize(1.25, {0.0, 4.0}) == 5.0);
}

TEST_CASE("regularization round trip within 1e-12 relative error") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 40);
    std::vector<double> series(n);
    const double scale = std::pow(10.0, uniform_in(rng, -3.0, 6.0));
    for (auto& v : series) v = uniform_in(rng, -scale, scale);
    if (series[0] == series[1]) series[1] += scale;
    auto params = fit_regularization(series, "trial");
    for (double v : series) {
      const double back = params.invert(params.apply(v));
      const double tol = 1e-12 * std::max(1.0, std::abs(v));
      CHECK(std::abs(back - v) <= tol);
      const double r = params.apply(v);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
    CHECK(params.apply(params.min) == 0.0);
    CHECK(params.apply(params.max) == 1.0);
  }
}

TEST_CASE("transition counts: T quarters give T-1 transitions") {
  std::vector<double> target(96);
  for (std::size_t t = 0; t < target.size(); ++t) target[t] = double(t) / 95.0;
  auto ds = tiny_regularized(target);
  auto set = build_transitions(ds);
  CHECK(set.transitions.size() == 95);
  CHECK(set.warnings.empty());
}

TEST_CASE("transition change and cost arithmetic") {
  auto ds = tiny_regularized({0.0, 0.5, 0.3});
  auto set = build_transitions(ds);
  REQUIRE(set.transitions.size() == 2);
  CHECK(set.transitions[0].target_change == 0.5);
  CHECK(set.transitions[0].cost == 0.25);
  CHECK(set.transitions[1].target_change == 0.3 - 0.5);
  // cost is bit-for-bit the square of the stored change
  for (const auto& tr : set.transitions) {
    CHECK(tr.cost == tr.target_change * tr.target_change);
    CHECK(tr.cost >= 0.0);
  }
  CHECK(set.transitions[1].cost == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(set.transitions[0].quarter_from == Quarter::from_serial(8000));
  CHECK(set.transitions[0].country == "AA");
}

TEST_CASE("gaps break the transition chain") {
  auto ds = tiny_regularized({0.0, 0.25, 0.5, 1.0});
  ds.countries[0].quarters[2] = Quarter::from_serial(8004);  // 8000,8001,8004,8005
  ds.countries[0].quarters[3] = Quarter::from_serial(8005);
  auto set = build_transitions(ds);
  CHECK(set.transitions.size() == 2);
}

TEST_CASE("a country with fewer than 2 quarters is a warning, not an error") {
  auto ds = tiny_regularized({0.0});
  auto set = build_transitions(ds);
  CHECK(set.transitions.empty());
  REQUIRE(set.warnings.size() == 1);
  CHECK(set.warnings[0].find("AA") != std::string::npos);
}

TEST_CASE("country filter excludes countries") {
  auto ds = tiny_regularized({0.0, 0.5, 1.0});
  auto set = build_transitions(ds, [](const std::string& c) { return c != "AA"; });
  CHECK(set.transitions.empty());
}

TEST_CASE("transitions require a regularized dataset") {
  PanelDataset ds = tiny_regularized({0.0, 1.0});
  ds.regularized = false;
  CHECK_THROWS_AS(build_transitions(ds), ValidationError);
}

TEST_CASE("regularization table export") {
  auto ds = parse(
      "country,quarter,indicator,value\n"
      "PT,2000Q1,GDP,10\n"
      "PT,2000Q2,GDP,30\n"
      "PT,2000Q1,IP,1\n"
      "PT,2000Q2,IP,3\n");
  auto reg = regularize(ds);
  std::ostringstream out;
  write_regularization_csv(reg, out);
  CHECK(out.str() ==
        "country,indicator,min,max\n"
        "PT,GDP,10,30\n"
        "PT,IP,1,3\n");
}

TEST_CASE("panel CSV write/parse round trip") {
  std::mt19937_64 rng(512);
  PanelDataset ds;
  ds.target = "GDP";
  ds.indicators = {"A", "B"};
  for (int c = 0; c < 3; ++c) {
    CountrySeries series;
    series.country = std::string("C") + char('0' + c);
    for (int t = 0; t < 5; ++t) {
      series.quarters.push_back(Quarter::from_serial(8000 + t));
      series.states.push_back({uniform_in(rng, -5, 5), uniform_in(rng, -5, 5)});
      series.target.push_back(uniform_in(rng, -5, 5));
    }
    ds.countries.push_back(std::move(series));
  }
  std::ostringstream out;
  write_panel_csv(ds, out);
  auto back = parse(out.str());
  REQUIRE(back.countries.size() == 3);
  CHECK(back.indicators == ds.indicators);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(back.countries[c].quarters == ds.countries[c].quarters);
    CHECK(back.countries[c].states == ds.countries[c].states);   // %.17g round trip is exact
    CHECK(back.countries[c].target == ds.countries[c].target);
  }
}
