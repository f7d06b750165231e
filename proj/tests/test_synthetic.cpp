#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tdcast/errors.hpp"
#include "tdcast/ols.hpp"
#include "tdcast/synthetic.hpp"

using namespace tdcast;

TEST_CASE("observation counts: countries x quarters x (indicators + target)") {
  SyntheticSpec spec;
  spec.countries = 2;
  spec.quarters = 8;
  spec.indicators = 3;
  auto ds = generate_synthetic_panel(spec);
  CHECK(ds.observation_count() == 2u * 8u * 4u);
  CHECK(ds.countries.size() == 2);
  CHECK(ds.indicators == std::vector<std::string>{"X01", "X02", "X03"});
  CHECK(ds.target == "GDP");
  CHECK(ds.countries[0].quarters.front().str() == "2000Q1");
  CHECK(!ds.regularized);
}

TEST_CASE("same seed gives identical datasets; different seeds differ") {
  SyntheticSpec spec;
  spec.seed = 123;
  spec.noise_scale = 0.3;
  auto a = generate_synthetic_panel(spec);
  auto b = generate_synthetic_panel(spec);
  REQUIRE(a.countries.size() == b.countries.size());
  for (std::size_t c = 0; c < a.countries.size(); ++c) {
    CHECK(a.countries[c].states == b.countries[c].states);
    CHECK(a.countries[c].target == b.countries[c].target);
  }
  spec.seed = 124;
  auto c = generate_synthetic_panel(spec);
  CHECK(a.countries[0].target != c.countries[0].target);
}

TEST_CASE("noiseless linear panel: OLS recovers the generator coefficients") {
  SyntheticSpec spec;
  spec.countries = 3;
  spec.quarters = 48;
  spec.indicators = 4;
  spec.noise_scale = 0.0;
  spec.seed = 9;
  auto ds = generate_synthetic_panel(spec);
  const auto truth = synthetic_target_coefficients(spec);

  const auto& country = ds.countries[1];
  std::vector<std::vector<double>> design;
  std::vector<double> response;
  for (std::size_t t = 0; t < country.quarters.size(); ++t) {
    std::vector<double> row{1.0};
    row.insert(row.end(), country.states[t].begin(), country.states[t].end());
    design.push_back(std::move(row));
    response.push_back(country.target[t]);
  }
  auto model = fit_ols(design, response);
  REQUIRE(model.coefficients.size() == truth.size());
  for (std::size_t j = 0; j < truth.size(); ++j) {
    CHECK(std::abs(model.coefficients[j] - truth[j]) < 1e-8);
  }
  CHECK(model.insample_rmse < 1e-8);
}

TEST_CASE("nonlinear structure dips around 85% of the sample") {
  SyntheticSpec spec;
  spec.countries = 2;
  spec.quarters = 40;
  spec.indicators = 2;
  spec.structure = SyntheticStructure::nonlinear;
  spec.seed = 5;
  auto nonlinear = generate_synthetic_panel(spec);
  spec.structure = SyntheticStructure::linear;
  auto linear = generate_synthetic_panel(spec);

  const int center = static_cast<int>(std::floor(0.85 * (spec.quarters - 1)));
  const auto& nl = nonlinear.countries[0];
  const auto& li = linear.countries[0];
  // The linear-vs-nonlinear gap carries the smooth interaction term everywhere
  // and the slump only near the center: its peak must sit there and stand well
  // above the series edges.
  std::vector<double> gap;
  for (int t = 0; t < spec.quarters; ++t) gap.push_back(li.target[t] - nl.target[t]);
  const int argmax =
      static_cast<int>(std::max_element(gap.begin(), gap.end()) - gap.begin());
  CHECK(std::abs(argmax - center) <= 2);
  const double baseline = (gap.front() + gap.back()) / 2.0;
  CHECK(gap[argmax] - baseline > 25.0);
}

TEST_CASE("spec validation") {
  SyntheticSpec spec;
  spec.countries = 1;
  CHECK_THROWS_AS(generate_synthetic_panel(spec), ValidationError);
  spec.countries = 2;
  spec.quarters = 1;
  CHECK_THROWS_AS(generate_synthetic_panel(spec), ValidationError);
  spec.quarters = 8;
  spec.indicators = 1;
  spec.structure = SyntheticStructure::nonlinear;
  CHECK_THROWS_AS(generate_synthetic_panel(spec), ValidationError);
  spec.indicators = 2;
  spec.noise_scale = -1.0;
  CHECK_THROWS_AS(generate_synthetic_panel(spec), ValidationError);
}

TEST_CASE("country codes") {
  CHECK(synthetic_country_code(0) == "AA");
  CHECK(synthetic_country_code(25) == "AZ");
  CHECK(synthetic_country_code(26) == "BA");
}
