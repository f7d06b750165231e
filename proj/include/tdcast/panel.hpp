#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tdcast/quarter.hpp"

namespace tdcast {

// Min-max scaling constants for one (country, indicator) series.
struct RegularizationParams {
  double min = 0.0;
  double max = 1.0;

  double apply(double x) const { return (x - min) / (max - min); }
  double invert(double v) const { return v * (max - min) + min; }
};

// Throws ValidationError when the series is constant (max == min); `context`
// names the offending series in the message.
RegularizationParams fit_regularization(std::span<const double> series, const std::string& context);

inline double inverse_regularize(double value, const RegularizationParams& params) {
  return params.invert(value);
}

struct RegularizationEntry {
  std::string country;
  std::string indicator;
  RegularizationParams params;
};

// One country's complete quarters, sorted ascending. states[t] holds the
// non-target indicator values in dataset indicator order; target[t] holds the
// target value for the same quarter.
struct CountrySeries {
  std::string country;
  std::vector<Quarter> quarters;
  std::vector<std::vector<double>> states;
  std::vector<double> target;

  // Successive stored quarters that are not calendar-adjacent.
  int gap_count() const;
};

struct PanelDataset {
  std::string target;                    // target indicator name
  std::vector<std::string> indicators;   // non-target indicators, lexicographic; fixes feature order
  std::vector<CountrySeries> countries;  // sorted by country code
  std::vector<std::string> notes;        // dropped quarters / dropped countries
  bool regularized = false;
  std::vector<RegularizationEntry> regularization;  // filled by regularize(), sorted

  int state_dim() const { return static_cast<int>(indicators.size()); }
  std::size_t observation_count() const;
  const CountrySeries* find_country(const std::string& code) const;
  const RegularizationParams* find_regularization(const std::string& country,
                                                  const std::string& indicator) const;
};

// CSV with header `country,quarter,indicator,value`. Quarters with a missing
// indicator are dropped (recorded in notes); duplicate keys and malformed
// rows are errors with the line number.
PanelDataset parse_panel_csv(std::istream& in, const std::string& target_indicator);

// Min-max scales every (country, indicator) series in place, each over its
// own full stored range, and records the constants for inversion.
PanelDataset regularize(const PanelDataset& raw);

void write_regularization_csv(const PanelDataset& ds, std::ostream& out);
void write_panel_csv(const PanelDataset& ds, std::ostream& out);

// One adjacent-quarter move of one country.
struct Transition {
  std::vector<double> state_from;  // regularized state at quarter t
  std::vector<double> state_to;    // regularized state at quarter t+1
  double target_change = 0.0;      // regularized target(t+1) - target(t)
  double cost = 0.0;               // target_change^2
  std::string country;
  Quarter quarter_from;
};

using CountryPredicate = std::function<bool(const std::string&)>;

struct TransitionSet {
  std::vector<Transition> transitions;
  std::vector<std::string> warnings;
};

// Builds one transition per adjacent quarter pair per included country; a gap
// breaks the chain, and a country with fewer than two quarters is skipped
// with a warning. Requires a regularized dataset.
TransitionSet build_transitions(const PanelDataset& ds, const CountryPredicate& include = {});

}  // namespace tdcast
