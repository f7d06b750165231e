#include "tdcast/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "tdcast/errors.hpp"

namespace tdcast {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_finite_value(const std::string& field, std::size_t line_no) {
  if (field.empty()) throw ParseError("empty value field", line_no);
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + field.size()) throw ParseError("malformed value '" + field + "'", line_no);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + field + "'", line_no);
  return v;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RegularizationParams fit_regularization(std::span<const double> series, const std::string& context) {
  if (series.empty()) throw ValidationError("empty series for " + context);
  double lo = series[0];
  double hi = series[0];
  for (double v : series) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    throw ValidationError("degenerate series (constant values) for " + context);
  }
  return RegularizationParams{lo, hi};
}

int CountrySeries::gap_count() const {
  int gaps = 0;
  for (std::size_t t = 0; t + 1 < quarters.size(); ++t) {
    if (quarters[t].next() != quarters[t + 1]) ++gaps;
  }
  return gaps;
}

std::size_t PanelDataset::observation_count() const {
  std::size_t n = 0;
  for (const auto& c : countries) n += c.quarters.size() * (indicators.size() + 1);
  return n;
}

const CountrySeries* PanelDataset::find_country(const std::string& code) const {
  for (const auto& c : countries) {
    if (c.country == code) return &c;
  }
  return nullptr;
}

const RegularizationParams* PanelDataset::find_regularization(const std::string& country,
                                                              const std::string& indicator) const {
  for (const auto& e : regularization) {
    if (e.country == country && e.indicator == indicator) return &e.params;
  }
  return nullptr;
}

PanelDataset parse_panel_csv(std::istream& in, const std::string& target_indicator) {
  if (target_indicator.empty()) throw ValidationError("target indicator name must not be empty");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 0);
  ++line_no;
  {
    auto header = split_fields(line);
    const std::vector<std::string> expected{"country", "quarter", "indicator", "value"};
    if (std::vector<std::string>(header.begin(), header.end()) != expected) {
      throw ParseError("bad header '" + trim(line) + "' (expected country,quarter,indicator,value)",
                       line_no);
    }
  }

  // country -> quarter serial -> indicator -> value
  std::map<std::string, std::map<int, std::map<std::string, double>>> grouped;
  std::set<std::string> indicator_set;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    }
    const std::string& country = fields[0];
    const std::string& indicator = fields[2];
    if (country.empty()) throw ParseError("empty country field", line_no);
    if (indicator.empty()) throw ParseError("empty indicator field", line_no);
    Quarter q;
    try {
      q = Quarter::parse(fields[1]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    double value = parse_finite_value(fields[3], line_no);

    auto [it, inserted] = grouped[country][q.serial()].emplace(indicator, value);
    (void)it;
    if (!inserted) {
      throw ParseError("duplicate observation for (" + country + ", " + q.str() + ", " + indicator + ")",
                       line_no);
    }
    indicator_set.insert(indicator);
  }

  if (grouped.empty()) throw ParseError("no data rows", line_no);
  if (!indicator_set.count(target_indicator)) {
    throw ValidationError("target indicator '" + target_indicator + "' not found in input");
  }

  PanelDataset ds;
  ds.target = target_indicator;
  for (const auto& name : indicator_set) {
    if (name != target_indicator) ds.indicators.push_back(name);
  }

  for (auto& [country, by_quarter] : grouped) {
    CountrySeries series;
    series.country = country;
    for (auto& [serial, values] : by_quarter) {
      Quarter q = Quarter::from_serial(serial);
      // A quarter missing any indicator (or the target) is dropped whole.
      std::vector<std::string> missing;
      for (const auto& name : ds.indicators) {
        if (!values.count(name)) missing.push_back(name);
      }
      if (!values.count(target_indicator)) missing.push_back(target_indicator);
      if (!missing.empty()) {
        std::string joined;
        for (const auto& m : missing) joined += (joined.empty() ? "" : ", ") + m;
        ds.notes.push_back("dropped " + country + " " + q.str() + ": missing " + joined);
        continue;
      }
      std::vector<double> state;
      state.reserve(ds.indicators.size());
      for (const auto& name : ds.indicators) state.push_back(values.at(name));
      series.quarters.push_back(q);
      series.states.push_back(std::move(state));
      series.target.push_back(values.at(target_indicator));
    }
    if (series.quarters.empty()) {
      ds.notes.push_back("dropped country " + country + ": no complete quarters");
      continue;
    }
    ds.countries.push_back(std::move(series));
  }

  if (ds.countries.empty()) throw ValidationError("no usable observations after validation");
  return ds;
}

PanelDataset regularize(const PanelDataset& raw) {
  if (raw.regularized) throw ValidationError("dataset is already regularized");
  PanelDataset ds = raw;
  for (auto& series : ds.countries) {
    const std::size_t n = series.quarters.size();
    for (std::size_t i = 0; i < ds.indicators.size(); ++i) {
      std::vector<double> column(n);
      for (std::size_t t = 0; t < n; ++t) column[t] = series.states[t][i];
      auto params = fit_regularization(
          column, "country " + series.country + ", indicator " + ds.indicators[i]);
      for (std::size_t t = 0; t < n; ++t) series.states[t][i] = params.apply(column[t]);
      ds.regularization.push_back({series.country, ds.indicators[i], params});
    }
    auto params = fit_regularization(series.target,
                                     "country " + series.country + ", indicator " + ds.target);
    for (std::size_t t = 0; t < n; ++t) series.target[t] = params.apply(series.target[t]);
    ds.regularization.push_back({series.country, ds.target, params});
  }
  std::sort(ds.regularization.begin(), ds.regularization.end(), [](const auto& a, const auto& b) {
    return std::tie(a.country, a.indicator) < std::tie(b.country, b.indicator);
  });
  ds.regularized = true;
  return ds;
}

void write_regularization_csv(const PanelDataset& ds, std::ostream& out) {
  out << "country,indicator,min,max\n";
  for (const auto& e : ds.regularization) {
    out << e.country << ',' << e.indicator << ',' << full_precision(e.params.min) << ','
        << full_precision(e.params.max) << '\n';
  }
}

void write_panel_csv(const PanelDataset& ds, std::ostream& out) {
  out << "country,quarter,indicator,value\n";
  for (const auto& series : ds.countries) {
    for (std::size_t t = 0; t < series.quarters.size(); ++t) {
      const std::string q = series.quarters[t].str();
      for (std::size_t i = 0; i < ds.indicators.size(); ++i) {
        out << series.country << ',' << q << ',' << ds.indicators[i] << ','
            << full_precision(series.states[t][i]) << '\n';
      }
      out << series.country << ',' << q << ',' << ds.target << ','
          << full_precision(series.target[t]) << '\n';
    }
  }
}

TransitionSet build_transitions(const PanelDataset& ds, const CountryPredicate& include) {
  if (!ds.regularized) {
    throw ValidationError("dataset must be regularized before building transitions");
  }
  TransitionSet out;
  for (const auto& series : ds.countries) {
    if (include && !include(series.country)) continue;
    if (series.quarters.size() < 2) {
      out.warnings.push_back(series.country + ": fewer than 2 quarters, no transitions");
      continue;
    }
    for (std::size_t t = 0; t + 1 < series.quarters.size(); ++t) {
      if (series.quarters[t].next() != series.quarters[t + 1]) continue;  // gap breaks the chain
      Transition tr;
      tr.state_from = series.states[t];
      tr.state_to = series.states[t + 1];
      tr.target_change = series.target[t + 1] - series.target[t];
      tr.cost = tr.target_change * tr.target_change;
      tr.country = series.country;
      tr.quarter_from = series.quarters[t];
      out.transitions.push_back(std::move(tr));
    }
  }
  return out;
}

}  // namespace tdcast
