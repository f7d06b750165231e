#include "tdcast/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "tdcast/errors.hpp"
#include "tdcast/rng.hpp"

namespace tdcast {

namespace {

// Generator constants. Changing any of these changes every derived number,
// so they are part of the documented format.
constexpr double kCyclePersistence = 0.8;
constexpr double kCycleShock = 0.5;
constexpr double kIdioPersistence = 0.6;
constexpr double kIdioShock = 0.4;
constexpr double kIndicatorBase = 100.0;
constexpr double kIndicatorSpacing = 10.0;
constexpr double kCycleLoading = 8.0;
constexpr double kIdioLoading = 5.0;
constexpr double kTargetIntercept = 50.0;
constexpr double kInteractionCoef = 0.002;
constexpr double kSlumpDepth = 40.0;
constexpr int kStartYear = 2000;

double slump(int t, int quarters) {
  const int center = static_cast<int>(std::floor(0.85 * (quarters - 1)));
  const int half_width = std::max(2, quarters / 16);
  const int dist = std::abs(t - center);
  if (dist > half_width) return 0.0;
  return -kSlumpDepth * (1.0 - static_cast<double>(dist) / half_width);
}

}  // namespace

std::string to_string(SyntheticStructure s) {
  return s == SyntheticStructure::linear ? "linear" : "nonlinear";
}

SyntheticStructure synthetic_structure_from_string(const std::string& name) {
  if (name == "linear") return SyntheticStructure::linear;
  if (name == "nonlinear") return SyntheticStructure::nonlinear;
  throw ParseError("unknown synthetic structure '" + name + "' (expected linear or nonlinear)");
}

void SyntheticSpec::validate() const {
  if (countries < 2) throw ValidationError("synthetic panel needs at least 2 countries");
  if (countries > 26 * 26) throw ValidationError("synthetic panel supports at most 676 countries");
  if (quarters < 2) throw ValidationError("synthetic panel needs at least 2 quarters");
  if (indicators < 1) throw ValidationError("synthetic panel needs at least 1 indicator");
  if (structure == SyntheticStructure::nonlinear && indicators < 2) {
    throw ValidationError("nonlinear structure needs at least 2 indicators");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw ValidationError("noise_scale must be finite and >= 0");
  }
}

std::string synthetic_country_code(int index) {
  std::string code;
  code += static_cast<char>('A' + index / 26);
  code += static_cast<char>('A' + index % 26);
  return code;
}

std::string synthetic_indicator_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "X%02d", index + 1);
  return buf;
}

std::vector<double> synthetic_target_coefficients(const SyntheticSpec& spec) {
  std::vector<double> beta{kTargetIntercept};
  for (int m = 0; m < spec.indicators; ++m) beta.push_back(1.0 / (m + 1));
  return beta;
}

PanelDataset generate_synthetic_panel(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(sub_seed(spec.seed, seed_offset::synthetic));

  PanelDataset ds;
  ds.target = "GDP";
  for (int m = 0; m < spec.indicators; ++m) ds.indicators.push_back(synthetic_indicator_name(m));

  const auto beta = synthetic_target_coefficients(spec);
  for (int c = 0; c < spec.countries; ++c) {
    CountrySeries series;
    series.country = synthetic_country_code(c);
    double cycle = 0.0;
    std::vector<double> idio(spec.indicators, 0.0);
    for (int t = 0; t < spec.quarters; ++t) {
      cycle = kCyclePersistence * cycle + kCycleShock * normal01(rng);
      std::vector<double> state(spec.indicators);
      for (int m = 0; m < spec.indicators; ++m) {
        idio[m] = kIdioPersistence * idio[m] + kIdioShock * normal01(rng);
        state[m] = kIndicatorBase + kIndicatorSpacing * (m + 1) + kCycleLoading * cycle +
                   kIdioLoading * idio[m];
      }
      const double noise = normal01(rng);  // drawn regardless of scale to keep streams aligned
      double gdp = beta[0];
      for (int m = 0; m < spec.indicators; ++m) gdp += beta[m + 1] * state[m];
      if (spec.structure == SyntheticStructure::nonlinear) {
        gdp += kInteractionCoef * state[0] * state[1];
        gdp += slump(t, spec.quarters);
      }
      gdp += spec.noise_scale * noise;

      series.quarters.push_back(Quarter::from_serial(kStartYear * 4 + t));
      series.states.push_back(std::move(state));
      series.target.push_back(gdp);
    }
    ds.countries.push_back(std::move(series));
  }
  return ds;
}

}  // namespace tdcast
