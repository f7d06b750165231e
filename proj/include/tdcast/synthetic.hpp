#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdcast/panel.hpp"

namespace tdcast {

enum class SyntheticStructure { linear, nonlinear };

std::string to_string(SyntheticStructure s);
SyntheticStructure synthetic_structure_from_string(const std::string& name);

struct SyntheticSpec {
  int countries = 4;
  int quarters = 24;
  int indicators = 3;  // non-target indicators; the target is added on top
  SyntheticStructure structure = SyntheticStructure::linear;
  double noise_scale = 0.0;  // standard deviation of the target observation noise
  std::uint64_t seed = 1;

  void validate() const;
};

// Raw (unregularized) panel. A common AR(1) cycle plus one idiosyncratic
// AR(1) per indicator drive the indicator levels; the target is an affine
// function of the indicators (structure = linear) or that plus a product
// interaction and a piecewise-linear slump near 85% of the sample
// (structure = nonlinear), plus seeded observation noise. The exact
// equations and constants are documented in the README and fixed.
PanelDataset generate_synthetic_panel(const SyntheticSpec& spec);

// The affine truth of the linear structure, intercept first.
std::vector<double> synthetic_target_coefficients(const SyntheticSpec& spec);

std::string synthetic_country_code(int index);
std::string synthetic_indicator_name(int index);

}  // namespace tdcast
