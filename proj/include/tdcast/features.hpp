#pragma once

#include <span>
#include <string>
#include <vector>

namespace tdcast {

enum class FeatureKind { raw, raw_with_bias, tensor_degree2 };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& name);

// Mapping from a raw state vector (state_dim entries) to the feature vector
// consumed by the value architectures.
struct FeatureSpec {
  FeatureKind kind = FeatureKind::raw;
  int state_dim = 0;

  // raw: state_dim; raw_with_bias: state_dim + 1;
  // tensor_degree2: (state_dim + 1)(state_dim + 2) / 2.
  int dim() const;
  void validate() const;
  std::string str() const;
};

// tensor_degree2 layout: products z_a * z_b for 0 <= a <= b over the
// bias-augmented vector z = (1, state...). Bias first, then the linear terms
// in state order, then the quadratic terms in row-major upper-triangular
// order.
std::vector<double> encode(std::span<const double> state, const FeatureSpec& spec);

}  // namespace tdcast
