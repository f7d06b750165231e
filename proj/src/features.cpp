#include "tdcast/features.hpp"

#include "tdcast/errors.hpp"

namespace tdcast {

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::raw: return "raw";
    case FeatureKind::raw_with_bias: return "raw_with_bias";
    case FeatureKind::tensor_degree2: return "tensor_degree2";
  }
  return "?";
}

FeatureKind feature_kind_from_string(const std::string& name) {
  if (name == "raw") return FeatureKind::raw;
  if (name == "raw_with_bias") return FeatureKind::raw_with_bias;
  if (name == "tensor_degree2") return FeatureKind::tensor_degree2;
  throw ParseError("unknown feature kind '" + name +
                   "' (expected raw, raw_with_bias or tensor_degree2)");
}

int FeatureSpec::dim() const {
  switch (kind) {
    case FeatureKind::raw: return state_dim;
    case FeatureKind::raw_with_bias: return state_dim + 1;
    case FeatureKind::tensor_degree2: return (state_dim + 1) * (state_dim + 2) / 2;
  }
  return 0;
}

void FeatureSpec::validate() const {
  if (state_dim < 1) throw ValidationError("feature spec needs state_dim >= 1");
}

std::string FeatureSpec::str() const {
  return to_string(kind) + "(state_dim=" + std::to_string(state_dim) + ")";
}

std::vector<double> encode(std::span<const double> state, const FeatureSpec& spec) {
  if (static_cast<int>(state.size()) != spec.state_dim) {
    throw ShapeError("feature encode: state has " + std::to_string(state.size()) +
                     " entries, spec expects " + std::to_string(spec.state_dim));
  }
  std::vector<double> out;
  switch (spec.kind) {
    case FeatureKind::raw:
      out.assign(state.begin(), state.end());
      break;
    case FeatureKind::raw_with_bias:
      out.reserve(state.size() + 1);
      out.push_back(1.0);
      out.insert(out.end(), state.begin(), state.end());
      break;
    case FeatureKind::tensor_degree2: {
      std::vector<double> z;
      z.reserve(state.size() + 1);
      z.push_back(1.0);
      z.insert(z.end(), state.begin(), state.end());
      out.reserve(spec.dim());
      for (std::size_t a = 0; a < z.size(); ++a) {
        for (std::size_t b = a; b < z.size(); ++b) {
          out.push_back(z[a] * z[b]);
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace tdcast
