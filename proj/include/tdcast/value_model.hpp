#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tdcast/features.hpp"

namespace tdcast {

enum class Activation { logistic, relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

double activation_eval(Activation a, double x);
// Derivative with respect to the preactivation. ReLU at exactly 0 returns 0.
double activation_slope(Activation a, double preactivation);

// Score is the dot product of the weights with the feature vector.
struct LinearModel {
  FeatureSpec features;
  std::vector<double> weights;
  std::uint64_t seed = 0;
};

LinearModel make_linear_model(const FeatureSpec& spec);  // zero weights
double linear_eval(const LinearModel& model, std::span<const double> feature_vec);

// One hidden layer of `hidden_nodes` units over the feature vector; the score
// is the linear combination of the unit outputs. No separate unit bias: bias
// enters through the feature encoding.
struct NetworkModel {
  FeatureSpec features;
  Activation activation = Activation::relu;
  int hidden_nodes = 0;
  std::vector<double> hidden_weights;  // row-major hidden_nodes x features.dim()
  std::vector<double> output_weights;  // hidden_nodes
  std::uint64_t seed = 0;

  double hidden_weight(int node, int feature) const {
    return hidden_weights[static_cast<std::size_t>(node) * features.dim() + feature];
  }
};

struct NetworkEval {
  double score = 0.0;
  std::vector<double> hidden;
  std::vector<double> preactivation;
};

NetworkEval network_eval(const NetworkModel& model, std::span<const double> feature_vec);

struct NetworkGradients {
  std::vector<double> output;  // d score / d output_weights[k] = hidden[k]
  std::vector<double> hidden;  // row-major; d score / d hidden_weights[k][l]
};

NetworkGradients network_gradients(const NetworkModel& model, std::span<const double> feature_vec);

// Weights i.i.d. uniform on [-1/sqrt(q), +1/sqrt(q)], q = feature dimension,
// from a deterministic seeded stream: hidden rows first, then output weights.
NetworkModel init_network(int hidden_nodes, const FeatureSpec& spec, Activation activation,
                          std::uint64_t seed);

using ValueModel = std::variant<LinearModel, NetworkModel>;

const FeatureSpec& model_features(const ValueModel& model);
double model_eval(const ValueModel& model, std::span<const double> feature_vec);
// Encode the raw state with the model's feature spec, then evaluate.
double score_state(const ValueModel& model, std::span<const double> state);

// Self-describing key-value text document; weights at full decimal precision
// so save -> load -> eval is bit-exact. Schema documented in the README.
void save_model(const ValueModel& model, std::ostream& out);
ValueModel load_model(std::istream& in);

}  // namespace tdcast
