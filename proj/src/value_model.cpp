#include "tdcast/value_model.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>

#include "tdcast/errors.hpp"
#include "tdcast/rng.hpp"

namespace tdcast {

namespace {

void check_feature_length(std::size_t got, int expected, const char* who) {
  if (static_cast<int>(got) != expected) {
    throw ShapeError(std::string(who) + ": feature vector has " + std::to_string(got) +
                     " entries, model expects " + std::to_string(expected));
  }
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Activation a) { return a == Activation::logistic ? "logistic" : "relu"; }

Activation activation_from_string(const std::string& name) {
  if (name == "logistic") return Activation::logistic;
  if (name == "relu") return Activation::relu;
  throw ParseError("unknown activation '" + name + "' (expected logistic or relu)");
}

double activation_eval(Activation a, double x) {
  if (a == Activation::logistic) return 1.0 / (1.0 + std::exp(-x));
  return x > 0.0 ? x : 0.0;
}

double activation_slope(Activation a, double preactivation) {
  if (a == Activation::relu) return preactivation > 0.0 ? 1.0 : 0.0;
  double s = activation_eval(Activation::logistic, preactivation);
  return s * (1.0 - s);
}

LinearModel make_linear_model(const FeatureSpec& spec) {
  spec.validate();
  LinearModel m;
  m.features = spec;
  m.weights.assign(spec.dim(), 0.0);
  return m;
}

double linear_eval(const LinearModel& model, std::span<const double> feature_vec) {
  check_feature_length(feature_vec.size(), model.features.dim(), "linear_eval");
  double score = 0.0;
  for (std::size_t l = 0; l < feature_vec.size(); ++l) score += model.weights[l] * feature_vec[l];
  return score;
}

NetworkEval network_eval(const NetworkModel& model, std::span<const double> feature_vec) {
  const int q = model.features.dim();
  check_feature_length(feature_vec.size(), q, "network_eval");
  NetworkEval ev;
  ev.hidden.resize(model.hidden_nodes);
  ev.preactivation.resize(model.hidden_nodes);
  for (int k = 0; k < model.hidden_nodes; ++k) {
    double pre = 0.0;
    const double* row = &model.hidden_weights[static_cast<std::size_t>(k) * q];
    for (int l = 0; l < q; ++l) pre += row[l] * feature_vec[l];
    ev.preactivation[k] = pre;
    ev.hidden[k] = activation_eval(model.activation, pre);
    ev.score += model.output_weights[k] * ev.hidden[k];
  }
  return ev;
}

NetworkGradients network_gradients(const NetworkModel& model, std::span<const double> feature_vec) {
  const int q = model.features.dim();
  NetworkEval ev = network_eval(model, feature_vec);
  NetworkGradients g;
  g.output = ev.hidden;
  g.hidden.assign(model.hidden_weights.size(), 0.0);
  for (int k = 0; k < model.hidden_nodes; ++k) {
    const double slope = activation_slope(model.activation, ev.preactivation[k]);
    if (slope == 0.0) continue;
    const double coef = model.output_weights[k] * slope;
    for (int l = 0; l < q; ++l) {
      g.hidden[static_cast<std::size_t>(k) * q + l] = coef * feature_vec[l];
    }
  }
  return g;
}

NetworkModel init_network(int hidden_nodes, const FeatureSpec& spec, Activation activation,
                          std::uint64_t seed) {
  spec.validate();
  if (hidden_nodes < 1) throw ValidationError("hidden_nodes must be >= 1");
  NetworkModel m;
  m.features = spec;
  m.activation = activation;
  m.hidden_nodes = hidden_nodes;
  m.seed = seed;
  const int q = spec.dim();
  const double bound = 1.0 / std::sqrt(static_cast<double>(q));
  std::mt19937_64 rng(seed);
  m.hidden_weights.resize(static_cast<std::size_t>(hidden_nodes) * q);
  for (auto& w : m.hidden_weights) w = uniform_in(rng, -bound, bound);
  m.output_weights.resize(hidden_nodes);
  for (auto& w : m.output_weights) w = uniform_in(rng, -bound, bound);
  return m;
}

const FeatureSpec& model_features(const ValueModel& model) {
  return std::visit([](const auto& m) -> const FeatureSpec& { return m.features; }, model);
}

double model_eval(const ValueModel& model, std::span<const double> feature_vec) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return linear_eval(*lin, feature_vec);
  return network_eval(std::get<NetworkModel>(model), feature_vec).score;
}

double score_state(const ValueModel& model, std::span<const double> state) {
  return model_eval(model, encode(state, model_features(model)));
}

namespace {

constexpr const char* kMagic = "tdcast-model";
constexpr int kFormatVersion = 1;

void expect_token(std::istream& in, const std::string& expected) {
  std::string tok;
  if (!(in >> tok) || tok != expected) {
    throw ParseError("model file: expected '" + expected + "'" +
                     (tok.empty() ? "" : ", got '" + tok + "'"));
  }
}

template <typename T>
T read_value(std::istream& in, const char* what) {
  T v;
  if (!(in >> v)) throw ParseError(std::string("model file: failed to read ") + what);
  return v;
}

}  // namespace

void save_model(const ValueModel& model, std::ostream& out) {
  out << kMagic << ' ' << kFormatVersion << '\n';
  const FeatureSpec& spec = model_features(model);
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    out << "architecture linear\n";
    out << "feature_kind " << to_string(spec.kind) << '\n';
    out << "state_dim " << spec.state_dim << '\n';
    out << "feature_dim " << spec.dim() << '\n';
    out << "seed " << lin->seed << '\n';
    out << "weights " << lin->weights.size() << '\n';
    for (double w : lin->weights) out << full_precision(w) << '\n';
    return;
  }
  const auto& net = std::get<NetworkModel>(model);
  out << "architecture network\n";
  out << "activation " << to_string(net.activation) << '\n';
  out << "feature_kind " << to_string(spec.kind) << '\n';
  out << "state_dim " << spec.state_dim << '\n';
  out << "feature_dim " << spec.dim() << '\n';
  out << "hidden_nodes " << net.hidden_nodes << '\n';
  out << "seed " << net.seed << '\n';
  out << "output_weights " << net.output_weights.size() << '\n';
  for (double w : net.output_weights) out << full_precision(w) << '\n';
  out << "hidden_weights " << net.hidden_nodes << ' ' << spec.dim() << '\n';
  const int q = spec.dim();
  for (int k = 0; k < net.hidden_nodes; ++k) {
    for (int l = 0; l < q; ++l) {
      out << full_precision(net.hidden_weights[static_cast<std::size_t>(k) * q + l])
          << (l + 1 == q ? '\n' : ' ');
    }
  }
}

ValueModel load_model(std::istream& in) {
  expect_token(in, kMagic);
  const int version = read_value<int>(in, "format version");
  if (version != kFormatVersion) {
    throw ParseError("model file: unsupported format version " + std::to_string(version));
  }
  expect_token(in, "architecture");
  const auto architecture = read_value<std::string>(in, "architecture");

  if (architecture == "linear") {
    LinearModel m;
    expect_token(in, "feature_kind");
    m.features.kind = feature_kind_from_string(read_value<std::string>(in, "feature kind"));
    expect_token(in, "state_dim");
    m.features.state_dim = read_value<int>(in, "state_dim");
    expect_token(in, "feature_dim");
    const int q = read_value<int>(in, "feature_dim");
    if (q != m.features.dim()) throw ParseError("model file: feature_dim does not match spec");
    expect_token(in, "seed");
    m.seed = read_value<std::uint64_t>(in, "seed");
    expect_token(in, "weights");
    const auto n = read_value<std::size_t>(in, "weight count");
    if (static_cast<int>(n) != q) throw ParseError("model file: weight count does not match feature_dim");
    m.weights.resize(n);
    for (auto& w : m.weights) w = read_value<double>(in, "weight");
    return m;
  }
  if (architecture != "network") {
    throw ParseError("model file: unknown architecture '" + architecture + "'");
  }

  NetworkModel m;
  expect_token(in, "activation");
  m.activation = activation_from_string(read_value<std::string>(in, "activation"));
  expect_token(in, "feature_kind");
  m.features.kind = feature_kind_from_string(read_value<std::string>(in, "feature kind"));
  expect_token(in, "state_dim");
  m.features.state_dim = read_value<int>(in, "state_dim");
  expect_token(in, "feature_dim");
  const int q = read_value<int>(in, "feature_dim");
  if (q != m.features.dim()) throw ParseError("model file: feature_dim does not match spec");
  expect_token(in, "hidden_nodes");
  m.hidden_nodes = read_value<int>(in, "hidden_nodes");
  if (m.hidden_nodes < 1) throw ParseError("model file: hidden_nodes must be >= 1");
  expect_token(in, "seed");
  m.seed = read_value<std::uint64_t>(in, "seed");
  expect_token(in, "output_weights");
  const auto s = read_value<std::size_t>(in, "output weight count");
  if (static_cast<int>(s) != m.hidden_nodes) {
    throw ParseError("model file: output weight count does not match hidden_nodes");
  }
  m.output_weights.resize(s);
  for (auto& w : m.output_weights) w = read_value<double>(in, "output weight");
  expect_token(in, "hidden_weights");
  const auto rows = read_value<std::size_t>(in, "hidden weight rows");
  const auto cols = read_value<std::size_t>(in, "hidden weight cols");
  if (static_cast<int>(rows) != m.hidden_nodes || static_cast<int>(cols) != q) {
    throw ParseError("model file: hidden weight shape does not match header");
  }
  m.hidden_weights.resize(rows * cols);
  for (auto& w : m.hidden_weights) w = read_value<double>(in, "hidden weight");
  return m;
}

}  // namespace tdcast
