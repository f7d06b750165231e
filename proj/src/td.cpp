#include "tdcast/td.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "tdcast/errors.hpp"
#include "tdcast/rng.hpp"

namespace tdcast {

namespace {

constexpr double kWeightLimit = 1e8;

void check_state_dim(const Transition& tr, int state_dim) {
  if (static_cast<int>(tr.state_from.size()) != state_dim ||
      static_cast<int>(tr.state_to.size()) != state_dim) {
    throw ShapeError("transition state size does not match the model's state_dim (" +
                     std::to_string(state_dim) + ")");
  }
}

double step_linear_on_features(LinearModel& model, std::span<const double> feat_from,
                               std::span<const double> feat_to, double cost, double alpha,
                               double gamma) {
  const double score_from = linear_eval(model, feat_from);
  const double score_to = linear_eval(model, feat_to);
  const double delta = score_from - alpha * score_to - cost;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    model.weights[l] -= gamma * delta * feat_from[l];
  }
  return delta;
}

double step_network_on_features(NetworkModel& model, std::span<const double> feat_from,
                                std::span<const double> feat_to, double cost, double alpha,
                                double gamma, bool strict_update_order) {
  const NetworkEval from = network_eval(model, feat_from);
  const NetworkEval to = network_eval(model, feat_to);
  const double delta = from.score - alpha * to.score - cost;
  const int q = model.features.dim();
  for (int k = 0; k < model.hidden_nodes; ++k) {
    const double output_before = model.output_weights[k];
    model.output_weights[k] -= gamma * delta * from.hidden[k];
    const double coef = strict_update_order ? model.output_weights[k] : output_before;
    const double slope = activation_slope(model.activation, from.preactivation[k]);
    if (slope == 0.0) continue;  // inactive unit: its row is untouched
    double* row = &model.hidden_weights[static_cast<std::size_t>(k) * q];
    for (int l = 0; l < q; ++l) {
      row[l] -= gamma * delta * coef * slope * feat_from[l];
    }
  }
  return delta;
}

bool weights_ok(std::span<const double> weights) {
  for (double w : weights) {
    if (!std::isfinite(w) || std::abs(w) > kWeightLimit) return false;
  }
  return true;
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(ArchitectureKind a) {
  return a == ArchitectureKind::linear ? "linear" : "network";
}

ArchitectureKind architecture_from_string(const std::string& name) {
  if (name == "linear") return ArchitectureKind::linear;
  if (name == "network") return ArchitectureKind::network;
  throw ParseError("unknown architecture '" + name + "' (expected linear or network)");
}

void TrainConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
  if (!(gamma0 > 0.0)) throw ValidationError("gamma0 must be positive");
  if (decay_tau < 0.0) throw ValidationError("decay_tau must be >= 0");
  if (epochs < 0) throw ValidationError("epochs must be >= 0");
  features.validate();
  if (architecture == ArchitectureKind::network && hidden_nodes < 1) {
    throw ValidationError("hidden_nodes must be >= 1");
  }
}

double step_size(std::uint64_t update, double gamma0, double decay_tau) {
  return gamma0 / (1.0 + static_cast<double>(update) / decay_tau);
}

std::pair<LinearModel, double> td_step_linear(const LinearModel& model, const Transition& tr,
                                              double alpha, double gamma) {
  check_state_dim(tr, model.features.state_dim);
  auto feat_from = encode(tr.state_from, model.features);
  auto feat_to = encode(tr.state_to, model.features);
  LinearModel next = model;
  double delta = step_linear_on_features(next, feat_from, feat_to, tr.cost, alpha, gamma);
  return {std::move(next), delta};
}

std::pair<NetworkModel, double> td_step_network(const NetworkModel& model, const Transition& tr,
                                                double alpha, double gamma,
                                                bool strict_update_order) {
  check_state_dim(tr, model.features.state_dim);
  auto feat_from = encode(tr.state_from, model.features);
  auto feat_to = encode(tr.state_to, model.features);
  NetworkModel next = model;
  double delta = step_network_on_features(next, feat_from, feat_to, tr.cost, alpha, gamma,
                                          strict_update_order);
  return {std::move(next), delta};
}

TrainResult train(std::span<const Transition> transitions, const TrainConfig& config) {
  config.validate();
  if (transitions.empty()) throw ValidationError("cannot train on an empty transition set");
  for (const auto& tr : transitions) check_state_dim(tr, config.features.state_dim);

  const std::size_t n = transitions.size();
  std::vector<std::vector<double>> feat_from(n), feat_to(n);
  for (std::size_t i = 0; i < n; ++i) {
    feat_from[i] = encode(transitions[i].state_from, config.features);
    feat_to[i] = encode(transitions[i].state_to, config.features);
  }

  const double tau = config.decay_tau > 0.0 ? config.decay_tau : 10.0 * static_cast<double>(n);

  LinearModel linear = make_linear_model(config.features);
  NetworkModel network;
  const bool is_network = config.architecture == ArchitectureKind::network;
  if (is_network) {
    network = init_network(config.hidden_nodes, config.features, config.activation,
                           sub_seed(config.seed, seed_offset::network_init));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(sub_seed(config.seed, seed_offset::shuffle));

  TrainLog log;
  log.resolved_decay_tau = tau;
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) shuffle_in_place(order, shuffle_rng);
    double abs_sum = 0.0;
    for (std::size_t i : order) {
      const double gamma = step_size(t, config.gamma0, tau);
      double delta;
      bool ok;
      if (is_network) {
        delta = step_network_on_features(network, feat_from[i], feat_to[i], transitions[i].cost,
                                         config.alpha, gamma, config.strict_update_order);
        ok = weights_ok(network.output_weights) && weights_ok(network.hidden_weights);
      } else {
        delta = step_linear_on_features(linear, feat_from[i], feat_to[i], transitions[i].cost,
                                        config.alpha, gamma);
        ok = weights_ok(linear.weights);
      }
      if (!ok || !std::isfinite(delta)) throw DivergenceError(epoch, t, gamma);
      if (config.delta_log_stride > 0 && t % config.delta_log_stride == 0) {
        log.deltas.push_back({t, epoch, gamma, delta});
      }
      abs_sum += std::abs(delta);
      ++t;
    }
    log.epoch_mean_abs_delta.push_back(abs_sum / static_cast<double>(n));
  }
  log.update_count = t;
  log.final_step_size = t == 0 ? config.gamma0 : step_size(t - 1, config.gamma0, tau);

  TrainResult result{is_network ? ValueModel(std::move(network)) : ValueModel(std::move(linear)),
                     std::move(log)};
  std::visit([&](auto& m) { m.seed = config.seed; }, result.model);
  return result;
}

std::vector<double> solve_finite_mrp(const std::vector<std::vector<double>>& transition_probs,
                                     const std::vector<double>& expected_cost, double alpha) {
  const std::size_t n = transition_probs.size();
  if (n == 0) throw ValidationError("empty transition matrix");
  if (expected_cost.size() != n) throw ValidationError("cost vector size does not match matrix");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = transition_probs[i];
    if (row.size() != n) throw ValidationError("transition matrix is not square");
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(row[j]) || row[j] < 0.0) {
        throw ValidationError("transition probabilities must be finite and non-negative");
      }
      sum += row[j];
      system(i, j) -= alpha * row[j];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("row " + std::to_string(i) + " of the transition matrix sums to " +
                            full_precision(sum) + ", expected 1");
    }
    if (!std::isfinite(expected_cost[i])) throw ValidationError("costs must be finite");
    rhs(i) = expected_cost[i];
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw Error("value system is singular");
  Eigen::VectorXd values = lu.solve(rhs);

  const double residual = (system * values - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-10)) {
    throw Error("value solve residual too large: " + full_precision(residual));
  }
  return {values.data(), values.data() + n};
}

void write_train_log_csv(const TrainLog& log, std::ostream& out) {
  out << "update,epoch,gamma,delta\n";
  for (const auto& rec : log.deltas) {
    out << rec.update << ',' << rec.epoch << ',' << full_precision(rec.gamma) << ','
        << full_precision(rec.delta) << '\n';
  }
}

}  // namespace tdcast
