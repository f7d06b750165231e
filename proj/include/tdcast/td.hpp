#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdcast/panel.hpp"
#include "tdcast/value_model.hpp"

namespace tdcast {

enum class ArchitectureKind { linear, network };

std::string to_string(ArchitectureKind a);
ArchitectureKind architecture_from_string(const std::string& name);

struct TrainConfig {
  double alpha = 0.9;    // discount factor, strictly inside (0,1)
  double gamma0 = 0.1;   // initial step size
  double decay_tau = 0;  // schedule scale in updates; 0 resolves to 10x transition count
  int epochs = 100;
  bool shuffle = true;
  std::uint64_t seed = 42;
  ArchitectureKind architecture = ArchitectureKind::network;
  Activation activation = Activation::relu;
  FeatureSpec features;
  int hidden_nodes = 16;
  // Apply the hidden-weight update with the already-updated output weights
  // instead of the pre-update ones (literal listing order).
  bool strict_update_order = false;
  std::uint64_t delta_log_stride = 1;  // log every Nth temporal difference; 0 disables

  void validate() const;
};

struct DeltaRecord {
  std::uint64_t update = 0;
  int epoch = 0;
  double gamma = 0.0;
  double delta = 0.0;
};

struct TrainLog {
  std::vector<DeltaRecord> deltas;  // thinned by delta_log_stride
  std::vector<double> epoch_mean_abs_delta;
  double final_step_size = 0.0;
  std::uint64_t update_count = 0;
  double resolved_decay_tau = 0.0;
};

// gamma0 / (1 + t / tau): strictly decreasing, gamma0 at t = 0, halved at t = tau.
double step_size(std::uint64_t update, double gamma0, double decay_tau);

// One TD(0) update. The temporal difference is
//   delta = J(state_from) - alpha * J(state_to) - cost,
// evaluated at the current weights; the weights then move by
// -gamma * delta * (gradient of the score at state_from).
std::pair<LinearModel, double> td_step_linear(const LinearModel& model, const Transition& tr,
                                              double alpha, double gamma);
std::pair<NetworkModel, double> td_step_network(const NetworkModel& model, const Transition& tr,
                                                double alpha, double gamma,
                                                bool strict_update_order = false);

struct TrainResult {
  ValueModel model;
  TrainLog log;
};

// Sweeps the transitions for config.epochs epochs (shuffled per epoch when
// config.shuffle), decaying the step size across the whole run. Aborts with
// DivergenceError when any weight turns non-finite or exceeds 1e8.
TrainResult train(std::span<const Transition> transitions, const TrainConfig& config);

// Exact state values of a finite Markov reward process: solves
// (I - alpha P) J = expected_cost directly. Test oracle for the TD trainer.
std::vector<double> solve_finite_mrp(const std::vector<std::vector<double>>& transition_probs,
                                     const std::vector<double>& expected_cost, double alpha);

void write_train_log_csv(const TrainLog& log, std::ostream& out);

}  // namespace tdcast
