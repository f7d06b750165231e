#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tdcast/panel.hpp"
#include "tdcast/rng.hpp"

namespace tdtest {

// A finite Markov reward process with one deterministic successor per state,
// plus its batch rendering as one-hot transitions (one per state). The TD
// fixed point of the batch is exactly the value vector of the process.
struct TestMrp {
  std::vector<std::vector<double>> probs;
  std::vector<double> cost;
  std::vector<tdcast::Transition> batch;
};

inline TestMrp make_deterministic_mrp(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TestMrp mrp;
  mrp.probs.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    const int succ = static_cast<int>(tdcast::uniform_index(rng, n));
    mrp.probs[i][succ] = 1.0;
    const double c = tdcast::uniform_in(rng, 0.1, 1.0);
    mrp.cost.push_back(c);
    tdcast::Transition tr;
    tr.state_from.assign(n, 0.0);
    tr.state_from[i] = 1.0;
    tr.state_to.assign(n, 0.0);
    tr.state_to[succ] = 1.0;
    tr.cost = c;
    tr.target_change = std::sqrt(c);
    tr.country = "MR";
    tr.quarter_from = tdcast::Quarter{2000, 1};
    mrp.batch.push_back(std::move(tr));
  }
  return mrp;
}

inline tdcast::Transition make_transition(std::vector<double> from, std::vector<double> to,
                                          double cost) {
  tdcast::Transition tr;
  tr.state_from = std::move(from);
  tr.state_to = std::move(to);
  tr.cost = cost;
  tr.target_change = cost >= 0.0 ? std::sqrt(cost) : 0.0;
  tr.country = "AA";
  tr.quarter_from = tdcast::Quarter{2000, 1};
  return tr;
}

inline std::filesystem::path make_temp_dir(const std::string& tag) {
  const auto ticks = std::chrono::steady_clock::now().time_since_epoch().count();
  std::filesystem::path dir = std::filesystem::temp_directory_path() /
                              ("tdcast_" + tag + "_" + std::to_string(ticks));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void spit(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace tdtest
