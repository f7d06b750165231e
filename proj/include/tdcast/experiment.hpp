#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdcast/forecast.hpp"
#include "tdcast/panel.hpp"
#include "tdcast/td.hpp"

namespace tdcast {

struct ModelRun {
  std::string name;
  TrainConfig train;
  ForecastRule rule;
};

struct ExperimentConfig {
  std::string test_country;
  Quarter ols_cutoff;  // last quarter of the OLS training window; the test window starts after it
  std::vector<ModelRun> runs;
};

struct ExperimentResult {
  std::vector<EvalReport> reports;  // OLS first, then one per run in config order
  OlsModel ols;
  std::vector<ValueModel> models;  // parallel to runs
  std::vector<TrainLog> logs;      // parallel to runs
  PanelDataset dataset;            // regularized
  std::size_t transition_count = 0;
  std::size_t test_window = 0;
  std::vector<std::string> notes;
};

// Train-on-everyone-else, test-on-one protocol: transitions exclude the test
// country, the benchmark OLS fit uses only the test country's rows up to the
// cutoff, and every model forecasts the post-cutoff window. Runs train
// concurrently; results join in config order.
ExperimentResult run_experiment(const PanelDataset& data, const ExperimentConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

struct ManifestInfo {
  std::string data_path;
  std::uint64_t data_fingerprint = 0;
  std::vector<std::pair<std::string, std::string>> entries;  // resolved config echo
};

// Writes manifest.txt first, then regularization.csv, model files, training
// logs, per-model forecast CSVs, summary.csv, and the two SVG figures.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result,
                              const ManifestInfo& manifest);

}  // namespace tdcast
