#include "tdcast/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <stdexcept>

#include "tdcast/errors.hpp"
#include "tdcast/svg.hpp"
#include "tdcast/version.hpp"

namespace tdcast {

namespace {

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string run_fingerprint(const ModelRun& run) {
  const auto& t = run.train;
  std::string fp = "alpha=" + short_number(t.alpha) + ";seed=" + std::to_string(t.seed) +
                   ";features=" + t.features.str() + ";rule=" + run.rule.str() +
                   ";architecture=" + to_string(t.architecture);
  if (t.architecture == ArchitectureKind::network) {
    fp += ";activation=" + to_string(t.activation) + ";hidden=" + std::to_string(t.hidden_nodes);
  }
  fp += ";gamma0=" + short_number(t.gamma0) + ";decay_tau=" + short_number(t.decay_tau) +
        ";epochs=" + std::to_string(t.epochs) + ";shuffle=" + (t.shuffle ? "1" : "0");
  if (t.strict_update_order) fp += ";strict_update_order=1";
  return fp;
}

void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

ExperimentResult run_experiment(const PanelDataset& data, const ExperimentConfig& config) {
  if (config.test_country.empty()) throw ValidationError("test country must be set");
  {
    std::set<std::string> names;
    for (const auto& run : config.runs) {
      if (run.name.empty()) throw ValidationError("every model run needs a name");
      if (!names.insert(run.name).second) {
        throw ValidationError("duplicate model run name '" + run.name + "'");
      }
      if (run.name == "ols") throw ValidationError("model run name 'ols' is reserved");
    }
  }

  ExperimentResult result;
  result.dataset = data.regularized ? data : regularize(data);
  const PanelDataset& ds = result.dataset;
  result.notes.insert(result.notes.end(), ds.notes.begin(), ds.notes.end());
  result.notes.push_back(
      "regularization constants are per (country, indicator) over each full stored series, "
      "test period included");

  const CountrySeries* test = ds.find_country(config.test_country);
  if (!test) throw ValidationError("test country '" + config.test_country + "' not found");
  if (config.ols_cutoff < test->quarters.front() || config.ols_cutoff >= test->quarters.back()) {
    throw ValidationError("ols_cutoff " + config.ols_cutoff.str() +
                          " must lie within the test country's range " +
                          test->quarters.front().str() + ".." + test->quarters.back().str() +
                          " and leave a test window");
  }

  auto tset = build_transitions(ds, [&](const std::string& c) { return c != config.test_country; });
  for (const auto& tr : tset.transitions) {
    if (tr.country == config.test_country) {
      throw std::logic_error("test country leaked into the training transitions");
    }
  }
  if (tset.transitions.empty()) {
    throw ValidationError("no training transitions outside the test country");
  }
  result.transition_count = tset.transitions.size();
  result.notes.insert(result.notes.end(), tset.warnings.begin(), tset.warnings.end());

  // Benchmark fit: test-country rows up to and including the cutoff.
  std::vector<std::vector<double>> design;
  std::vector<double> response;
  for (std::size_t t = 0; t < test->quarters.size(); ++t) {
    if (test->quarters[t] > config.ols_cutoff) continue;
    std::vector<double> row;
    row.reserve(ds.indicators.size() + 1);
    row.push_back(1.0);
    row.insert(row.end(), test->states[t].begin(), test->states[t].end());
    design.push_back(std::move(row));
    response.push_back(test->target[t]);
  }
  std::vector<std::string> terms{"intercept"};
  terms.insert(terms.end(), ds.indicators.begin(), ds.indicators.end());
  result.ols = fit_ols(design, response, terms);

  // Test window: strictly after the cutoff.
  std::vector<std::size_t> window;
  for (std::size_t t = 0; t < test->quarters.size(); ++t) {
    if (test->quarters[t] > config.ols_cutoff) window.push_back(t);
  }
  if (window.empty()) throw ValidationError("empty test window");
  result.test_window = window.size();

  std::vector<std::pair<Quarter, double>> actuals;
  for (std::size_t t : window) actuals.emplace_back(test->quarters[t], test->target[t]);

  // Independent runs train concurrently; results join in config order.
  std::vector<std::future<TrainResult>> futures;
  futures.reserve(config.runs.size());
  for (const auto& run : config.runs) {
    TrainConfig train_config = run.train;
    train_config.features.state_dim = ds.state_dim();
    futures.push_back(std::async(std::launch::async, [&tset, train_config] {
      return train(tset.transitions, train_config);
    }));
  }

  {
    std::vector<std::pair<Quarter, double>> forecasts;
    for (std::size_t t : window) {
      forecasts.emplace_back(test->quarters[t], predict_ols(result.ols, test->states[t]));
    }
    const std::string fp = "cutoff=" + config.ols_cutoff.str() +
                           ";rows=" + std::to_string(design.size()) +
                           ";terms=" + std::to_string(terms.size());
    result.reports.push_back(evaluate("ols", forecasts, actuals, fp));
  }

  for (std::size_t r = 0; r < config.runs.size(); ++r) {
    const ModelRun& run = config.runs[r];
    TrainResult trained = futures[r].get();
    const ForecastModel scorer =
        std::visit([](const auto& m) { return ForecastModel(m); }, trained.model);
    std::vector<std::pair<Quarter, double>> forecasts;
    for (std::size_t t : window) {
      // t >= 1 because the cutoff is at or after the first quarter
      ForecastContext ctx;
      ctx.previous_target = test->target[t - 1];
      ctx.previous_change = t >= 2 ? test->target[t - 1] - test->target[t - 2] : 0.0;
      forecasts.emplace_back(test->quarters[t],
                             forecast(scorer, test->states[t], run.rule, run.train.alpha, ctx));
    }
    result.reports.push_back(evaluate(run.name, forecasts, actuals, run_fingerprint(run)));
    result.models.push_back(std::move(trained.model));
    result.logs.push_back(std::move(trained.log));
  }
  return result;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result,
                              const ManifestInfo& manifest) {
  std::filesystem::create_directories(dir);

  // Manifest first, artifacts after.
  write_file(dir / "manifest.txt", [&](std::ostream& out) {
    out << "tdcast manifest\n";
    out << "version: " << kVersion << '\n';
    if (!manifest.data_path.empty()) out << "data: " << manifest.data_path << '\n';
    if (manifest.data_fingerprint != 0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(manifest.data_fingerprint));
      out << "data_fingerprint: fnv1a64:" << buf << '\n';
    }
    for (const auto& [key, value] : manifest.entries) out << key << ": " << value << '\n';
    out << "transition_count: " << result.transition_count << '\n';
    out << "test_window_quarters: " << result.test_window << '\n';
    for (const auto& note : result.notes) out << "note: " << note << '\n';
  });

  write_file(dir / "regularization.csv",
             [&](std::ostream& out) { write_regularization_csv(result.dataset, out); });
  write_file(dir / "ols_coefficients.csv",
             [&](std::ostream& out) { write_ols_csv(result.ols, out); });

  for (std::size_t r = 0; r < result.models.size(); ++r) {
    const std::string& name = result.reports[r + 1].model_name;
    write_file(dir / ("model_" + name + ".txt"),
               [&](std::ostream& out) { save_model(result.models[r], out); });
    write_file(dir / ("trainlog_" + name + ".csv"),
               [&](std::ostream& out) { write_train_log_csv(result.logs[r], out); });
  }

  for (const auto& report : result.reports) {
    write_file(dir / ("forecasts_" + report.model_name + ".csv"),
               [&](std::ostream& out) { write_report_csv(report, out); });
  }

  write_file(dir / "summary.csv",
             [&](std::ostream& out) { write_summary_csv(result.reports, out); });

  std::vector<std::string> labels;
  for (const auto& row : result.reports[0].rows) labels.push_back(row.quarter.str());

  write_file(dir / "figure1.svg", [&](std::ostream& out) {
    std::vector<ChartSeries> series;
    ChartSeries actual{"actual", {}};
    for (const auto& row : result.reports[0].rows) actual.values.push_back(row.actual);
    series.push_back(std::move(actual));
    for (const auto& report : result.reports) {
      ChartSeries s{report.model_name, {}};
      for (const auto& row : report.rows) s.values.push_back(row.forecast);
      series.push_back(std::move(s));
    }
    write_line_chart_svg(out, "Forecast vs actual (regularized target)", labels, series);
  });

  write_file(dir / "figure2.svg", [&](std::ostream& out) {
    std::vector<ChartSeries> series;
    for (const auto& report : result.reports) {
      series.push_back({report.model_name, report.cumulative_abs_error});
    }
    write_line_chart_svg(out, "Cumulative absolute out-of-sample error", labels, series);
  });
}

}  // namespace tdcast
