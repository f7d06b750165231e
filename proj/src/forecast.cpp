#include "tdcast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tdcast/errors.hpp"

namespace tdcast {

std::string to_string(ForecastKind k) {
  return k == ForecastKind::direct_score ? "direct_score" : "incremental_root";
}

std::string to_string(SignHeuristic s) {
  return s == SignHeuristic::previous_change ? "previous_change" : "always_positive";
}

ForecastKind forecast_kind_from_string(const std::string& name) {
  if (name == "direct_score") return ForecastKind::direct_score;
  if (name == "incremental_root") return ForecastKind::incremental_root;
  throw ParseError("unknown forecast rule '" + name +
                   "' (expected direct_score or incremental_root)");
}

SignHeuristic sign_heuristic_from_string(const std::string& name) {
  if (name == "previous_change") return SignHeuristic::previous_change;
  if (name == "always_positive") return SignHeuristic::always_positive;
  throw ParseError("unknown sign heuristic '" + name +
                   "' (expected previous_change or always_positive)");
}

std::string ForecastRule::str() const {
  if (kind == ForecastKind::direct_score) return to_string(kind);
  return to_string(kind) + "(" + to_string(sign) + ")";
}

double forecast(const ForecastModel& model, std::span<const double> state,
                const ForecastRule& rule, double alpha,
                const std::optional<ForecastContext>& context) {
  if (const auto* ols = std::get_if<OlsModel>(&model)) return predict_ols(*ols, state);

  double score;
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    score = score_state(ValueModel(*lin), state);
  } else {
    score = score_state(ValueModel(std::get<NetworkModel>(model)), state);
  }
  if (rule.kind == ForecastKind::direct_score) return score;

  if (!context) throw ValidationError("incremental_root forecast requires previous-quarter context");
  const double step = std::sqrt(std::max(0.0, (1.0 - alpha) * score));
  const double sign = rule.sign == SignHeuristic::always_positive
                          ? 1.0
                          : (context->previous_change < 0.0 ? -1.0 : 1.0);
  return context->previous_target + sign * step;
}

EvalReport evaluate(const std::string& model_name,
                    std::span<const std::pair<Quarter, double>> forecasts,
                    std::span<const std::pair<Quarter, double>> actuals,
                    const std::string& config_fingerprint) {
  if (forecasts.empty() || actuals.empty()) throw ValidationError("cannot evaluate an empty window");
  if (forecasts.size() != actuals.size()) {
    throw ValidationError("forecast and actual quarter sets differ in size");
  }
  std::vector<std::pair<Quarter, double>> f(forecasts.begin(), forecasts.end());
  std::vector<std::pair<Quarter, double>> a(actuals.begin(), actuals.end());
  auto by_quarter = [](const auto& x, const auto& y) { return x.first < y.first; };
  std::sort(f.begin(), f.end(), by_quarter);
  std::sort(a.begin(), a.end(), by_quarter);

  EvalReport report;
  report.model_name = model_name;
  report.config_fingerprint = config_fingerprint;
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].first != a[i].first) {
      throw ValidationError("forecast and actual quarter sets differ (" + f[i].first.str() +
                            " vs " + a[i].first.str() + ")");
    }
    if (i > 0 && f[i].first == f[i - 1].first) {
      throw ValidationError("duplicate quarter " + f[i].first.str() + " in evaluation input");
    }
    const double err = f[i].second - a[i].second;
    const double abs_err = std::abs(err);
    abs_sum += abs_err;
    sq_sum += err * err;
    report.rows.push_back({f[i].first, a[i].second, f[i].second, abs_err});
    report.cumulative_abs_error.push_back(abs_sum);
  }
  const double n = static_cast<double>(f.size());
  report.mae = abs_sum / n;
  report.rmse = std::sqrt(sq_sum / n);
  return report;
}

namespace {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "quarter,actual,forecast,abs_error,cumulative_abs_error\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    out << row.quarter.str() << ',' << full_precision(row.actual) << ','
        << full_precision(row.forecast) << ',' << full_precision(row.abs_error) << ','
        << full_precision(report.cumulative_abs_error[i]) << '\n';
  }
}

void write_summary_csv(std::span<const EvalReport> reports, std::ostream& out) {
  out << "model,mae,rmse\n";
  for (const auto& r : reports) {
    out << r.model_name << ',' << full_precision(r.mae) << ',' << full_precision(r.rmse) << '\n';
  }
}

}  // namespace tdcast
