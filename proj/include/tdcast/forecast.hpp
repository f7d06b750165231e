#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tdcast/ols.hpp"
#include "tdcast/quarter.hpp"
#include "tdcast/value_model.hpp"

namespace tdcast {

// How a value-model score becomes a level forecast:
//   direct_score     - the score itself is the forecast.
//   incremental_root - previous level + sign * sqrt(max(0, (1 - alpha) * score)),
//                      reading the score as the discounted sum of future
//                      squared changes.
enum class ForecastKind { direct_score, incremental_root };
enum class SignHeuristic { previous_change, always_positive };

std::string to_string(ForecastKind k);
std::string to_string(SignHeuristic s);
ForecastKind forecast_kind_from_string(const std::string& name);
SignHeuristic sign_heuristic_from_string(const std::string& name);

struct ForecastRule {
  ForecastKind kind = ForecastKind::direct_score;
  SignHeuristic sign = SignHeuristic::previous_change;

  std::string str() const;
};

struct ForecastContext {
  double previous_target = 0.0;  // actual level at t-1
  double previous_change = 0.0;  // level(t-1) - level(t-2); 0 when unknown
};

using ForecastModel = std::variant<LinearModel, NetworkModel, OlsModel>;

// OLS models ignore the rule and the context. incremental_root requires a
// context.
double forecast(const ForecastModel& model, std::span<const double> state,
                const ForecastRule& rule, double alpha,
                const std::optional<ForecastContext>& context);

struct QuarterRecord {
  Quarter quarter;
  double actual = 0.0;
  double forecast = 0.0;
  double abs_error = 0.0;
};

struct EvalReport {
  std::string model_name;
  std::vector<QuarterRecord> rows;  // sorted by quarter
  double mae = 0.0;
  double rmse = 0.0;
  std::vector<double> cumulative_abs_error;  // running sum; first entry is the first error
  std::string config_fingerprint;
};

// Joins forecasts and actuals on the quarter label; the two sets must be
// identical and nonempty.
EvalReport evaluate(const std::string& model_name,
                    std::span<const std::pair<Quarter, double>> forecasts,
                    std::span<const std::pair<Quarter, double>> actuals,
                    const std::string& config_fingerprint = "");

void write_report_csv(const EvalReport& report, std::ostream& out);
void write_summary_csv(std::span<const EvalReport> reports, std::ostream& out);

}  // namespace tdcast
