#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tdcast {

struct OlsModel {
  std::vector<double> coefficients;  // intercept first
  std::vector<std::string> terms;    // parallel to coefficients
  double insample_rmse = 0.0;
  double condition_estimate = 0.0;
};

// Least squares via column-pivoted QR; X rows must be bias-augmented. A
// rank-deficient design is an error naming the dependent column, never a
// silently regularized fit.
OlsModel fit_ols(const std::vector<std::vector<double>>& design_rows,
                 const std::vector<double>& response, const std::vector<std::string>& terms = {});

// Intercept plus dot product; `state` excludes the bias entry.
double predict_ols(const OlsModel& model, std::span<const double> state);

void write_ols_csv(const OlsModel& model, std::ostream& out);

}  // namespace tdcast
