#include "tdcast/ols.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tdcast/errors.hpp"

namespace tdcast {

OlsModel fit_ols(const std::vector<std::vector<double>>& design_rows,
                 const std::vector<double>& response, const std::vector<std::string>& terms) {
  const std::size_t n = design_rows.size();
  if (n == 0) throw ValidationError("cannot fit on an empty design");
  const std::size_t p = design_rows[0].size();
  if (p == 0) throw ValidationError("design rows must have at least one column");
  if (response.size() != n) throw ValidationError("response length does not match design rows");
  if (n < p) {
    throw ValidationError("need at least as many rows as columns: n=" + std::to_string(n) +
                          ", p=" + std::to_string(p));
  }

  OlsModel model;
  if (terms.empty()) {
    for (std::size_t j = 0; j < p; ++j) model.terms.push_back("col" + std::to_string(j));
  } else {
    if (terms.size() != p) throw ValidationError("term names do not match column count");
    model.terms = terms;
  }

  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (design_rows[i].size() != p) throw ValidationError("ragged design rows");
    for (std::size_t j = 0; j < p; ++j) {
      if (!std::isfinite(design_rows[i][j])) throw ValidationError("design entries must be finite");
      design(i, j) = design_rows[i][j];
    }
    if (!std::isfinite(response[i])) throw ValidationError("response entries must be finite");
    y(i) = response[i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  const auto rank = qr.rank();
  if (rank < static_cast<Eigen::Index>(p)) {
    const auto& perm = qr.colsPermutation().indices();
    const auto dependent = perm[rank];
    throw ValidationError("design matrix is rank deficient: column '" + model.terms[dependent] +
                          "' is linearly dependent");
  }
  Eigen::VectorXd beta = qr.solve(y);
  model.coefficients.assign(beta.data(), beta.data() + p);

  Eigen::VectorXd residual = y - design * beta;
  model.insample_rmse = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
  const auto& r_diag = qr.matrixR().diagonal();
  model.condition_estimate = std::abs(r_diag(0)) / std::abs(r_diag(p - 1));
  return model;
}

double predict_ols(const OlsModel& model, std::span<const double> state) {
  if (state.size() + 1 != model.coefficients.size()) {
    throw ShapeError("predict_ols: state has " + std::to_string(state.size()) +
                     " entries, model expects " + std::to_string(model.coefficients.size() - 1));
  }
  double value = model.coefficients[0];
  for (std::size_t i = 0; i < state.size(); ++i) value += model.coefficients[i + 1] * state[i];
  return value;
}

void write_ols_csv(const OlsModel& model, std::ostream& out) {
  out << "term,estimate\n";
  char buf[40];
  for (std::size_t i = 0; i < model.coefficients.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", model.coefficients[i]);
    out << model.terms[i] << ',' << buf << '\n';
  }
}

}  // namespace tdcast
