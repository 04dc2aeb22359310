#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pflin/ac_solver.hpp"
#include "pflin/linear_models.hpp"
#include "pflin/network.hpp"

namespace pflin {

// Observations for one least-squares problem. The fitted response is
// y - offset; offset carries the known constant per observation (the branch
// end-shunt constant of the reactive model) so it never enters a coefficient.
struct DesignMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd offset;
  std::vector<std::string> column_names;
  std::vector<std::string> row_keys;  // "case:from-to#k"
};

struct AnovaRow {
  std::string term;  // column name, or "Residuals"
  int df = 0;
  double ss = 0.0;
  double ms = 0.0;
  double f = 0.0;   // NaN on the residuals row
  double pr = 0.0;  // NaN on the residuals row
};

struct FitResult {
  std::vector<std::string> column_names;
  std::vector<std::string> row_keys;
  int n = 0;
  int k = 0;
  Eigen::VectorXd beta;
  Eigen::VectorXd std_err;
  Eigen::VectorXd ci_lo;  // 95% two-sided, t quantile with n-k df
  Eigen::VectorXd ci_hi;
  double ss_res = 0.0;
  double ms_res = 0.0;
  double r2_uncentered = 0.0;  // 1 - SS_res / sum(y_adj^2)
  double r2_centered = 0.0;    // 1 - SS_res / sum((y_adj - mean)^2)
  Eigen::VectorXd fitted;      // x*beta + offset, same scale as y
  Eigen::VectorXd residuals;       // e
  Eigen::VectorXd standardized;    // d = e / sqrt(MS_Res)
  Eigen::VectorXd rstudent;        // externally studentized t
  std::vector<int> undefined_rstudent_rows;  // h_ii = 1: the point fixes its own fit
  Eigen::VectorXd hat_diag;
  std::optional<std::vector<double>> vif;  // absent for single-regressor fits
  std::vector<AnovaRow> anova;
};

// Ordinary least squares through an orthogonal decomposition (never the normal
// equations), with the full diagnostic set. Requires n > k and full column
// rank; rank loss raises RankDeficient naming a dependent column.
FitResult ols_fit(const DesignMatrix& design);

// VIF_j = 1/(1 - R_j^2) where R_j^2 comes from regressing column j on the
// remaining columns plus an intercept. Perfectly collinear columns yield
// +infinity. A single column has no VIF (NotApplicable).
std::vector<double> variance_inflation_factors(const Eigen::MatrixXd& x);

// Type-I (sequential) decomposition in the given column order, starting from
// the zero model: SS_j = SS_res(x_1..x_{j-1}) - SS_res(x_1..x_j), df 1 each,
// F_j = SS_j / MS_Res(full), upper-tail probabilities, plus a residuals row.
std::vector<AnovaRow> anova_sequential(const DesignMatrix& design);

// Dataset assemblers: one observation per in-service branch per solution.
// Column values use the tap-normalized pi quantities, matching eval_flows_lac
// term for term so a fit of AC data yields drop-in flow coefficients.
DesignMatrix assemble_p_dataset(const Network& net, const std::vector<AcSolution>& solutions);
DesignMatrix assemble_q_dataset(const Network& net, const std::vector<AcSolution>& solutions);
DesignMatrix assemble_ddc_dataset(const Network& net, const std::vector<AcSolution>& solutions);

struct CoefficientFit {
  ModelCoefficients coeffs;
  FitResult ddc_fit;
  FitResult p_fit;
  FitResult q_fit;
};

// Fits all three datasets and maps the estimates onto (k_d, k_a1..k_a5).
CoefficientFit fit_model_coefficients(const Network& net,
                                      const std::vector<AcSolution>& solutions);

}  // namespace pflin
