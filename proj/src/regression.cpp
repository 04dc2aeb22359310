#include "pflin/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pflin/distributions.hpp"
#include "pflin/errors.hpp"

namespace pflin {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_shape(const DesignMatrix& design) {
  const auto n = design.x.rows();
  const auto k = design.x.cols();
  if (k < 1) throw InvalidArgument("design matrix has no columns");
  if (design.y.size() != n) throw InvalidArgument("response length does not match the design");
  if (design.offset.size() != 0 && design.offset.size() != n)
    throw InvalidArgument("offset length does not match the design");
  if (n <= k)
    throw InvalidArgument("need more observations than regressors (n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ")");
  if (n < 3 * k)
    throw InvalidArgument("need at least three observations per regressor (n=" +
                          std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

Eigen::VectorXd adjusted_response(const DesignMatrix& design) {
  if (design.offset.size() == 0) return design.y;
  return design.y - design.offset;
}

std::string column_label(const std::vector<std::string>& names, Eigen::Index j) {
  if (j >= 0 && j < Eigen::Index(names.size())) return names[j];
  return "x" + std::to_string(j + 1);
}

}  // namespace

std::vector<double> variance_inflation_factors(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  const auto k = x.cols();
  if (k < 2)
    throw NotApplicable("variance inflation requires at least two regressors");

  std::vector<double> vif(std::size_t(k), 0.0);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::MatrixXd aux(n, k);  // intercept plus the other columns
    aux.col(0).setOnes();
    Eigen::Index at = 1;
    for (Eigen::Index l = 0; l < k; ++l)
      if (l != j) aux.col(at++) = x.col(l);

    const Eigen::VectorXd target = x.col(j);
    const Eigen::VectorXd beta = aux.colPivHouseholderQr().solve(target);
    const double ss_res = (target - aux * beta).squaredNorm();
    const double mean = target.mean();
    const double ss_tot = (target.array() - mean).matrix().squaredNorm();
    if (ss_tot <= 0.0) {
      vif[std::size_t(j)] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    const double denom = 1.0 - r2;
    vif[std::size_t(j)] = denom <= std::numeric_limits<double>::epsilon() * 16
                              ? std::numeric_limits<double>::infinity()
                              : 1.0 / denom;
  }
  return vif;
}

std::vector<AnovaRow> anova_sequential(const DesignMatrix& design) {
  check_shape(design);
  const Eigen::VectorXd y = adjusted_response(design);
  const auto n = design.x.rows();
  const auto k = design.x.cols();

  // unpivoted QR keeps the given column order; the squared components of Q^T y
  // are exactly the one-degree sequential sums of squares
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design.x);
  const Eigen::VectorXd qty = qr.householderQ().transpose() * y;
  const double ss_res = qty.tail(n - k).squaredNorm();
  const double ms_res = ss_res / double(n - k);

  std::vector<AnovaRow> rows;
  for (Eigen::Index j = 0; j < k; ++j) {
    AnovaRow row;
    row.term = column_label(design.column_names, j);
    row.df = 1;
    row.ss = qty(j) * qty(j);
    row.ms = row.ss;
    row.f = row.ss / ms_res;
    row.pr = f_tail_probability(row.f, 1.0, double(n - k));
    rows.push_back(row);
  }
  AnovaRow residuals;
  residuals.term = "Residuals";
  residuals.df = int(n - k);
  residuals.ss = ss_res;
  residuals.ms = ms_res;
  residuals.f = kNan;
  residuals.pr = kNan;
  rows.push_back(residuals);
  return rows;
}

FitResult ols_fit(const DesignMatrix& design) {
  check_shape(design);
  const auto n = design.x.rows();
  const auto k = design.x.cols();
  const Eigen::VectorXd y = adjusted_response(design);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    const auto perm = qr.colsPermutation().indices();
    const std::string column = column_label(design.column_names, perm(qr.rank()));
    throw RankDeficient(column, "design matrix is rank deficient; column '" + column +
                                    "' is linearly dependent on the others");
  }

  FitResult fit;
  fit.column_names = design.column_names;
  fit.row_keys = design.row_keys;
  fit.n = int(n);
  fit.k = int(k);
  fit.beta = qr.solve(y);
  fit.residuals = y - design.x * fit.beta;
  fit.ss_res = fit.residuals.squaredNorm();
  fit.ms_res = fit.ss_res / double(n - k);
  fit.fitted = design.y - fit.residuals;

  // (X^T X)^{-1} = P R^{-1} R^{-T} P^T from the pivoted factorization
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd xtx_inv =
      qr.colsPermutation() * (r_inv * r_inv.transpose()) *
      qr.colsPermutation().transpose();
  fit.std_err = (fit.ms_res * xtx_inv.diagonal().array()).sqrt().matrix();

  const double tq = t_quantile(0.975, double(n - k));
  fit.ci_lo = fit.beta - tq * fit.std_err;
  fit.ci_hi = fit.beta + tq * fit.std_err;

  const double ss_unc = y.squaredNorm();
  fit.r2_uncentered = ss_unc > 0.0 ? 1.0 - fit.ss_res / ss_unc : kNan;
  const double ss_cen = (y.array() - y.mean()).matrix().squaredNorm();
  fit.r2_centered = ss_cen > 0.0 ? 1.0 - fit.ss_res / ss_cen : kNan;

  // hat diagonal without forming H: rows of Q1 via a triangular solve against
  // the permuted design, h_i = ||R^{-T} (XP)_i||^2
  const Eigen::MatrixXd xp = design.x * qr.colsPermutation();
  const Eigen::MatrixXd z =
      r.transpose().triangularView<Eigen::Lower>().solve(xp.transpose());
  fit.hat_diag = z.colwise().squaredNorm().transpose();

  fit.standardized = fit.residuals / std::sqrt(fit.ms_res);
  fit.rstudent.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lever = 1.0 - fit.hat_diag(i);
    if (lever < 1e-12 || n - k - 1 < 1) {
      fit.rstudent(i) = kNan;
      fit.undefined_rstudent_rows.push_back(int(i));
      continue;
    }
    const double e = fit.residuals(i);
    const double s2 = (double(n - k) * fit.ms_res - e * e / lever) / double(n - k - 1);
    fit.rstudent(i) = e / std::sqrt(s2 * lever);
  }

  if (k >= 2) fit.vif = variance_inflation_factors(design.x);
  fit.anova = anova_sequential(design);
  return fit;
}

namespace {

// Shared walk for the assemblers: hands each (solution, branch, flow) to sink.
template <typename Sink>
void each_observation(const Network& net, const std::vector<AcSolution>& solutions, Sink&& sink) {
  if (solutions.empty()) throw InvalidArgument("no training solutions given");
  const auto branches = in_service_branches(net, ShiftPolicy::reject);
  const int n_buses = int(net.buses.size());
  for (const AcSolution& sol : solutions) {
    if (int(sol.vm.size()) != n_buses || int(sol.va.size()) != n_buses)
      throw TopologyMismatch("solution '" + sol.case_name +
                             "' does not match the network bus count");
    if (sol.flows.size() != branches.size())
      throw TopologyMismatch("solution '" + sol.case_name +
                             "' does not match the in-service branch count");
    for (std::size_t b = 0; b < branches.size(); ++b) {
      if (sol.flows[b].branch != branches[b].index)
        throw TopologyMismatch("solution '" + sol.case_name +
                               "' flows are ordered differently from the network");
      sink(sol, branches[b], sol.flows[b]);
    }
  }
}

}  // namespace

DesignMatrix assemble_p_dataset(const Network& net, const std::vector<AcSolution>& solutions) {
  std::vector<double> c1, c2, y;
  std::vector<std::string> keys;
  each_observation(net, solutions,
                   [&](const AcSolution& sol, const IndexedBranch& ib, const BranchFlow& flow) {
                     const double th = sol.va[ib.from] - sol.va[ib.to];
                     c1.push_back(-th * ib.pi.b);
                     c2.push_back((sol.vm[ib.from] - sol.vm[ib.to]) * ib.pi.g);
                     y.push_back(flow.p_from);
                     keys.push_back(sol.case_name + ":" + branch_key(net, ib.index));
                   });
  DesignMatrix design;
  const auto n = Eigen::Index(y.size());
  design.x.resize(n, 2);
  design.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.x(i, 0) = c1[i];
    design.x(i, 1) = c2[i];
    design.y(i) = y[i];
  }
  design.column_names = {"k_a1", "k_a2"};
  design.row_keys = std::move(keys);
  return design;
}

DesignMatrix assemble_q_dataset(const Network& net, const std::vector<AcSolution>& solutions) {
  std::vector<double> c1, c2, c3, y, offset;
  std::vector<std::string> keys;
  each_observation(net, solutions,
                   [&](const AcSolution& sol, const IndexedBranch& ib, const BranchFlow& flow) {
                     const double vi = sol.vm[ib.from];
                     const double th = sol.va[ib.from] - sol.va[ib.to];
                     const double dv = vi - sol.vm[ib.to];
                     c1.push_back(-2.0 * vi * ib.pi.b_from);
                     c2.push_back(-th * ib.pi.g);
                     c3.push_back(-dv * ib.pi.b);
                     y.push_back(flow.q_from);
                     offset.push_back(ib.pi.b_from);  // known constant of the linearized flow
                     keys.push_back(sol.case_name + ":" + branch_key(net, ib.index));
                   });
  DesignMatrix design;
  const auto n = Eigen::Index(y.size());
  design.x.resize(n, 3);
  design.y.resize(n);
  design.offset.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.x(i, 0) = c1[i];
    design.x(i, 1) = c2[i];
    design.x(i, 2) = c3[i];
    design.y(i) = y[i];
    design.offset(i) = offset[i];
  }
  design.column_names = {"k_a3", "k_a4", "k_a5"};
  design.row_keys = std::move(keys);
  return design;
}

DesignMatrix assemble_ddc_dataset(const Network& net, const std::vector<AcSolution>& solutions) {
  std::vector<double> c1, y;
  std::vector<std::string> keys;
  each_observation(net, solutions,
                   [&](const AcSolution& sol, const IndexedBranch& ib, const BranchFlow& flow) {
                     const double th = sol.va[ib.from] - sol.va[ib.to];
                     if (ib.x == 0.0)
                       throw InvalidBranch("branch " + branch_key(net, ib.index) +
                                           " has zero reactance; the angle-only model is "
                                           "undefined");
                     c1.push_back(th / (ib.x * ib.tap));
                     y.push_back(flow.p_from);
                     keys.push_back(sol.case_name + ":" + branch_key(net, ib.index));
                   });
  DesignMatrix design;
  const auto n = Eigen::Index(y.size());
  design.x.resize(n, 1);
  design.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.x(i, 0) = c1[i];
    design.y(i) = y[i];
  }
  design.column_names = {"k_d"};
  design.row_keys = std::move(keys);
  return design;
}

CoefficientFit fit_model_coefficients(const Network& net,
                                      const std::vector<AcSolution>& solutions) {
  CoefficientFit out;
  out.ddc_fit = ols_fit(assemble_ddc_dataset(net, solutions));
  out.p_fit = ols_fit(assemble_p_dataset(net, solutions));
  out.q_fit = ols_fit(assemble_q_dataset(net, solutions));

  out.coeffs.k_d = out.ddc_fit.beta(0);
  if (!(out.coeffs.k_d > 0.0))
    throw NumericalError("fitted k_d is not positive; the training data does not describe a "
                         "transport network");
  out.coeffs.k_a[0] = out.p_fit.beta(0);
  out.coeffs.k_a[1] = out.p_fit.beta(1);
  out.coeffs.k_a[2] = out.q_fit.beta(0);
  out.coeffs.k_a[3] = out.q_fit.beta(1);
  out.coeffs.k_a[4] = out.q_fit.beta(2);

  std::set<std::string> seen;
  for (const AcSolution& sol : solutions)
    if (seen.insert(sol.case_name).second) out.coeffs.trained_on.push_back(sol.case_name);
  return out;
}

}  // namespace pflin
