#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pflin/ac_solver.hpp"
#include "pflin/linear_models.hpp"
#include "pflin/network.hpp"

namespace pflin {

// Tolerance-filtered mean absolute percentage error. Observation i counts when
// |filter_i| >= tol; near-zero references (|ac_i| <= 1e-9) are excluded from
// the mean and tallied separately so they never blow the metric up.
struct MapeResult {
  double eps = 0.0;
  int included = 0;
  int excluded_near_zero = 0;
};

MapeResult filtered_mape(const std::vector<double>& model_vals, const std::vector<double>& ac_vals,
                         const std::vector<double>& filter_vals, double tol);
MapeResult filtered_mape_masked(const std::vector<double>& model_vals,
                                const std::vector<double>& ac_vals,
                                const std::vector<bool>& include);

// eta = (eps_a - eps_b) / eps_a: the share of model a's error model b removes.
double improvement(double eps_a, double eps_b);

struct AbsDevStats {
  double sad = 0.0;    // sum of absolute deviations
  double gamma = 0.0;  // sad / count
  int count = 0;
};

AbsDevStats abs_dev_stats(const std::vector<double>& model_vals,
                          const std::vector<double>& ac_vals, const std::vector<bool>& include);

// Labeled grid with optional cells; empty cells mark subsets that filtered to
// nothing. Every cell is a plain number reproducible from the primitives above.
struct Table {
  std::string title;
  std::string row_header;
  std::vector<std::string> columns;
  struct Row {
    std::string label;
    std::vector<std::optional<double>> cells;
  };
  std::vector<Row> rows;

  const Row* find(const std::string& label) const;
};

enum class FlowQuantity { active, reactive };

// Branch-flow error table over per-unit solutions. Columns are MW (or MVAr)
// thresholds on the AC from-side magnitude; rows: included branch count, eps
// of the flow per model, eps of the angle difference per model on the same
// subset (active only), and the improvement of each fitted model over its
// unfitted base (angle-based for active, flow-based for reactive).
Table flow_error_table(const Network& net, const AcSolution& ac,
                       const std::vector<const LinearSolution*>& models,
                       const std::vector<double>& tolerances, FlowQuantity quantity);

struct KvBand {
  std::string label;
  double lo_kv = 0.0;  // membership: lo <= base_kv < hi
  double hi_kv = 0.0;
};

std::vector<KvBand> default_kv_bands();

// Per-band voltage magnitude errors: bus count, gamma (p.u.), mean percentage
// error, and gamma-based improvement rows for fitted/base pairs.
Table voltage_error_table(const Network& net, const AcSolution& ac,
                          const std::vector<const LinearSolution*>& models,
                          const std::vector<KvBand>& bands = default_kv_bands());

struct ComplexPowerReport {
  Table table;  // filter stats plus eps / SAD / gamma per model
  struct SeriesPoint {
    std::string branch;
    double ac_mva = 0.0;
    std::map<std::string, double> err_pct;  // model name -> percent error
  };
  std::vector<SeriesPoint> series;  // sorted by the fitted model's error
};

// Apparent-power errors over branches with AC |S_from| >= tol_mva. Only models
// carrying reactive flows participate.
ComplexPowerReport complex_power_report(const Network& net, const AcSolution& ac,
                                        const std::vector<const LinearSolution*>& models,
                                        double tol_mva = 10.0);

struct HourMetrics {
  int hour = 0;
  bool feasible = true;
  double lambda = 1.0;
  double gamma_v_lac = 0.0;
  double gamma_v_dlac = 0.0;
  double eps_q_lac = 0.0;
  double eps_q_dlac = 0.0;
};

struct MultiHourReport {
  Table voltage;   // per hour: gamma pair and eta, then mean/std rows
  Table reactive;  // per hour: eps pair and eta, then mean/std rows
  double eta_v_mean = 0.0;
  double eta_v_std = 0.0;
  double eta_q_mean = 0.0;
  double eta_q_std = 0.0;
};

// Hour-by-hour comparison of the fitted and unfitted coupled models; needs at
// least two feasible hours. Infeasible hours keep their row with empty cells.
// The std rows are sample standard deviations.
MultiHourReport multi_hour_report(const std::vector<HourMetrics>& hours);

}  // namespace pflin
