#include "pflin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pflin/errors.hpp"

namespace pflin {
namespace {

constexpr double kNearZero = 1e-9;

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_lengths(std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || b != c) throw InvalidArgument("metric input vectors differ in length");
}

// Branch-level views of a solution aligned with the AC flow enumeration.
struct FlowView {
  std::string name;
  bool has_q = false;
  std::vector<double> p_from, q_from, theta;
  std::vector<double> vm;
};

std::vector<double> branch_thetas(const std::vector<IndexedBranch>& branches,
                                  const std::vector<double>& va) {
  std::vector<double> th;
  th.reserve(branches.size());
  for (const IndexedBranch& ib : branches) th.push_back(va[ib.from] - va[ib.to]);
  return th;
}

void check_flow_alignment(const std::vector<BranchFlow>& ref, const std::vector<BranchFlow>& got,
                          const std::string& name) {
  if (ref.size() != got.size())
    throw TopologyMismatch("solution '" + name + "' covers a different branch set");
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (ref[i].branch != got[i].branch)
      throw TopologyMismatch("solution '" + name + "' orders branches differently");
}

FlowView view_of(const Network& net, const std::vector<IndexedBranch>& branches,
                 const AcSolution& ac, const LinearSolution& model) {
  if (model.vm.size() != net.buses.size())
    throw TopologyMismatch("solution '" + model.case_name + "' has a different bus count");
  check_flow_alignment(ac.flows, model.flows, to_string(model.model));
  FlowView view;
  view.name = to_string(model.model);
  view.has_q = model.model == LinearModel::lac || model.model == LinearModel::dlac;
  for (const BranchFlow& f : model.flows) {
    view.p_from.push_back(f.p_from);
    view.q_from.push_back(f.q_from);
  }
  view.theta = branch_thetas(branches, model.va);
  view.vm = model.vm;
  return view;
}

// improvement row value, empty when the base error is exactly zero
std::optional<double> eta_cell(std::optional<double> base, std::optional<double> fitted) {
  if (!base || !fitted) return std::nullopt;
  if (*base == 0.0) return std::nullopt;
  return improvement(*base, *fitted);
}

struct ModelPair {
  int base = -1;
  int fitted = -1;
};

// (dc, ddc) and (lac, dlac) when both halves are present
std::vector<ModelPair> fitted_pairs(const std::vector<const LinearSolution*>& models) {
  auto find = [&](LinearModel m) {
    for (std::size_t i = 0; i < models.size(); ++i)
      if (models[i]->model == m) return int(i);
    return -1;
  };
  std::vector<ModelPair> pairs;
  if (find(LinearModel::dc) >= 0 && find(LinearModel::ddc) >= 0)
    pairs.push_back({find(LinearModel::dc), find(LinearModel::ddc)});
  if (find(LinearModel::lac) >= 0 && find(LinearModel::dlac) >= 0)
    pairs.push_back({find(LinearModel::lac), find(LinearModel::dlac)});
  return pairs;
}

}  // namespace

MapeResult filtered_mape_masked(const std::vector<double>& model_vals,
                                const std::vector<double>& ac_vals,
                                const std::vector<bool>& include) {
  check_lengths(model_vals.size(), ac_vals.size(), include.size());
  MapeResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < include.size(); ++i) {
    if (!include[i]) continue;
    if (std::abs(ac_vals[i]) <= kNearZero) {
      ++out.excluded_near_zero;
      continue;
    }
    sum += std::abs(model_vals[i] - ac_vals[i]) / std::abs(ac_vals[i]);
    ++out.included;
  }
  if (out.included == 0) throw EmptyFilter("no observations pass the filter");
  out.eps = sum / double(out.included);
  return out;
}

MapeResult filtered_mape(const std::vector<double>& model_vals, const std::vector<double>& ac_vals,
                         const std::vector<double>& filter_vals, double tol) {
  check_lengths(model_vals.size(), ac_vals.size(), filter_vals.size());
  if (tol < 0.0) throw InvalidArgument("tolerance must be nonnegative");
  std::vector<bool> include(filter_vals.size());
  for (std::size_t i = 0; i < filter_vals.size(); ++i)
    include[i] = std::abs(filter_vals[i]) >= tol;
  return filtered_mape_masked(model_vals, ac_vals, include);
}

double improvement(double eps_a, double eps_b) {
  if (eps_a == 0.0)
    throw UndefinedImprovement("improvement over a zero-error baseline is undefined");
  return (eps_a - eps_b) / eps_a;
}

AbsDevStats abs_dev_stats(const std::vector<double>& model_vals,
                          const std::vector<double>& ac_vals, const std::vector<bool>& include) {
  check_lengths(model_vals.size(), ac_vals.size(), include.size());
  AbsDevStats out;
  for (std::size_t i = 0; i < include.size(); ++i) {
    if (!include[i]) continue;
    out.sad += std::abs(model_vals[i] - ac_vals[i]);
    ++out.count;
  }
  if (out.count == 0) throw EmptyFilter("no observations pass the filter");
  out.gamma = out.sad / double(out.count);
  return out;
}

const Table::Row* Table::find(const std::string& label) const {
  for (const Row& row : rows)
    if (row.label == label) return &row;
  return nullptr;
}

Table flow_error_table(const Network& net, const AcSolution& ac,
                       const std::vector<const LinearSolution*>& models,
                       const std::vector<double>& tolerances, FlowQuantity quantity) {
  if (models.empty()) throw InvalidArgument("no models to compare");
  if (tolerances.empty()) throw InvalidArgument("no tolerances given");
  const bool active = quantity == FlowQuantity::active;
  const auto branches = in_service_branches(net, ShiftPolicy::allow);
  const double base = net.base_mva;

  std::vector<double> ac_flow, ac_theta, ac_abs_phys;
  for (const BranchFlow& f : ac.flows) {
    const double v = active ? f.p_from : f.q_from;
    ac_flow.push_back(v);
    ac_abs_phys.push_back(std::abs(v) * base);
  }
  ac_theta = branch_thetas(branches, ac.va);

  std::vector<FlowView> views;
  for (const LinearSolution* model : models) {
    if (!active && !(model->model == LinearModel::lac || model->model == LinearModel::dlac))
      continue;  // the angle-only family has no reactive flows
    views.push_back(view_of(net, branches, ac, *model));
  }
  if (views.empty()) throw InvalidArgument("no model with reactive flows to compare");

  Table table;
  table.title = active ? "active power flow error" : "reactive power flow error";
  table.row_header = active ? "tolerance (MW)" : "tolerance (MVAr)";
  for (double tol : tolerances) {
    std::string label = std::to_string(tol);
    label.erase(label.find_last_not_of('0') + 1);
    if (!label.empty() && label.back() == '.') label.pop_back();
    table.columns.push_back(label);
  }

  const std::size_t ncols = tolerances.size();
  Table::Row counts{"branches", {}};
  std::vector<std::vector<std::optional<double>>> eps_flow(views.size()),
      eps_theta(views.size());

  for (std::size_t c = 0; c < ncols; ++c) {
    std::vector<bool> mask(ac_flow.size());
    int n_in = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask[i] = ac_abs_phys[i] >= tolerances[c];
      if (mask[i]) ++n_in;
    }
    counts.cells.push_back(double(n_in));
    for (std::size_t m = 0; m < views.size(); ++m) {
      std::optional<double> ef, et;
      if (n_in > 0) {
        try {
          ef = filtered_mape_masked(active ? views[m].p_from : views[m].q_from, ac_flow, mask)
                   .eps;
        } catch (const EmptyFilter&) {
        }
        try {
          et = filtered_mape_masked(views[m].theta, ac_theta, mask).eps;
        } catch (const EmptyFilter&) {
        }
      }
      eps_flow[m].push_back(ef);
      eps_theta[m].push_back(et);
    }
  }

  table.rows.push_back(counts);
  const std::string flow_tag = active ? "eps_p_" : "eps_q_";
  for (std::size_t m = 0; m < views.size(); ++m)
    table.rows.push_back({flow_tag + views[m].name, eps_flow[m]});
  if (active)
    for (std::size_t m = 0; m < views.size(); ++m)
      table.rows.push_back({"eps_theta_" + views[m].name, eps_theta[m]});

  std::vector<const LinearSolution*> present;
  for (const FlowView& view : views)
    for (const LinearSolution* model : models)
      if (to_string(model->model) == view.name) present.push_back(model);
  for (const ModelPair& pair : fitted_pairs(present)) {
    const auto& base_eps = active ? eps_theta[pair.base] : eps_flow[pair.base];
    const auto& fit_eps = active ? eps_theta[pair.fitted] : eps_flow[pair.fitted];
    Table::Row eta{std::string("eta_") + (active ? "theta_" : "q_") + views[pair.fitted].name +
                       "_vs_" + views[pair.base].name,
                   {}};
    for (std::size_t c = 0; c < ncols; ++c)
      eta.cells.push_back(eta_cell(base_eps[c], fit_eps[c]));
    table.rows.push_back(eta);
  }
  return table;
}

std::vector<KvBand> default_kv_bands() {
  const double inf = std::numeric_limits<double>::infinity();
  return {{"all", 0.0, inf},
          {">=200 kV", 200.0, inf},
          {"(200,100] kV", 100.0, 200.0},
          {"(100,20] kV", 20.0, 100.0},
          {"<20 kV", 0.0, 20.0}};
}

Table voltage_error_table(const Network& net, const AcSolution& ac,
                          const std::vector<const LinearSolution*>& models,
                          const std::vector<KvBand>& bands) {
  if (models.empty()) throw InvalidArgument("no models to compare");
  if (bands.empty()) throw InvalidArgument("no voltage bands given");
  const auto branches = in_service_branches(net, ShiftPolicy::allow);

  std::vector<FlowView> views;
  for (const LinearSolution* model : models) views.push_back(view_of(net, branches, ac, *model));

  Table table;
  table.title = "voltage magnitude error";
  table.row_header = "base kV band";
  for (const KvBand& band : bands) table.columns.push_back(band.label);

  Table::Row counts{"buses", {}};
  std::vector<std::vector<std::optional<double>>> gammas(views.size()), epss(views.size());
  for (const KvBand& band : bands) {
    std::vector<bool> mask(net.buses.size());
    int n_in = 0;
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
      const double kv = net.buses[i].base_kv;
      mask[i] = kv >= band.lo_kv && kv < band.hi_kv;
      if (mask[i]) ++n_in;
    }
    counts.cells.push_back(double(n_in));
    for (std::size_t m = 0; m < views.size(); ++m) {
      std::optional<double> g, e;
      if (n_in > 0) {
        g = abs_dev_stats(views[m].vm, ac.vm, mask).gamma;
        try {
          e = filtered_mape_masked(views[m].vm, ac.vm, mask).eps;
        } catch (const EmptyFilter&) {
        }
      }
      gammas[m].push_back(g);
      epss[m].push_back(e);
    }
  }

  table.rows.push_back(counts);
  for (std::size_t m = 0; m < views.size(); ++m)
    table.rows.push_back({"gamma_vm_" + views[m].name, gammas[m]});
  for (std::size_t m = 0; m < views.size(); ++m)
    table.rows.push_back({"eps_vm_" + views[m].name, epss[m]});
  for (const ModelPair& pair : fitted_pairs(models)) {
    // pair indices refer to the original model list; map onto views by name
    auto view_index = [&](int model_idx) {
      const std::string name = to_string(models[model_idx]->model);
      for (std::size_t v = 0; v < views.size(); ++v)
        if (views[v].name == name) return int(v);
      return -1;
    };
    const int vb = view_index(pair.base);
    const int vf = view_index(pair.fitted);
    if (vb < 0 || vf < 0) continue;
    Table::Row eta{"eta_gamma_" + views[vf].name + "_vs_" + views[vb].name, {}};
    for (std::size_t c = 0; c < bands.size(); ++c)
      eta.cells.push_back(eta_cell(gammas[vb][c], gammas[vf][c]));
    table.rows.push_back(eta);
  }
  return table;
}

ComplexPowerReport complex_power_report(const Network& net, const AcSolution& ac,
                                        const std::vector<const LinearSolution*>& models,
                                        double tol_mva) {
  if (tol_mva < 0.0) throw InvalidArgument("tolerance must be nonnegative");
  const auto branches = in_service_branches(net, ShiftPolicy::allow);
  const double base = net.base_mva;

  std::vector<FlowView> views;
  for (const LinearSolution* model : models)
    if (model->model == LinearModel::lac || model->model == LinearModel::dlac)
      views.push_back(view_of(net, branches, ac, *model));
  if (views.empty()) throw InvalidArgument("apparent power needs a model with reactive flows");

  std::vector<double> ac_s;
  for (const BranchFlow& f : ac.flows) ac_s.push_back(std::hypot(f.p_from, f.q_from) * base);
  std::vector<std::vector<double>> model_s(views.size());
  for (std::size_t m = 0; m < views.size(); ++m)
    for (std::size_t i = 0; i < ac_s.size(); ++i)
      model_s[m].push_back(std::hypot(views[m].p_from[i], views[m].q_from[i]) * base);

  std::vector<bool> mask(ac_s.size());
  std::vector<double> included;
  for (std::size_t i = 0; i < ac_s.size(); ++i) {
    mask[i] = ac_s[i] >= tol_mva;
    if (mask[i]) included.push_back(ac_s[i]);
  }
  if (included.empty()) throw EmptyFilter("no branch carries the tolerance apparent power");

  ComplexPowerReport report;
  Table& table = report.table;
  table.title = "apparent power error";
  table.row_header = "quantity";
  table.columns = {"value"};
  auto push = [&](const std::string& label, std::optional<double> value) {
    table.rows.push_back({label, {value}});
  };
  push("branches", double(included.size()));
  push("ac_s_min_mva", *std::min_element(included.begin(), included.end()));
  push("ac_s_max_mva", *std::max_element(included.begin(), included.end()));
  push("ac_s_mean_mva", mean_of(included));
  push("ac_s_median_mva", median_of(included));
  push("ac_s_sd_mva", sample_std(included));

  std::vector<std::optional<double>> eps(views.size());
  for (std::size_t m = 0; m < views.size(); ++m) {
    const AbsDevStats stats = abs_dev_stats(model_s[m], ac_s, mask);
    try {
      eps[m] = filtered_mape_masked(model_s[m], ac_s, mask).eps;
    } catch (const EmptyFilter&) {
    }
    push("eps_s_" + views[m].name, eps[m]);
    push("sad_s_" + views[m].name + "_mva", stats.sad);
    push("gamma_s_" + views[m].name + "_mva", stats.gamma);
  }
  int i_lac = -1, i_dlac = -1;
  for (std::size_t m = 0; m < views.size(); ++m) {
    if (views[m].name == "lac") i_lac = int(m);
    if (views[m].name == "dlac") i_dlac = int(m);
  }
  if (i_lac >= 0 && i_dlac >= 0)
    push("eta_eps_s_dlac_vs_lac", eta_cell(eps[i_lac], eps[i_dlac]));

  // per-branch percent errors for the filtered set, fitted model order
  int sort_view = int(views.size()) - 1;
  for (std::size_t m = 0; m < views.size(); ++m)
    if (views[m].name == "dlac") sort_view = int(m);
  for (std::size_t i = 0; i < ac_s.size(); ++i) {
    if (!mask[i] || ac_s[i] <= kNearZero) continue;
    ComplexPowerReport::SeriesPoint point;
    point.branch = branch_key(net, ac.flows[i].branch);
    point.ac_mva = ac_s[i];
    for (std::size_t m = 0; m < views.size(); ++m)
      point.err_pct[views[m].name] = 100.0 * std::abs(model_s[m][i] - ac_s[i]) / ac_s[i];
    report.series.push_back(point);
  }
  const std::string sort_name = views[sort_view].name;
  std::stable_sort(report.series.begin(), report.series.end(),
                   [&](const auto& a, const auto& b) {
                     return a.err_pct.at(sort_name) < b.err_pct.at(sort_name);
                   });
  return report;
}

MultiHourReport multi_hour_report(const std::vector<HourMetrics>& hours) {
  int feasible = 0;
  for (const HourMetrics& h : hours)
    if (h.feasible) ++feasible;
  if (feasible < 2) throw InvalidArgument("multi-hour report needs at least two feasible hours");

  MultiHourReport report;
  report.voltage.title = "hourly voltage magnitude deviation";
  report.voltage.row_header = "hour";
  report.voltage.columns = {"lambda", "gamma_v_lac", "gamma_v_dlac", "eta_v"};
  report.reactive.title = "hourly reactive flow error";
  report.reactive.row_header = "hour";
  report.reactive.columns = {"lambda", "eps_q_lac", "eps_q_dlac", "eta_q"};

  std::vector<double> etas_v, etas_q, g_lac, g_dlac, e_lac, e_dlac, lambdas;
  for (const HourMetrics& h : hours) {
    const std::string label = std::to_string(h.hour);
    if (!h.feasible) {
      report.voltage.rows.push_back({label + " (infeasible)",
                                     {h.lambda, std::nullopt, std::nullopt, std::nullopt}});
      report.reactive.rows.push_back({label + " (infeasible)",
                                      {h.lambda, std::nullopt, std::nullopt, std::nullopt}});
      continue;
    }
    const auto ev = eta_cell(h.gamma_v_lac, h.gamma_v_dlac);
    const auto eq = eta_cell(h.eps_q_lac, h.eps_q_dlac);
    report.voltage.rows.push_back({label, {h.lambda, h.gamma_v_lac, h.gamma_v_dlac, ev}});
    report.reactive.rows.push_back({label, {h.lambda, h.eps_q_lac, h.eps_q_dlac, eq}});
    lambdas.push_back(h.lambda);
    g_lac.push_back(h.gamma_v_lac);
    g_dlac.push_back(h.gamma_v_dlac);
    e_lac.push_back(h.eps_q_lac);
    e_dlac.push_back(h.eps_q_dlac);
    if (ev) etas_v.push_back(*ev);
    if (eq) etas_q.push_back(*eq);
  }

  report.eta_v_mean = etas_v.empty() ? 0.0 : mean_of(etas_v);
  report.eta_v_std = sample_std(etas_v);
  report.eta_q_mean = etas_q.empty() ? 0.0 : mean_of(etas_q);
  report.eta_q_std = sample_std(etas_q);

  report.voltage.rows.push_back(
      {"mean", {mean_of(lambdas), mean_of(g_lac), mean_of(g_dlac), report.eta_v_mean}});
  report.voltage.rows.push_back(
      {"std", {sample_std(lambdas), sample_std(g_lac), sample_std(g_dlac), report.eta_v_std}});
  report.reactive.rows.push_back(
      {"mean", {mean_of(lambdas), mean_of(e_lac), mean_of(e_dlac), report.eta_q_mean}});
  report.reactive.rows.push_back(
      {"std", {sample_std(lambdas), sample_std(e_lac), sample_std(e_dlac), report.eta_q_std}});
  return report;
}

}  // namespace pflin
