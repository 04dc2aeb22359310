#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pflin/ac_solver.hpp"
#include "pflin/linear_models.hpp"
#include "pflin/metrics.hpp"
#include "pflin/network.hpp"
#include "pflin/scenarios.hpp"

// Batch front end. Each command returns a process exit code: 0 success,
// 1 input or usage error, 2 numerical failure. Failures print one line of
// machine-readable JSON {"error":{"code","message"}} to the given stream.

namespace pflin {

struct SolveOptions {
  std::string case_path;
  std::string model = "ac";  // ac, dc, ddc, lac, dlac
  std::string coeffs_path;   // required for ddc/dlac
  std::string out_path;
  double tol = 1e-8;
  int max_iter = 30;
};

struct FitOptions {
  std::vector<std::string> train_paths;
  std::string out_coeffs;
  std::string diagnostics_dir;
};

struct ScenarioOptions {
  std::string base_path;
  ScenarioSpec spec;
  std::string out_dir;
};

struct EvalOptions {
  std::string cases_dir;
  std::string coeffs_path;  // required when models include ddc/dlac
  std::vector<std::string> models = {"dc", "ddc", "lac", "dlac"};
  std::vector<std::string> formats = {"csv", "md", "json"};
  std::string out_dir;
  std::vector<double> tolerances = {0.0, 10.0, 50.0};  // MW / MVAr filter levels
  int threads = 0;                                     // 0: default_thread_count()
};

struct ConvertOptions {
  std::string in_path;
  std::string out_path;
};

int cmd_solve(const SolveOptions& options, std::ostream& err);
int cmd_fit(const FitOptions& options, std::ostream& err);
int cmd_scenarios(const ScenarioOptions& options, std::ostream& err);
int cmd_eval(const EvalOptions& options, std::ostream& err);
int cmd_convert(const ConvertOptions& options, std::ostream& err);

// ---- pieces shared with the test suites ----

// .m loads as a MATPOWER file, anything else as the native format
Network load_case_auto(const std::string& path);

// case files in name order, manifests and non-JSON entries skipped
std::vector<std::string> list_case_files(const std::string& dir);

// PFLIN_THREADS when set, hardware concurrency otherwise, at least 1
int default_thread_count();

// The hourly summary compares the coupled models at the fixed 10 MVAr filter
// level; a filter that empties falls back to unfiltered.
HourMetrics hour_metrics_from_solutions(const AcSolution& ac, const LinearSolution& lac,
                                        const LinearSolution& dlac, int hour, double lambda,
                                        double base_mva);

}  // namespace pflin
