#include "pflin/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pflin/case_io.hpp"
#include "pflin/errors.hpp"
#include "pflin/io.hpp"
#include "pflin/regression.hpp"
#include "pflin/version.hpp"

namespace fs = std::filesystem;

namespace pflin {
namespace {

int exit_code_for(const Error& err) {
  const std::string& code = err.code();
  const bool numerical = code == "divergence" || code == "singular_jacobian" ||
                         code == "singular_system" || code == "numerical_error";
  return numerical ? 2 : 1;
}

void print_error(std::ostream& err, const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  err << j.dump() << '\n';
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_error(err, "internal_error", e.what());
    return 2;
  }
}

std::string utc_now_iso() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunManifest start_manifest(const std::string& command, std::vector<std::string> inputs,
                           std::map<std::string, std::string> options) {
  RunManifest m;
  m.command = command;
  m.inputs = std::move(inputs);
  m.options = std::move(options);
  m.tool_version = kVersion;
  m.created_utc = utc_now_iso();
  return m;
}

ArtifactRecord record_file(const std::string& path) {
  const std::string bytes = read_text_file(path);
  return {path, bytes.size(), fnv1a64_hex(bytes)};
}

void ensure_parent_dir(const std::string& file_path) {
  const fs::path parent = fs::path(file_path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::string format_double(double v) { return nlohmann::json(v).dump(); }

std::string hour_stem(int hour) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "hour_%03d", hour);
  return buf;
}

bool is_numerical_failure(const Error& err) { return exit_code_for(err) == 2; }

}  // namespace

Network load_case_auto(const std::string& path) {
  const bool matpower = fs::path(path).extension() == ".m";
  return load_case(path, matpower ? CaseFormat::matpower : CaseFormat::native);
}

std::vector<std::string> list_case_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const std::string ext = entry.path().extension().string();
    if (ext != ".json" && ext != ".m") continue;
    if (name == "manifest.json") continue;
    if (name.size() >= 14 && name.compare(name.size() - 14, 14, ".manifest.json") == 0)
      continue;  // sidecar manifests of single-file commands
    files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int default_thread_count() {
  if (const char* env = std::getenv("PFLIN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

HourMetrics hour_metrics_from_solutions(const AcSolution& ac, const LinearSolution& lac,
                                        const LinearSolution& dlac, int hour, double lambda,
                                        double base_mva) {
  HourMetrics hm;
  hm.hour = hour;
  hm.lambda = lambda;
  const std::vector<bool> all_buses(ac.vm.size(), true);
  hm.gamma_v_lac = abs_dev_stats(lac.vm, ac.vm, all_buses).gamma;
  hm.gamma_v_dlac = abs_dev_stats(dlac.vm, ac.vm, all_buses).gamma;

  std::vector<double> q_ac, q_lac, q_dlac, q_filter;
  for (std::size_t i = 0; i < ac.flows.size(); ++i) {
    q_ac.push_back(ac.flows[i].q_from);
    q_lac.push_back(lac.flows[i].q_from);
    q_dlac.push_back(dlac.flows[i].q_from);
    q_filter.push_back(ac.flows[i].q_from * base_mva);
  }
  double tol = 10.0;
  try {
    filtered_mape(q_lac, q_ac, q_filter, tol);
  } catch (const EmptyFilter&) {
    tol = 0.0;
  }
  hm.eps_q_lac = filtered_mape(q_lac, q_ac, q_filter, tol).eps;
  hm.eps_q_dlac = filtered_mape(q_dlac, q_ac, q_filter, tol).eps;
  return hm;
}

int cmd_solve(const SolveOptions& options, std::ostream& err) {
  return run_guarded(err, [&]() {
    static const std::vector<std::string> kModels = {"ac", "dc", "ddc", "lac", "dlac"};
    if (std::find(kModels.begin(), kModels.end(), options.model) == kModels.end())
      throw InvalidArgument("unknown model '" + options.model + "'");
    if (options.out_path.empty()) throw InvalidArgument("output path required");
    const bool data_driven = options.model == "ddc" || options.model == "dlac";
    if (data_driven && options.coeffs_path.empty())
      throw InvalidArgument("coefficients required for model '" + options.model + "'");

    const Timer timer;
    const Network net = load_case_auto(options.case_path);
    const ModelCoefficients coeffs =
        data_driven ? load_coefficients(options.coeffs_path) : ModelCoefficients::identity();

    ensure_parent_dir(options.out_path);
    if (options.model == "ac") {
      AcOptions ac_options;
      ac_options.tol = options.tol;
      ac_options.max_iter = options.max_iter;
      save_ac_solution(solve_ac(net, ac_options), net.base_mva, options.out_path);
    } else {
      LinearSolution sol = options.model == "dc" || options.model == "ddc"
                               ? solve_dc_family(net, coeffs.k_d)
                               : solve_lac_family(net, coeffs);
      // label the file with the requested model: degenerate coefficients must
      // not silently rebrand a data-driven run as its unfitted base
      sol.model = linear_model_from_string(options.model);
      save_linear_solution(sol, net.base_mva, options.out_path);
    }

    std::vector<std::string> inputs = {options.case_path};
    if (!options.coeffs_path.empty()) inputs.push_back(options.coeffs_path);
    RunManifest manifest = start_manifest(
        "solve", inputs,
        {{"model", options.model},
         {"tol", format_double(options.tol)},
         {"max_iter", std::to_string(options.max_iter)}});
    manifest.artifacts.push_back(record_file(options.out_path));
    manifest.duration_seconds = timer.seconds();
    save_manifest(manifest, options.out_path + ".manifest.json");
    return 0;
  });
}

int cmd_fit(const FitOptions& options, std::ostream& err) {
  return run_guarded(err, [&]() {
    if (options.train_paths.empty()) throw InvalidArgument("at least one training case required");
    if (options.out_coeffs.empty()) throw InvalidArgument("coefficients output path required");

    const Timer timer;
    std::vector<Network> nets;
    for (const std::string& path : options.train_paths) nets.push_back(load_case_auto(path));
    for (std::size_t i = 1; i < nets.size(); ++i) {
      if (nets[i].buses.size() != nets[0].buses.size() ||
          nets[i].branches.size() != nets[0].branches.size())
        throw TopologyMismatch("training cases must share one topology");
    }

    std::vector<AcSolution> solutions;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      try {
        solutions.push_back(solve_ac(nets[i]));
      } catch (const Error& e) {
        if (!is_numerical_failure(e)) throw;
        throw NumericalError("training case '" + nets[i].name + "' failed: " + e.what());
      }
    }

    const CoefficientFit fit = fit_model_coefficients(nets[0], solutions);

    std::string diag_dir = options.diagnostics_dir;
    if (diag_dir.empty())
      diag_dir = (fs::path(options.out_coeffs).parent_path() / "fit_diagnostics").string();
    fs::create_directories(diag_dir);
    ensure_parent_dir(options.out_coeffs);

    ModelCoefficients coeffs = fit.coeffs;
    coeffs.fit_stats_ref = (fs::path(diag_dir) / "diagnostics.json").string();
    save_coefficients(coeffs, options.out_coeffs);

    const std::map<std::string, FitResult> fits = {
        {"ddc", fit.ddc_fit}, {"p", fit.p_fit}, {"q", fit.q_fit}};
    write_text_file((fs::path(diag_dir) / "diagnostics.json").string(),
                    fit_diagnostics_json(fits));
    std::vector<std::string> rel_artifacts = {"diagnostics.json"};
    for (const auto& [name, result] : fits) {
      const std::string coeff_name = name + "_coefficients.csv";
      const std::string anova_name = name + "_anova.csv";
      const std::string resid_name = name + "_residuals.csv";
      write_text_file((fs::path(diag_dir) / coeff_name).string(), coefficient_table_csv(result));
      write_text_file((fs::path(diag_dir) / anova_name).string(), anova_table_csv(result));
      write_text_file((fs::path(diag_dir) / resid_name).string(), residual_series_csv(result));
      rel_artifacts.push_back(coeff_name);
      rel_artifacts.push_back(anova_name);
      rel_artifacts.push_back(resid_name);
    }

    RunManifest manifest =
        start_manifest("fit", options.train_paths, {{"out_coeffs", options.out_coeffs}});
    manifest.artifacts.push_back(record_file(options.out_coeffs));
    for (const std::string& rel : rel_artifacts)
      manifest.artifacts.push_back(record_artifact(diag_dir, rel));
    manifest.duration_seconds = timer.seconds();
    save_manifest(manifest, (fs::path(diag_dir) / "manifest.json").string());
    return 0;
  });
}

int cmd_scenarios(const ScenarioOptions& options, std::ostream& err) {
  return run_guarded(err, [&]() {
    if (options.out_dir.empty()) throw InvalidArgument("output directory required");
    const Timer timer;
    const Network base = load_case_auto(options.base_path);
    const std::vector<HourlyCase> hours = generate_hourly_cases(base, options.spec);

    fs::create_directories(options.out_dir);
    std::vector<std::string> rel_files;
    for (const HourlyCase& hc : hours) {
      const std::string rel = hour_stem(hc.hour) + ".json";
      save_case(hc.net, (fs::path(options.out_dir) / rel).string());
      rel_files.push_back(rel);
    }

    nlohmann::json lambdas = nlohmann::json::array();
    for (const HourlyCase& hc : hours) lambdas.push_back(hc.lambda);
    const ScenarioSpec& spec = options.spec;
    RunManifest manifest = start_manifest(
        "scenarios", {options.base_path},
        {{"hours", std::to_string(spec.hours)},
         {"amplitude", format_double(spec.amplitude)},
         {"phase_hours", format_double(spec.phase_hours)},
         {"noise_sd", format_double(spec.noise_sd)},
         {"lambda_min", format_double(spec.lambda_min)},
         {"lambda_max", format_double(spec.lambda_max)},
         {"seed", std::to_string(spec.seed)},
         {"lambda_sequence", lambdas.dump()}});
    for (const std::string& rel : rel_files)
      manifest.artifacts.push_back(record_artifact(options.out_dir, rel));
    manifest.duration_seconds = timer.seconds();
    save_manifest(manifest, (fs::path(options.out_dir) / "manifest.json").string());
    return 0;
  });
}

namespace {

// Everything cmd_eval knows about one hour after the solve phase.
struct HourOutcome {
  int hour = 0;
  std::string case_path;
  double lambda = 1.0;
  bool feasible = false;
  std::string failure;  // code: message when infeasible
  Network net;
  std::vector<std::string> solution_files;  // relative to out_dir
  std::exception_ptr fatal;                 // non-numerical error, rethrown by the coordinator
};

std::vector<double> manifest_lambdas(const std::string& cases_dir, std::size_t n_hours) {
  const fs::path manifest_path = fs::path(cases_dir) / "manifest.json";
  std::vector<double> lambdas;
  if (fs::is_regular_file(manifest_path)) {
    try {
      const auto j = nlohmann::json::parse(read_text_file(manifest_path.string()));
      const auto seq = nlohmann::json::parse(
          j.at("options").at("lambda_sequence").get<std::string>());
      for (const auto& v : seq) lambdas.push_back(v.get<double>());
    } catch (...) {
      lambdas.clear();
    }
  }
  if (lambdas.size() == n_hours) return lambdas;
  return {};
}

double total_p_load(const Network& net) {
  double total = 0.0;
  for (const Bus& bus : net.buses) total += bus.p_load;
  return total;
}

void append_table_outputs(const Table& table, const std::string& stem,
                          const std::vector<std::string>& formats, const std::string& reports_dir,
                          std::vector<std::string>& rel_reports, std::string& markdown) {
  for (const std::string& format : formats) {
    if (format == "csv") {
      write_text_file((fs::path(reports_dir) / (stem + ".csv")).string(), table_to_csv(table));
      rel_reports.push_back(stem + ".csv");
    } else if (format == "json") {
      write_text_file((fs::path(reports_dir) / (stem + ".json")).string(),
                      table_to_json_text(table));
      rel_reports.push_back(stem + ".json");
    } else {
      markdown += table_to_markdown(table) + "\n";
    }
  }
}

}  // namespace

int cmd_eval(const EvalOptions& options, std::ostream& err) {
  return run_guarded(err, [&]() {
    if (options.out_dir.empty()) throw InvalidArgument("output directory required");
    if (options.models.empty()) throw InvalidArgument("at least one model required");
    for (const std::string& format : options.formats)
      if (format != "csv" && format != "md" && format != "json")
        throw InvalidArgument("unknown report format '" + format + "'");
    if (options.tolerances.empty()) throw InvalidArgument("at least one tolerance required");

    std::vector<LinearModel> models;
    for (const std::string& name : options.models) models.push_back(linear_model_from_string(name));
    auto wants = [&](LinearModel m) {
      return std::find(models.begin(), models.end(), m) != models.end();
    };
    if ((wants(LinearModel::ddc) || wants(LinearModel::dlac)) && options.coeffs_path.empty())
      throw InvalidArgument("coefficients required for data-driven models");

    const Timer timer;
    const ModelCoefficients coeffs = options.coeffs_path.empty()
                                         ? ModelCoefficients::identity()
                                         : load_coefficients(options.coeffs_path);

    const std::vector<std::string> case_files = list_case_files(options.cases_dir);
    if (case_files.empty()) throw InvalidArgument("no case files in " + options.cases_dir);
    const std::size_t n_hours = case_files.size();

    const std::string solutions_dir = (fs::path(options.out_dir) / "solutions").string();
    const std::string reports_dir = (fs::path(options.out_dir) / "reports").string();
    fs::create_directories(solutions_dir);
    fs::create_directories(reports_dir);

    std::vector<double> lambdas = manifest_lambdas(options.cases_dir, n_hours);

    // solve phase: hours are independent
    std::vector<HourOutcome> outcomes(n_hours);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_hours) return;
        HourOutcome& out = outcomes[i];
        out.hour = int(i + 1);
        out.case_path = case_files[i];
        try {
          out.net = load_case_auto(out.case_path);
          const AcSolution ac = solve_ac(out.net);
          const std::string stem = hour_stem(out.hour);
          const std::string ac_rel = stem + "_ac.json";
          save_ac_solution(ac, out.net.base_mva, (fs::path(solutions_dir) / ac_rel).string());
          out.solution_files.push_back(ac_rel);
          for (LinearModel model : models) {
            LinearSolution sol;
            switch (model) {
              case LinearModel::dc: sol = solve_dc_family(out.net, 1.0); break;
              case LinearModel::ddc: sol = solve_dc_family(out.net, coeffs.k_d); break;
              case LinearModel::lac: sol = solve_lac_family(out.net, ModelCoefficients::identity()); break;
              case LinearModel::dlac: sol = solve_lac_family(out.net, coeffs); break;
            }
            // keep the requested label even when fitted coefficients degenerate
            // to the identity; the report phase selects files by this tag
            sol.model = model;
            const std::string rel = stem + "_" + to_string(model) + ".json";
            save_linear_solution(sol, out.net.base_mva, (fs::path(solutions_dir) / rel).string());
            out.solution_files.push_back(rel);
          }
          out.feasible = true;
        } catch (const Error& e) {
          if (is_numerical_failure(e)) {
            out.failure = e.code() + ": " + e.what();
          } else {
            out.fatal = std::current_exception();
            return;
          }
        } catch (...) {
          out.fatal = std::current_exception();
          return;
        }
      }
    };
    int n_threads = options.threads >= 1 ? options.threads : default_thread_count();
    n_threads = std::min<int>(n_threads, int(n_hours));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    for (const HourOutcome& out : outcomes)
      if (out.fatal) std::rethrow_exception(out.fatal);

    // lambda: recorded sequence, or load ratio against the first hour
    if (lambdas.empty()) {
      lambdas.assign(n_hours, 1.0);
      const double base_load = total_p_load(outcomes.front().net);
      if (base_load > 0.0)
        for (std::size_t i = 0; i < n_hours; ++i)
          lambdas[i] = total_p_load(outcomes[i].net) / base_load;
    }
    for (std::size_t i = 0; i < n_hours; ++i) outcomes[i].lambda = lambdas[i];

    // report phase: tables derive strictly from the persisted files
    const bool has_lac_family = wants(LinearModel::lac) || wants(LinearModel::dlac);
    const bool has_lac_pair = wants(LinearModel::lac) && wants(LinearModel::dlac);

    std::string markdown;
    std::vector<std::string> rel_reports;
    std::vector<HourMetrics> hour_metrics;
    std::string multihour_md;
    int n_feasible = 0;

    for (const HourOutcome& out : outcomes) {
      if (!out.feasible) {
        if (has_lac_pair) {
          HourMetrics hm;
          hm.hour = out.hour;
          hm.feasible = false;
          hm.lambda = out.lambda;
          hour_metrics.push_back(hm);
        }
        continue;
      }
      ++n_feasible;
      const std::string stem = hour_stem(out.hour);
      const AcSolution ac =
          load_ac_solution((fs::path(solutions_dir) / (stem + "_ac.json")).string());
      std::vector<LinearSolution> sols;
      for (LinearModel model : models)
        sols.push_back(load_linear_solution(
            (fs::path(solutions_dir) / (stem + "_" + to_string(model) + ".json")).string()));
      std::vector<const LinearSolution*> sol_ptrs;
      for (const LinearSolution& sol : sols) sol_ptrs.push_back(&sol);

      markdown += "## " + stem + "\n\n";
      append_table_outputs(
          flow_error_table(out.net, ac, sol_ptrs, options.tolerances, FlowQuantity::active),
          stem + "_flow_p", options.formats, reports_dir, rel_reports, markdown);
      if (has_lac_family) {
        append_table_outputs(
            flow_error_table(out.net, ac, sol_ptrs, options.tolerances, FlowQuantity::reactive),
            stem + "_flow_q", options.formats, reports_dir, rel_reports, markdown);

        std::vector<const LinearSolution*> coupled;
        for (const LinearSolution& sol : sols)
          if (sol.model == LinearModel::lac || sol.model == LinearModel::dlac)
            coupled.push_back(&sol);
        append_table_outputs(voltage_error_table(out.net, ac, coupled, default_kv_bands()),
                             stem + "_voltage", options.formats, reports_dir, rel_reports,
                             markdown);
        const ComplexPowerReport apparent = complex_power_report(out.net, ac, coupled, 10.0);
        append_table_outputs(apparent.table, stem + "_apparent", options.formats, reports_dir,
                             rel_reports, markdown);
        nlohmann::ordered_json series = nlohmann::ordered_json::array();
        for (const auto& point : apparent.series) {
          nlohmann::ordered_json jp;
          jp["branch"] = point.branch;
          jp["ac_mva"] = point.ac_mva;
          jp["err_pct"] = point.err_pct;
          series.push_back(std::move(jp));
        }
        const std::string series_rel = stem + "_apparent_series.json";
        write_text_file((fs::path(reports_dir) / series_rel).string(), series.dump(1) + "\n");
        rel_reports.push_back(series_rel);
      }
      if (has_lac_pair) {
        const LinearSolution* lac = nullptr;
        const LinearSolution* dlac = nullptr;
        for (const LinearSolution& sol : sols) {
          if (sol.model == LinearModel::lac) lac = &sol;
          if (sol.model == LinearModel::dlac) dlac = &sol;
        }
        hour_metrics.push_back(hour_metrics_from_solutions(ac, *lac, *dlac, out.hour, out.lambda,
                                                           out.net.base_mva));
      }
    }

    if (n_feasible == 0)
      throw NumericalError("every hour failed to solve; first: " + outcomes.front().failure);

    int n_feasible_metrics = 0;
    for (const HourMetrics& hm : hour_metrics)
      if (hm.feasible) ++n_feasible_metrics;
    if (has_lac_pair && n_feasible_metrics >= 2) {
      const MultiHourReport multi = multi_hour_report(hour_metrics);
      append_table_outputs(multi.voltage, "multihour_voltage", options.formats, reports_dir,
                           rel_reports, multihour_md);
      append_table_outputs(multi.reactive, "multihour_reactive", options.formats, reports_dir,
                           rel_reports, multihour_md);
    }

    if (std::find(options.formats.begin(), options.formats.end(), "md") !=
        options.formats.end()) {
      std::string full_md = "# model evaluation\n\n";
      if (!multihour_md.empty()) full_md += "## multi-hour summary\n\n" + multihour_md;
      full_md += markdown;
      write_text_file((fs::path(reports_dir) / "report.md").string(), full_md);
      rel_reports.push_back("report.md");
    }

    // failure summary: infeasible hours are part of the record, not dropped
    nlohmann::json failed = nlohmann::json::array();
    for (const HourOutcome& out : outcomes)
      if (!out.feasible) {
        nlohmann::json jf;
        jf["hour"] = out.hour;
        jf["lambda"] = out.lambda;
        jf["error"] = out.failure;
        failed.push_back(std::move(jf));
      }

    std::string models_joined, formats_joined, tol_joined;
    for (const std::string& m : options.models)
      models_joined += (models_joined.empty() ? "" : ",") + m;
    for (const std::string& f : options.formats)
      formats_joined += (formats_joined.empty() ? "" : ",") + f;
    for (double t : options.tolerances)
      tol_joined += (tol_joined.empty() ? "" : ",") + format_double(t);

    std::vector<std::string> inputs = {options.cases_dir};
    if (!options.coeffs_path.empty()) inputs.push_back(options.coeffs_path);
    RunManifest manifest = start_manifest("eval", inputs,
                                          {{"models", models_joined},
                                           {"formats", formats_joined},
                                           {"tolerances", tol_joined},
                                           {"threads", std::to_string(n_threads)},
                                           {"failed_hours", failed.dump()}});
    for (const HourOutcome& out : outcomes)
      for (const std::string& rel : out.solution_files)
        manifest.artifacts.push_back(record_artifact(solutions_dir, rel));
    for (const std::string& rel : rel_reports)
      manifest.artifacts.push_back(record_artifact(reports_dir, rel));
    manifest.duration_seconds = timer.seconds();
    save_manifest(manifest, (fs::path(options.out_dir) / "manifest.json").string());

    if (!failed.empty())
      print_error(err, "partial_failure",
                  std::to_string(failed.size()) + " of " + std::to_string(n_hours) +
                      " hours infeasible; see manifest failed_hours");
    return 0;
  });
}

int cmd_convert(const ConvertOptions& options, std::ostream& err) {
  return run_guarded(err, [&]() {
    if (options.out_path.empty()) throw InvalidArgument("output path required");
    const Timer timer;
    const Network net = load_case_auto(options.in_path);
    ensure_parent_dir(options.out_path);
    save_case(net, options.out_path);
    RunManifest manifest = start_manifest("convert", {options.in_path}, {});
    manifest.artifacts.push_back(record_file(options.out_path));
    manifest.duration_seconds = timer.seconds();
    save_manifest(manifest, options.out_path + ".manifest.json");
    return 0;
  });
}

}  // namespace pflin
