#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pflin/cli.hpp"
#include "pflin/version.hpp"

namespace {

// CLI11 validates flag syntax; semantic checks live in the command functions
// so library callers get the same errors as the binary.

int run(int argc, char** argv) {
  CLI::App app{"power flow linearization toolkit"};
  app.set_version_flag("--version", std::string(pflin::kVersion));
  app.require_subcommand(1);

  pflin::SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "solve one case with one model");
  solve->add_option("--case", solve_opt.case_path, "case file (.json native, .m)")->required();
  solve->add_option("--model", solve_opt.model, "ac, dc, ddc, lac or dlac")->required();
  solve->add_option("--coeffs", solve_opt.coeffs_path, "fitted coefficients JSON");
  solve->add_option("--out", solve_opt.out_path, "solution output file")->required();
  solve->add_option("--tol", solve_opt.tol, "mismatch tolerance, per unit");
  solve->add_option("--max-iter", solve_opt.max_iter, "iteration cap");

  pflin::FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "fit model coefficients on solved cases");
  fit->add_option("--train", fit_opt.train_paths, "training case files")->required();
  fit->add_option("--out-coeffs", fit_opt.out_coeffs, "coefficients output file")->required();
  fit->add_option("--diagnostics-dir", fit_opt.diagnostics_dir,
                  "directory for fit diagnostics (default: fit_diagnostics beside the output)");

  pflin::ScenarioOptions scen_opt;
  CLI::App* scen = app.add_subcommand("scenarios", "synthesize hourly cases from a base case");
  scen->add_option("--base", scen_opt.base_path, "base case file")->required();
  scen->add_option("--out-dir", scen_opt.out_dir, "output directory")->required();
  scen->add_option("--hours", scen_opt.spec.hours, "number of hours");
  scen->add_option("--amplitude", scen_opt.spec.amplitude, "daily sinusoidal swing");
  scen->add_option("--phase-hours", scen_opt.spec.phase_hours, "hour of the daily peak");
  scen->add_option("--noise-sd", scen_opt.spec.noise_sd, "multiplicative noise sd");
  scen->add_option("--lambda-min", scen_opt.spec.lambda_min, "lower clip");
  scen->add_option("--lambda-max", scen_opt.spec.lambda_max, "upper clip");
  scen->add_option("--seed", scen_opt.spec.seed, "RNG seed");

  pflin::EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "evaluate linear models against the AC solution");
  eval->add_option("--cases-dir", eval_opt.cases_dir, "directory of case files")->required();
  eval->add_option("--coeffs", eval_opt.coeffs_path, "fitted coefficients JSON");
  eval->add_option("--models", eval_opt.models, "models to evaluate")
      ->delimiter(',')
      ->capture_default_str();
  eval->add_option("--formats", eval_opt.formats, "report formats: csv, md, json")
      ->delimiter(',')
      ->capture_default_str();
  eval->add_option("--out-dir", eval_opt.out_dir, "output directory")->required();
  eval->add_option("--tolerances", eval_opt.tolerances, "flow filter levels, MW / MVAr")
      ->delimiter(',');
  eval->add_option("--threads", eval_opt.threads,
                   "hour-level worker threads (default: PFLIN_THREADS or hardware)");

  pflin::ConvertOptions conv_opt;
  CLI::App* conv = app.add_subcommand("convert", "convert a case to the native format");
  conv->add_option("--in", conv_opt.in_path, "input case file")->required();
  conv->add_option("--out", conv_opt.out_path, "native JSON output file")->required();

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return pflin::cmd_solve(solve_opt, std::cerr);
  if (fit->parsed()) return pflin::cmd_fit(fit_opt, std::cerr);
  if (scen->parsed()) return pflin::cmd_scenarios(scen_opt, std::cerr);
  if (eval->parsed()) return pflin::cmd_eval(eval_opt, std::cerr);
  return pflin::cmd_convert(conv_opt, std::cerr);
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
