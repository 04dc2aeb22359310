#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pflin/ac_solver.hpp"
#include "pflin/linear_models.hpp"
#include "pflin/metrics.hpp"
#include "pflin/regression.hpp"

namespace pflin {

// ---- plain file helpers ----

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// 64-bit FNV-1a over raw bytes, as a 16-digit hex string
std::string fnv1a64_hex(const std::string& bytes);

// ---- solution persistence (physical units, angles in radians) ----

std::string ac_solution_to_json_text(const AcSolution& sol, double base_mva);
void save_ac_solution(const AcSolution& sol, double base_mva, const std::string& path);
// NaN flow entries round-trip as JSON null
AcSolution load_ac_solution(const std::string& path);

std::string linear_solution_to_json_text(const LinearSolution& sol, double base_mva);
void save_linear_solution(const LinearSolution& sol, double base_mva, const std::string& path);
LinearSolution load_linear_solution(const std::string& path);

// ---- model coefficients ----

std::string coefficients_to_json_text(const ModelCoefficients& coeffs);
void save_coefficients(const ModelCoefficients& coeffs, const std::string& path);
ModelCoefficients load_coefficients(const std::string& path);

// ---- regression diagnostics ----

// every FitResult field, keyed by dataset name
std::string fit_diagnostics_json(const std::map<std::string, FitResult>& fits);

// per-term estimate table: term, estimate, std_error, ci_lo, ci_hi, vif
std::string coefficient_table_csv(const FitResult& fit);

// source, df, ss, ms, f, pr_f; Pr below 2.2e-16 prints as "<2.2e-16"
std::string anova_table_csv(const FitResult& fit);

// row_key, fitted, residual, standardized, rstudent, leverage
std::string residual_series_csv(const FitResult& fit);

// ---- metric table emission ----

std::string table_to_csv(const Table& table);
std::string table_to_markdown(const Table& table);
std::string table_to_json_text(const Table& table);

// ---- run manifests ----

struct ArtifactRecord {
  std::string path;  // relative to the output directory
  std::uint64_t bytes = 0;
  std::string fnv1a64;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> options;
  std::vector<ArtifactRecord> artifacts;
  std::string tool_version;
  double duration_seconds = 0.0;
  std::string created_utc;  // the only timestamp any run emits
};

std::string manifest_to_json_text(const RunManifest& manifest);
void save_manifest(const RunManifest& manifest, const std::string& path);

// convenience: hash a file already on disk into an artifact record
ArtifactRecord record_artifact(const std::string& out_dir, const std::string& rel_path);

}  // namespace pflin
