#include "pflin/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pflin/errors.hpp"

namespace pflin {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ordered_json parse_json(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(what + ": " + err.what());
  }
}

double number_or_nan(const ordered_json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

std::vector<double> double_vector(const ordered_json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ParseError("solution file lacks array '" + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(number_or_nan(v));
  return out;
}

ordered_json flows_to_json(const std::vector<BranchFlow>& flows, double base) {
  ordered_json arr = ordered_json::array();
  for (const BranchFlow& f : flows) {
    ordered_json jf;
    jf["branch"] = f.branch;
    jf["p_from_mw"] = f.p_from * base;
    jf["q_from_mvar"] = f.q_from * base;
    jf["p_to_mw"] = f.p_to * base;
    jf["q_to_mvar"] = f.q_to * base;
    arr.push_back(std::move(jf));
  }
  return arr;
}

std::vector<BranchFlow> flows_from_json(const ordered_json& j, double base) {
  if (!j.contains("flows") || !j.at("flows").is_array())
    throw ParseError("solution file lacks array 'flows'");
  std::vector<BranchFlow> flows;
  for (const auto& jf : j.at("flows")) {
    BranchFlow f;
    f.branch = jf.at("branch").get<int>();
    f.p_from = number_or_nan(jf.at("p_from_mw")) / base;
    f.q_from = number_or_nan(jf.at("q_from_mvar")) / base;
    f.p_to = number_or_nan(jf.at("p_to_mw")) / base;
    f.q_to = number_or_nan(jf.at("q_to_mvar")) / base;
    flows.push_back(f);
  }
  return flows;
}

double base_mva_of(const ordered_json& j) {
  if (!j.contains("base_mva")) throw ParseError("solution file lacks 'base_mva'");
  const double base = j.at("base_mva").get<double>();
  if (!(base > 0.0)) throw ParseError("solution base_mva must be positive");
  return base;
}

std::string dump_pretty(const ordered_json& j) { return j.dump(1) + "\n"; }

// shortest decimal that round-trips; NaN prints empty
std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  return nlohmann::json(v).dump();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string md_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failure: " + path);
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string ac_solution_to_json_text(const AcSolution& sol, double base_mva) {
  ordered_json j;
  j["case"] = sol.case_name;
  j["base_mva"] = base_mva;
  j["vm"] = sol.vm;
  j["va_rad"] = sol.va;
  j["flows"] = flows_to_json(sol.flows, base_mva);
  j["iterations"] = sol.iterations;
  j["max_mismatch"] = sol.max_mismatch;
  return dump_pretty(j);
}

void save_ac_solution(const AcSolution& sol, double base_mva, const std::string& path) {
  write_text_file(path, ac_solution_to_json_text(sol, base_mva));
}

AcSolution load_ac_solution(const std::string& path) {
  const ordered_json j = parse_json(read_text_file(path), path);
  const double base = base_mva_of(j);
  AcSolution sol;
  sol.case_name = j.value("case", std::string{});
  sol.vm = double_vector(j, "vm");
  sol.va = double_vector(j, "va_rad");
  sol.flows = flows_from_json(j, base);
  sol.iterations = j.value("iterations", 0);
  sol.max_mismatch = j.value("max_mismatch", 0.0);
  return sol;
}

std::string linear_solution_to_json_text(const LinearSolution& sol, double base_mva) {
  ordered_json j;
  j["case"] = sol.case_name;
  j["model"] = to_string(sol.model);
  j["base_mva"] = base_mva;
  j["vm"] = sol.vm;
  j["va_rad"] = sol.va;
  j["flows"] = flows_to_json(sol.flows, base_mva);
  return dump_pretty(j);
}

void save_linear_solution(const LinearSolution& sol, double base_mva, const std::string& path) {
  write_text_file(path, linear_solution_to_json_text(sol, base_mva));
}

LinearSolution load_linear_solution(const std::string& path) {
  const ordered_json j = parse_json(read_text_file(path), path);
  const double base = base_mva_of(j);
  if (!j.contains("model")) throw ParseError("linear solution file lacks 'model'");
  LinearSolution sol;
  sol.model = linear_model_from_string(j.at("model").get<std::string>());
  sol.case_name = j.value("case", std::string{});
  sol.vm = double_vector(j, "vm");
  sol.va = double_vector(j, "va_rad");
  sol.flows = flows_from_json(j, base);
  sol.slack_p = kNaN;
  return sol;
}

std::string coefficients_to_json_text(const ModelCoefficients& coeffs) {
  ordered_json j;
  j["k_d"] = coeffs.k_d;
  j["k_a"] = coeffs.k_a;
  j["trained_on"] = coeffs.trained_on;
  j["fit_stats_ref"] = coeffs.fit_stats_ref;
  return dump_pretty(j);
}

void save_coefficients(const ModelCoefficients& coeffs, const std::string& path) {
  write_text_file(path, coefficients_to_json_text(coeffs));
}

ModelCoefficients load_coefficients(const std::string& path) {
  const ordered_json j = parse_json(read_text_file(path), path);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "k_d" && key != "k_a" && key != "trained_on" && key != "fit_stats_ref")
      throw ParseError("coefficients file: unknown key '" + key + "'");
  }
  ModelCoefficients coeffs;
  coeffs.k_d = j.at("k_d").get<double>();
  const auto& ka = j.at("k_a");
  if (!ka.is_array() || ka.size() != coeffs.k_a.size())
    throw ParseError("coefficients file: 'k_a' must hold 5 numbers");
  for (std::size_t i = 0; i < coeffs.k_a.size(); ++i) coeffs.k_a[i] = ka[i].get<double>();
  if (j.contains("trained_on"))
    coeffs.trained_on = j.at("trained_on").get<std::vector<std::string>>();
  coeffs.fit_stats_ref = j.value("fit_stats_ref", std::string{});
  return coeffs;
}

namespace {

ordered_json fit_to_json(const FitResult& fit) {
  ordered_json j;
  j["column_names"] = fit.column_names;
  j["row_keys"] = fit.row_keys;
  j["n"] = fit.n;
  j["k"] = fit.k;
  j["beta"] = fit.beta;
  j["std_err"] = fit.std_err;
  j["ci_lo"] = fit.ci_lo;
  j["ci_hi"] = fit.ci_hi;
  j["ss_res"] = fit.ss_res;
  j["ms_res"] = fit.ms_res;
  j["r2_uncentered"] = fit.r2_uncentered;
  j["r2_centered"] = fit.r2_centered;
  j["fitted"] = fit.fitted;
  j["residuals"] = fit.residuals;
  j["standardized"] = fit.standardized;
  j["rstudent"] = fit.rstudent;
  j["undefined_rstudent_rows"] = fit.undefined_rstudent_rows;
  j["hat_diag"] = fit.hat_diag;
  if (fit.vif)
    j["vif"] = *fit.vif;
  else
    j["vif"] = nullptr;
  ordered_json rows = ordered_json::array();
  for (const AnovaRow& row : fit.anova) {
    ordered_json jr;
    jr["term"] = row.term;
    jr["df"] = row.df;
    jr["ss"] = row.ss;
    jr["ms"] = row.ms;
    jr["f"] = row.f;
    jr["pr"] = row.pr;
    rows.push_back(std::move(jr));
  }
  j["anova"] = std::move(rows);
  return j;
}

}  // namespace

std::string fit_diagnostics_json(const std::map<std::string, FitResult>& fits) {
  ordered_json j;
  for (const auto& [name, fit] : fits) j[name] = fit_to_json(fit);
  return dump_pretty(j);
}

std::string coefficient_table_csv(const FitResult& fit) {
  std::string out = "term,estimate,std_error,ci_lo,ci_hi,vif\n";
  for (std::size_t i = 0; i < fit.column_names.size(); ++i) {
    out += csv_escape(fit.column_names[i]);
    out += ',' + csv_number(fit.beta[i]);
    out += ',' + csv_number(fit.std_err[i]);
    out += ',' + csv_number(fit.ci_lo[i]);
    out += ',' + csv_number(fit.ci_hi[i]);
    out += ',';
    if (fit.vif) out += csv_number((*fit.vif)[i]);
    out += '\n';
  }
  return out;
}

std::string anova_table_csv(const FitResult& fit) {
  std::string out = "source,df,ss,ms,f,pr_f\n";
  for (const AnovaRow& row : fit.anova) {
    out += csv_escape(row.term);
    out += ',' + std::to_string(row.df);
    out += ',' + csv_number(row.ss);
    out += ',' + csv_number(row.ms);
    out += ',' + csv_number(row.f);
    out += ',';
    // machine epsilon is the smallest tail the F reference tables resolve
    if (std::isnan(row.pr))
      ;
    else if (row.pr < 2.2e-16)
      out += "<2.2e-16";
    else
      out += csv_number(row.pr);
    out += '\n';
  }
  return out;
}

std::string residual_series_csv(const FitResult& fit) {
  std::string out = "row,fitted,residual,standardized,rstudent,leverage\n";
  for (std::size_t i = 0; i < fit.row_keys.size(); ++i) {
    out += csv_escape(fit.row_keys[i]);
    out += ',' + csv_number(fit.fitted[i]);
    out += ',' + csv_number(fit.residuals[i]);
    out += ',' + csv_number(fit.standardized[i]);
    out += ',' + csv_number(fit.rstudent[i]);
    out += ',' + csv_number(fit.hat_diag[i]);
    out += '\n';
  }
  return out;
}

std::string table_to_csv(const Table& table) {
  std::string out = csv_escape(table.row_header);
  for (const std::string& col : table.columns) out += ',' + csv_escape(col);
  out += '\n';
  for (const Table::Row& row : table.rows) {
    out += csv_escape(row.label);
    for (const auto& cell : row.cells) {
      out += ',';
      if (cell) out += csv_number(*cell);
    }
    out += '\n';
  }
  return out;
}

std::string table_to_markdown(const Table& table) {
  std::string out = "### " + table.title + "\n\n";
  out += "| " + table.row_header + " |";
  for (const std::string& col : table.columns) out += ' ' + col + " |";
  out += "\n|";
  for (std::size_t i = 0; i <= table.columns.size(); ++i) out += " --- |";
  out += '\n';
  for (const Table::Row& row : table.rows) {
    out += "| " + row.label + " |";
    for (const auto& cell : row.cells) out += ' ' + (cell ? md_number(*cell) : std::string()) + " |";
    out += '\n';
  }
  return out;
}

std::string table_to_json_text(const Table& table) {
  ordered_json j;
  j["title"] = table.title;
  j["row_header"] = table.row_header;
  j["columns"] = table.columns;
  ordered_json rows = ordered_json::array();
  for (const Table::Row& row : table.rows) {
    ordered_json jr;
    jr["label"] = row.label;
    ordered_json cells = ordered_json::array();
    for (const auto& cell : row.cells) {
      if (cell)
        cells.push_back(*cell);
      else
        cells.push_back(nullptr);
    }
    jr["cells"] = std::move(cells);
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return dump_pretty(j);
}

std::string manifest_to_json_text(const RunManifest& manifest) {
  ordered_json j;
  j["command"] = manifest.command;
  j["inputs"] = manifest.inputs;
  j["options"] = manifest.options;
  ordered_json arts = ordered_json::array();
  for (const ArtifactRecord& a : manifest.artifacts) {
    ordered_json ja;
    ja["path"] = a.path;
    ja["bytes"] = a.bytes;
    ja["fnv1a64"] = a.fnv1a64;
    arts.push_back(std::move(ja));
  }
  j["artifacts"] = std::move(arts);
  j["tool_version"] = manifest.tool_version;
  j["duration_seconds"] = manifest.duration_seconds;
  j["created_utc"] = manifest.created_utc;
  return dump_pretty(j);
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  write_text_file(path, manifest_to_json_text(manifest));
}

ArtifactRecord record_artifact(const std::string& out_dir, const std::string& rel_path) {
  const std::string bytes = read_text_file((std::filesystem::path(out_dir) / rel_path).string());
  ArtifactRecord record;
  record.path = rel_path;
  record.bytes = bytes.size();
  record.fnv1a64 = fnv1a64_hex(bytes);
  return record;
}

}  // namespace pflin
