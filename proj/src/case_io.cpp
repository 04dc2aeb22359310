#include "pflin/case_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pflin/errors.hpp"

namespace pflin {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kDefaultBaseKv = 100.0;  // stands in for unspecified voltage levels

double expect_number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ParseError(where + ": key '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return expect_number(obj, key, where);
}

bool status_or_true(const json& obj, const std::string& where) {
  if (!obj.contains("status")) return true;
  const json& v = obj.at("status");
  if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
    throw ParseError(where + ": 'status' must be 0 or 1");
  return v.get<int>() == 1;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
}

Network parse_native(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  if (!root.is_object()) throw ParseError("case file must be a JSON object");
  reject_unknown_keys(root, {"base_mva", "buses", "generators", "branches"}, "case");

  Network net;
  net.name = name;
  net.base_mva = number_or(root, "base_mva", 100.0, "case");
  if (net.base_mva <= 0.0) throw ParseError("base_mva must be positive");
  const double base = net.base_mva;

  if (!root.contains("buses") || !root.at("buses").is_array())
    throw ParseError("case requires a 'buses' array");

  int pos = 0;
  for (const json& jb : root.at("buses")) {
    const std::string where = "buses[" + std::to_string(pos++) + "]";
    if (!jb.is_object()) throw ParseError(where + ": must be an object");
    reject_unknown_keys(jb,
                        {"id", "kind", "p_load_mw", "q_load_mvar", "gs_mw", "bs_mvar", "base_kv",
                         "vm", "va_deg"},
                        where);
    if (!jb.contains("id")) throw ParseError(where + ": missing 'id'");
    Bus bus;
    bus.id = int(expect_number(jb, "id", where));
    bus.p_load = number_or(jb, "p_load_mw", 0.0, where) / base;
    bus.q_load = number_or(jb, "q_load_mvar", 0.0, where) / base;
    bus.g_shunt = number_or(jb, "gs_mw", 0.0, where) / base;
    bus.b_shunt = number_or(jb, "bs_mvar", 0.0, where) / base;
    bus.base_kv = number_or(jb, "base_kv", kDefaultBaseKv, where);
    bus.v_init = number_or(jb, "vm", 1.0, where);
    bus.a_init = number_or(jb, "va_deg", 0.0, where) * kPi / 180.0;
    if (jb.contains("kind")) {
      const std::string kind = jb.at("kind").is_string() ? jb.at("kind").get<std::string>() : "";
      if (kind == "slack")
        bus.kind = BusKind::slack;
      else if (kind == "pv")
        bus.kind = BusKind::pv;
      else if (kind == "pq")
        bus.kind = BusKind::pq;
      else
        throw ParseError(where + ": 'kind' must be one of slack, pv, pq");
    } else {
      bus.kind = BusKind::pq;  // may be promoted to pv below
    }
    net.buses.push_back(bus);
  }

  std::set<int> has_inservice_gen;
  pos = 0;
  if (root.contains("generators")) {
    if (!root.at("generators").is_array()) throw ParseError("'generators' must be an array");
    for (const json& jg : root.at("generators")) {
      const std::string where = "generators[" + std::to_string(pos++) + "]";
      if (!jg.is_object()) throw ParseError(where + ": must be an object");
      reject_unknown_keys(
          jg, {"bus", "pg_mw", "qg_mvar", "v_set", "q_min_mvar", "q_max_mvar", "status"}, where);
      if (!jg.contains("bus")) throw ParseError(where + ": missing 'bus'");
      Generator gen;
      gen.bus = int(expect_number(jg, "bus", where));
      gen.p_gen = number_or(jg, "pg_mw", 0.0, where) / base;
      gen.q_gen = number_or(jg, "qg_mvar", 0.0, where) / base;
      gen.v_set = number_or(jg, "v_set", 1.0, where);
      gen.q_min = number_or(jg, "q_min_mvar", -1e6, where) / base;
      gen.q_max = number_or(jg, "q_max_mvar", 1e6, where) / base;
      gen.in_service = status_or_true(jg, where);
      if (gen.in_service) has_inservice_gen.insert(gen.bus);
      net.generators.push_back(gen);
    }
  }

  // kind omitted in the file: a bus with an in-service generator is PV
  pos = 0;
  for (const json& jb : root.at("buses")) {
    Bus& bus = net.buses[pos++];
    if (!jb.contains("kind") && has_inservice_gen.count(bus.id)) bus.kind = BusKind::pv;
  }

  pos = 0;
  if (root.contains("branches")) {
    if (!root.at("branches").is_array()) throw ParseError("'branches' must be an array");
    for (const json& jr : root.at("branches")) {
      const std::string where = "branches[" + std::to_string(pos++) + "]";
      if (!jr.is_object()) throw ParseError(where + ": must be an object");
      reject_unknown_keys(
          jr, {"from", "to", "r", "x", "b", "tap", "shift_deg", "rate_a_mva", "status"}, where);
      if (!jr.contains("from") || !jr.contains("to"))
        throw ParseError(where + ": missing 'from' or 'to'");
      Branch br;
      br.from = int(expect_number(jr, "from", where));
      br.to = int(expect_number(jr, "to", where));
      br.r = number_or(jr, "r", 0.0, where);
      br.x = number_or(jr, "x", 0.0, where);
      br.b_charging = number_or(jr, "b", 0.0, where);
      br.tap = number_or(jr, "tap", 1.0, where);
      br.shift = number_or(jr, "shift_deg", 0.0, where) * kPi / 180.0;
      br.rate_a = number_or(jr, "rate_a_mva", 0.0, where);
      br.in_service = status_or_true(jr, where);
      net.branches.push_back(br);
    }
  }

  return net;
}

// .m text helpers: strip % comments, then pull the bracketed matrix assigned to
// mpc.<field> and tokenize it row-wise.

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  for (char c : text) {
    if (c == '%') in_comment = true;
    if (c == '\n') in_comment = false;
    if (!in_comment) out.push_back(c);
  }
  return out;
}

// A matrix row together with the 1-based source line it starts on, so that
// malformed rows can be reported with their location in the file.
struct MatrixRow {
  int line = 0;
  std::vector<double> values;
};

std::vector<MatrixRow> extract_matrix(const std::string& text, const std::string& field,
                                      bool required) {
  const std::string marker = "mpc." + field;
  std::size_t at = text.find(marker);
  if (at == std::string::npos) {
    if (required) throw ParseError("missing " + marker + " matrix");
    return {};
  }
  const std::size_t open = text.find('[', at);
  const std::size_t close = text.find(']', open);
  if (open == std::string::npos || close == std::string::npos)
    throw ParseError(marker + " is not a bracketed matrix");
  const std::string body = text.substr(open + 1, close - open - 1);

  // strip_comments keeps newlines, so counting them gives original file lines.
  int line = 1 + int(std::count(text.begin(), text.begin() + long(open), '\n'));

  std::vector<MatrixRow> rows;
  std::string row_text;
  int row_line = line;
  auto flush_row = [&]() {
    std::istringstream stream(row_text);
    std::vector<double> row;
    double value = 0.0;
    while (stream >> value) row.push_back(value);
    std::string trailing;
    if (stream.clear(), stream >> trailing)
      throw ParseError("line " + std::to_string(row_line) + ": " + marker +
                       ": non-numeric token '" + trailing + "'");
    if (!row.empty()) rows.push_back({row_line, std::move(row)});
    row_text.clear();
  };
  for (char c : body) {
    if (c == '\n') {
      flush_row();
      ++line;
      row_line = line;
    } else if (c == ';') {
      flush_row();
      row_line = line;
    } else {
      if (row_text.empty() && !std::isspace(static_cast<unsigned char>(c))) row_line = line;
      row_text.push_back(c);
    }
  }
  flush_row();
  return rows;
}

double scalar_field(const std::string& text, const std::string& field) {
  const std::string marker = "mpc." + field;
  std::size_t at = text.find(marker);
  if (at == std::string::npos) throw ParseError("missing " + marker);
  const std::size_t eq = text.find('=', at);
  if (eq == std::string::npos) throw ParseError(marker + " has no value");
  std::istringstream stream(text.substr(eq + 1));
  double value = 0.0;
  if (!(stream >> value)) throw ParseError(marker + " has no numeric value");
  return value;
}

Network parse_matpower(const std::string& text, const std::string& name) {
  const std::string clean = strip_comments(text);
  Network net;
  net.name = name;
  net.base_mva = scalar_field(clean, "baseMVA");
  if (net.base_mva <= 0.0) throw ParseError("baseMVA must be positive");
  const double base = net.base_mva;

  for (const auto& [line, row] : extract_matrix(clean, "bus", true)) {
    if (row.size() < 13)
      throw ParseError("line " + std::to_string(line) + ": bus row needs 13 columns, got " +
                       std::to_string(row.size()));
    Bus bus;
    bus.id = int(row[0]);
    const int type = int(row[1]);
    switch (type) {
      case 1: bus.kind = BusKind::pq; break;
      case 2: bus.kind = BusKind::pv; break;
      case 3: bus.kind = BusKind::slack; break;
      default:
        throw ParseError("line " + std::to_string(line) + ": bus " + std::to_string(bus.id) +
                         ": unsupported type " + std::to_string(type));
    }
    bus.p_load = row[2] / base;
    bus.q_load = row[3] / base;
    bus.g_shunt = row[4] / base;
    bus.b_shunt = row[5] / base;
    bus.v_init = row[7];
    bus.a_init = row[8] * kPi / 180.0;
    bus.base_kv = row[9] > 0.0 ? row[9] : kDefaultBaseKv;
    net.buses.push_back(bus);
  }

  for (const auto& [line, row] : extract_matrix(clean, "gen", false)) {
    if (row.size() < 10)
      throw ParseError("line " + std::to_string(line) + ": gen row needs 10 columns, got " +
                       std::to_string(row.size()));
    Generator gen;
    gen.bus = int(row[0]);
    gen.p_gen = row[1] / base;
    gen.q_gen = row[2] / base;
    gen.q_max = row[3] / base;
    gen.q_min = row[4] / base;
    gen.v_set = row[5];
    gen.in_service = row[7] > 0.0;
    net.generators.push_back(gen);
  }

  for (const auto& [line, row] : extract_matrix(clean, "branch", false)) {
    if (row.size() < 11)
      throw ParseError("line " + std::to_string(line) + ": branch row needs 11 columns, got " +
                       std::to_string(row.size()));
    Branch br;
    br.from = int(row[0]);
    br.to = int(row[1]);
    br.r = row[2];
    br.x = row[3];
    br.b_charging = row[4];
    br.rate_a = row[5];
    br.tap = row[8] != 0.0 ? row[8] : 1.0;  // 0 means nominal in this format
    br.shift = row[9] * kPi / 180.0;
    br.in_service = row[10] > 0.0;
    net.branches.push_back(br);
  }

  return net;
}

}  // namespace

Network parse_case(const std::string& text, CaseFormat format, const std::string& name) {
  Network net = format == CaseFormat::native ? parse_native(text, name)
                                             : parse_matpower(text, name);
  std::stable_sort(net.buses.begin(), net.buses.end(),
                   [](const Bus& a, const Bus& b) { return a.id < b.id; });
  const auto violations = validate(net);
  if (!violations.empty()) throw ValidationError(violations);
  return net;
}

Network load_case(const std::string& path, CaseFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open case file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_case(buffer.str(), format, std::filesystem::path(path).stem().string());
}

std::string case_to_json_text(const Network& net) {
  const double base = net.base_mva;
  json root;
  root["base_mva"] = base;

  json buses = json::array();
  for (const Bus& bus : net.buses) {
    json jb;
    jb["id"] = bus.id;
    jb["kind"] = bus.kind == BusKind::slack ? "slack" : bus.kind == BusKind::pv ? "pv" : "pq";
    jb["p_load_mw"] = bus.p_load * base;
    jb["q_load_mvar"] = bus.q_load * base;
    jb["gs_mw"] = bus.g_shunt * base;
    jb["bs_mvar"] = bus.b_shunt * base;
    jb["base_kv"] = bus.base_kv;
    jb["vm"] = bus.v_init;
    jb["va_deg"] = bus.a_init * 180.0 / kPi;
    buses.push_back(jb);
  }
  root["buses"] = buses;

  json gens = json::array();
  for (const Generator& gen : net.generators) {
    json jg;
    jg["bus"] = gen.bus;
    jg["pg_mw"] = gen.p_gen * base;
    jg["qg_mvar"] = gen.q_gen * base;
    jg["v_set"] = gen.v_set;
    jg["q_min_mvar"] = gen.q_min * base;
    jg["q_max_mvar"] = gen.q_max * base;
    jg["status"] = gen.in_service ? 1 : 0;
    gens.push_back(jg);
  }
  root["generators"] = gens;

  json branches = json::array();
  for (const Branch& br : net.branches) {
    json jr;
    jr["from"] = br.from;
    jr["to"] = br.to;
    jr["r"] = br.r;
    jr["x"] = br.x;
    jr["b"] = br.b_charging;
    jr["tap"] = br.tap;
    jr["shift_deg"] = br.shift * 180.0 / kPi;
    jr["rate_a_mva"] = br.rate_a;
    jr["status"] = br.in_service ? 1 : 0;
    branches.push_back(jr);
  }
  root["branches"] = branches;

  return root.dump(1) + "\n";
}

void save_case(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write case file: " + path);
  out << case_to_json_text(net);
}

}  // namespace pflin
