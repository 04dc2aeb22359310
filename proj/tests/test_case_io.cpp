#include <doctest.h>

#include <cmath>

#include "pflin/case_io.hpp"
#include "pflin/errors.hpp"
#include "pflin/io.hpp"

#include "synth_cases.hpp"

using namespace pflin;

namespace {

const char* kMinimalCase = R"({
 "base_mva": 100,
 "buses": [
  {"id": 1, "kind": "slack", "base_kv": 345},
  {"id": 2, "p_load_mw": 90, "q_load_mvar": 30, "base_kv": 345},
  {"id": 3, "p_load_mw": 20, "bs_mvar": 5, "base_kv": 138}
 ],
 "generators": [
  {"bus": 1, "v_set": 1.04},
  {"bus": 3, "pg_mw": 50, "v_set": 1.02}
 ],
 "branches": [
  {"from": 1, "to": 2, "r": 0.01, "x": 0.1, "b": 0.05},
  {"from": 2, "to": 3, "x": 0.2, "tap": 0.98}
 ]
})";

std::string data_path(const char* name) {
  return std::string(PFLIN_SOURCE_DIR) + "/tests/data/" + name;
}

}  // namespace

TEST_CASE("native parse fills fields, converts units, infers PV") {
  const Network net = parse_case(kMinimalCase, CaseFormat::native, "minimal");
  REQUIRE(net.buses.size() == 3);
  CHECK(net.base_mva == 100.0);
  CHECK(net.buses[0].kind == BusKind::slack);
  CHECK(net.buses[1].kind == BusKind::pq);
  CHECK(net.buses[2].kind == BusKind::pv);  // inferred from its in-service generator
  CHECK(net.buses[1].p_load == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(net.buses[1].q_load == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(net.buses[2].b_shunt == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(net.generators[1].p_gen == doctest::Approx(0.5).epsilon(1e-15));
  // defaults: wide reactive limits in per-unit
  CHECK(net.generators[0].q_min == doctest::Approx(-1e4));
  CHECK(net.generators[0].q_max == doctest::Approx(1e4));
  CHECK(net.branches[1].tap == doctest::Approx(0.98));
  CHECK(net.branches[0].b_charging == doctest::Approx(0.05));
}

TEST_CASE("native parse rejects unknown keys at every level") {
  auto broken = [&](const std::string& needle, const std::string& replacement) {
    std::string text = kMinimalCase;
    const auto at = text.find(needle);
    REQUIRE(at != std::string::npos);
    text.replace(at, needle.size(), replacement);
    return text;
  };
  CHECK_THROWS_AS(parse_case(broken("\"base_mva\"", "\"Base_MVA\""), CaseFormat::native, "x"),
                  ParseError);
  CHECK_THROWS_AS(parse_case(broken("\"p_load_mw\": 90", "\"p_mw\": 90"), CaseFormat::native, "x"),
                  ParseError);
  CHECK_THROWS_AS(parse_case(broken("\"pg_mw\": 50", "\"p_mw\": 50"), CaseFormat::native, "x"),
                  ParseError);
  CHECK_THROWS_AS(parse_case(broken("\"tap\": 0.98", "\"ratio\": 0.98"), CaseFormat::native, "x"),
                  ParseError);
}

TEST_CASE("native parse validates the result") {
  // legal JSON, broken network: nothing marks the slack
  const char* no_slack = R"({
   "base_mva": 100,
   "buses": [{"id": 1, "base_kv": 100}, {"id": 2, "base_kv": 100}],
   "generators": [{"bus": 1, "v_set": 1.0}],
   "branches": [{"from": 1, "to": 2, "x": 0.1}]
  })";
  CHECK_THROWS_AS(parse_case(no_slack, CaseFormat::native, "x"), ValidationError);
}

TEST_CASE("save and load round-trip") {
  const Network net = parse_case(kMinimalCase, CaseFormat::native, "minimal");
  const std::string text = case_to_json_text(net);
  const Network back = parse_case(text, CaseFormat::native, "minimal");

  REQUIRE(back.buses.size() == net.buses.size());
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    CHECK(back.buses[i].id == net.buses[i].id);
    CHECK(back.buses[i].kind == net.buses[i].kind);
    CHECK(back.buses[i].p_load == doctest::Approx(net.buses[i].p_load).epsilon(1e-14));
    CHECK(back.buses[i].b_shunt == doctest::Approx(net.buses[i].b_shunt).epsilon(1e-14));
    CHECK(back.buses[i].base_kv == net.buses[i].base_kv);
  }
  for (std::size_t i = 0; i < net.branches.size(); ++i) {
    CHECK(back.branches[i].r == net.branches[i].r);
    CHECK(back.branches[i].x == net.branches[i].x);
    CHECK(back.branches[i].tap == net.branches[i].tap);
  }
  // serialization is a fixed point after one trip
  CHECK(case_to_json_text(back) == text);
}

TEST_CASE("matpower import reads the published 9-bus data") {
  const Network net = load_case(data_path("case9.m"), CaseFormat::matpower);
  REQUIRE(net.buses.size() == 9);
  REQUIRE(net.branches.size() == 9);
  REQUIRE(net.generators.size() == 3);
  CHECK(net.base_mva == 100.0);
  CHECK(net.buses[0].kind == BusKind::slack);
  CHECK(net.buses[4].p_load == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(net.buses[4].q_load == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(net.buses[0].base_kv == doctest::Approx(345.0));
  CHECK(net.branches[0].x == doctest::Approx(0.0576).epsilon(1e-15));
  CHECK(net.branches[0].tap == 1.0);  // TAP column 0 means nominal
  CHECK(net.branches[0].rate_a == doctest::Approx(250.0).epsilon(1e-15));  // stays in MVA
  CHECK(net.generators[1].p_gen == doctest::Approx(1.63).epsilon(1e-15));
  CHECK(net.generators[1].v_set == doctest::Approx(1.0));
  CHECK(net.generators[1].q_max == doctest::Approx(3.0));
}

TEST_CASE("matpower import handles taps, shunts and zero base kV") {
  const Network net = load_case(data_path("case14.m"), CaseFormat::matpower);
  REQUIRE(net.buses.size() == 14);
  REQUIRE(net.branches.size() == 20);
  CHECK(net.branches[7].tap == doctest::Approx(0.978));
  CHECK(net.branches[8].tap == doctest::Approx(0.969));
  CHECK(net.branches[9].tap == doctest::Approx(0.932));
  CHECK(net.buses[8].b_shunt == doctest::Approx(0.19).epsilon(1e-15));  // 19 MVAr at 100 MVA
  CHECK(net.buses[0].base_kv == doctest::Approx(100.0));  // 0 in the file -> default
  CHECK(net.buses[0].v_init == doctest::Approx(1.06));
}

TEST_CASE("matpower import rejects the unsupported and the malformed") {
  const char* isolated = R"(
mpc.baseMVA = 100;
mpc.bus = [
 1 3 0 0 0 0 1 1 0 345 1 1.1 0.9;
 2 4 0 0 0 0 1 1 0 345 1 1.1 0.9;
];
mpc.gen = [ 1 0 0 300 -300 1 100 1 250 10; ];
mpc.branch = [ 1 2 0 0.1 0 0 0 0 0 0 1 -360 360; ];
)";
  CHECK_THROWS_AS(parse_case(isolated, CaseFormat::matpower, "x"), ParseError);

  const char* short_row = R"(
mpc.baseMVA = 100;
mpc.bus = [
 1 3 0 0;
];
mpc.gen = [];
mpc.branch = [];
)";
  CHECK_THROWS_WITH_AS(parse_case(short_row, CaseFormat::matpower, "x"),
                       doctest::Contains("line"), ParseError);
}

TEST_CASE("bundled cases regenerate byte-identically from their sources") {
  const std::string repo = PFLIN_SOURCE_DIR;
  CHECK(read_text_file(repo + "/cases/synth57.json") ==
        case_to_json_text(pflin::testsupport::synth57()));
  CHECK(read_text_file(repo + "/cases/synth300.json") ==
        case_to_json_text(pflin::testsupport::synth300()));
  CHECK(read_text_file(repo + "/cases/case9.json") ==
        case_to_json_text(load_case(data_path("case9.m"), CaseFormat::matpower)));
  CHECK(read_text_file(repo + "/cases/case14.json") ==
        case_to_json_text(load_case(data_path("case14.m"), CaseFormat::matpower)));
}
