#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "pflin/errors.hpp"
#include "pflin/network.hpp"
#include "pflin/scenarios.hpp"
#include "synth_cases.hpp"

using namespace pflin;
using namespace pflin::testsupport;

TEST_CASE("random stream matches the published splitmix64 vectors") {
  SplitMix64 rng(0);
  CHECK(rng.next_u64() == 0xe220a8397b1dcdafull);
  CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ull);
  CHECK(rng.next_u64() == 0x06c45d188009454full);
  SplitMix64 one(1);
  CHECK(one.next_u64() == 0x910a2dec89025cc1ull);

  SplitMix64 d(42);
  CHECK(d.next_double() == 0.7415648787718233);
  SplitMix64 d2(42);
  const double u = d2.next_double();
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("gaussian draws consume exactly two uniforms") {
  SplitMix64 a(123), b(123);
  (void)a.next_gaussian();
  (void)b.next_u64();
  (void)b.next_u64();
  CHECK(a.next_u64() == b.next_u64());

  // sanity on the shape: mean near zero, spread near one
  SplitMix64 g(7);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = g.next_gaussian();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sumsq / n - 1.0) < 0.05);
}

TEST_CASE("scenario specs are validated") {
  ScenarioSpec spec;
  CHECK_NOTHROW(validate_spec(spec));  // defaults are valid
  CHECK(spec.hours == 72);
  CHECK(spec.amplitude == 0.15);
  CHECK(spec.phase_hours == 18.0);
  CHECK(spec.noise_sd == 0.01);
  CHECK(spec.lambda_min == 0.7);
  CHECK(spec.lambda_max == 1.3);
  CHECK(spec.seed == 1);

  spec.hours = 0;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = {};
  spec.amplitude = 1.0;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = {};
  spec.amplitude = -0.1;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = {};
  spec.noise_sd = -1e-9;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = {};
  spec.lambda_min = 1.05;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
  spec = {};
  spec.lambda_max = 0.95;
  CHECK_THROWS_AS(validate_spec(spec), InvalidArgument);
}

TEST_CASE("scaling sequence is deterministic, bounded and daily-shaped") {
  ScenarioSpec spec;
  const auto a = lambda_sequence(spec);
  const auto b = lambda_sequence(spec);
  REQUIRE(a.size() == 72);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);  // bit-identical

  for (double l : a) {
    CHECK(l >= spec.lambda_min);
    CHECK(l <= spec.lambda_max);
  }

  ScenarioSpec other = spec;
  other.seed = 2;
  const auto c = lambda_sequence(other);
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != c[i]) ++differing;
  CHECK(differing > 60);  // a new seed reshuffles the noise

  // hour-to-hour steps stay within the sine slope plus a generous noise margin
  const double bound = spec.amplitude * 2.0 * 3.14159265358979 / 24.0 + 4.0 * spec.noise_sd;
  int smooth = 0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (std::abs(a[i + 1] - a[i]) <= bound) ++smooth;
  CHECK(smooth >= 70);  // 71 gaps, allow one 4-sigma outlier

  // noiseless profile is the pure clipped sine, peaking at the phase hour
  ScenarioSpec pure = spec;
  pure.noise_sd = 0.0;
  const auto p = lambda_sequence(pure);
  for (int h = 1; h <= pure.hours; ++h) {
    const double expect =
        1.0 + pure.amplitude * std::cos(2.0 * 3.141592653589793238462643383279502884 *
                                        (double(h) - pure.phase_hours) / 24.0);
    CHECK(std::abs(p[std::size_t(h - 1)] - expect) < 1e-15);
  }
  CHECK(p[17] == 1.0 + pure.amplitude);  // hour 18 hits the configured peak

  ScenarioSpec flat = spec;
  flat.amplitude = 0.0;
  flat.noise_sd = 0.0;
  for (double l : lambda_sequence(flat)) CHECK(l == 1.0);
}

TEST_CASE("hourly cases scale loads and dispatch, never topology") {
  const Network base = synth57();
  ScenarioSpec spec;
  spec.hours = 5;
  const auto hours = generate_hourly_cases(base, spec);
  const auto lambdas = lambda_sequence(spec);
  REQUIRE(hours.size() == 5);

  double total_load = 0.0;
  for (const Bus& bus : base.buses) total_load += bus.p_load;
  const auto index = build_bus_index(base);
  double nonslack_gen = 0.0;
  for (const Generator& gen : base.generators)
    if (gen.in_service && base.buses.at(index.at(gen.bus)).kind != BusKind::slack)
      nonslack_gen += gen.p_gen;
  REQUIRE(nonslack_gen > 0.0);

  for (std::size_t h = 0; h < hours.size(); ++h) {
    const HourlyCase& hc = hours[h];
    CHECK(hc.hour == int(h) + 1);
    CHECK(hc.lambda == lambdas[h]);

    // exact per-bus scaling, topology untouched
    REQUIRE(hc.net.buses.size() == base.buses.size());
    REQUIRE(hc.net.branches.size() == base.branches.size());
    for (std::size_t i = 0; i < base.buses.size(); ++i) {
      CHECK(hc.net.buses[i].p_load == base.buses[i].p_load * hc.lambda);
      CHECK(hc.net.buses[i].q_load == base.buses[i].q_load * hc.lambda);
      CHECK(hc.net.buses[i].b_shunt == base.buses[i].b_shunt);
      CHECK(hc.net.buses[i].base_kv == base.buses[i].base_kv);
    }
    for (std::size_t b = 0; b < base.branches.size(); ++b) {
      CHECK(hc.net.branches[b].x == base.branches[b].x);
      CHECK(hc.net.branches[b].tap == base.branches[b].tap);
    }

    // non-slack dispatch follows lambda * total-load / committed-generation
    const double factor = hc.lambda * total_load / nonslack_gen;
    for (std::size_t g = 0; g < base.generators.size(); ++g) {
      const Generator& before = base.generators[g];
      const Generator& after = hc.net.generators[g];
      CHECK(after.v_set == before.v_set);
      if (base.buses.at(index.at(before.bus)).kind == BusKind::slack)
        CHECK(after.p_gen == before.p_gen);
      else if (before.in_service)
        CHECK(after.p_gen == before.p_gen * factor);
    }
  }

  CHECK(hours[0].net.name == base.name + "_hour_001");
  CHECK(hours[4].net.name == base.name + "_hour_005");

  // the same spec reproduces the same cases bit for bit
  const auto again = generate_hourly_cases(base, spec);
  for (std::size_t h = 0; h < hours.size(); ++h) {
    CHECK(again[h].lambda == hours[h].lambda);
    for (std::size_t i = 0; i < base.buses.size(); ++i)
      CHECK(again[h].net.buses[i].p_load == hours[h].net.buses[i].p_load);
  }

  Network broken = base;
  broken.generators.clear();  // no slack setpoint -> invalid
  CHECK_THROWS_AS(generate_hourly_cases(broken, spec), ValidationError);
}
