#include "pflin/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pflin/errors.hpp"

namespace pflin {

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  double u1 = next_double();
  const double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // keep the log finite
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

void validate_spec(const ScenarioSpec& spec) {
  if (spec.hours < 1) throw InvalidArgument("scenario needs at least one hour");
  if (!(spec.amplitude < 1.0) || spec.amplitude < 0.0)
    throw InvalidArgument("amplitude must lie in [0, 1)");
  if (spec.noise_sd < 0.0) throw InvalidArgument("noise standard deviation must be nonnegative");
  if (!(spec.lambda_min <= 1.0 && 1.0 <= spec.lambda_max))
    throw InvalidArgument("lambda bounds must bracket 1");
}

std::vector<double> lambda_sequence(const ScenarioSpec& spec) {
  validate_spec(spec);
  SplitMix64 rng(spec.seed);
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::vector<double> lambdas;
  lambdas.reserve(std::size_t(spec.hours));
  for (int h = 1; h <= spec.hours; ++h) {
    const double noise = spec.noise_sd == 0.0 ? 0.0 : spec.noise_sd * rng.next_gaussian();
    // cosine centered on phase_hours so the peak lands on the configured hour
    const double raw =
        1.0 + spec.amplitude * std::cos(two_pi * (double(h) - spec.phase_hours) / 24.0) + noise;
    lambdas.push_back(std::clamp(raw, spec.lambda_min, spec.lambda_max));
  }
  return lambdas;
}

std::vector<HourlyCase> generate_hourly_cases(const Network& base, const ScenarioSpec& spec) {
  const auto violations = validate(base);
  if (!violations.empty()) throw ValidationError(violations);
  const std::vector<double> lambdas = lambda_sequence(spec);
  const auto index = build_bus_index(base);

  double total_load = 0.0;
  for (const Bus& bus : base.buses) total_load += bus.p_load;
  double nonslack_gen = 0.0;
  for (const Generator& gen : base.generators) {
    if (!gen.in_service) continue;
    if (base.buses[index.at(gen.bus)].kind != BusKind::slack) nonslack_gen += gen.p_gen;
  }

  std::vector<HourlyCase> hours;
  hours.reserve(lambdas.size());
  for (int h = 1; h <= spec.hours; ++h) {
    const double lambda = lambdas[std::size_t(h - 1)];
    HourlyCase hc;
    hc.hour = h;
    hc.lambda = lambda;
    hc.net = base;
    char suffix[24];
    std::snprintf(suffix, sizeof(suffix), "_hour_%03d", h);
    hc.net.name = base.name + suffix;
    for (Bus& bus : hc.net.buses) {
      bus.p_load *= lambda;
      bus.q_load *= lambda;
    }
    if (nonslack_gen > 0.0) {
      const double factor = lambda * total_load / nonslack_gen;
      for (Generator& gen : hc.net.generators)
        if (hc.net.buses[index.at(gen.bus)].kind != BusKind::slack) gen.p_gen *= factor;
    }
    hours.push_back(std::move(hc));
  }
  return hours;
}

}  // namespace pflin
