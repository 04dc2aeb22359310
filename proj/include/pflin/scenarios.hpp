#pragma once

#include <cstdint>
#include <vector>

#include "pflin/network.hpp"

namespace pflin {

// Counter-free splitmix64 stream. Chosen over std::mt19937 +
// std::normal_distribution because the standard leaves normal generation
// implementation-defined; this sequence is bit-identical everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // uniform in [0, 1) with 53 random bits
  double next_double();

  // standard normal via Box-Muller, consumes exactly two uniforms
  double next_gaussian();

 private:
  std::uint64_t state_;
};

struct ScenarioSpec {
  int hours = 72;
  double amplitude = 0.15;    // daily sinusoidal swing, fraction of base load
  double phase_hours = 18.0;  // hour of the daily peak
  double noise_sd = 0.01;     // multiplicative per-hour noise
  double lambda_min = 0.7;
  double lambda_max = 1.3;
  std::uint64_t seed = 1;
};

// throws InvalidArgument unless hours >= 1, amplitude < 1, lambda_min <= 1 <= lambda_max
void validate_spec(const ScenarioSpec& spec);

struct HourlyCase {
  int hour = 0;  // 1-based
  double lambda = 1.0;
  Network net;
};

// The scaling factor sequence, without building the cases.
std::vector<double> lambda_sequence(const ScenarioSpec& spec);

// Scales every bus load by lambda_h (power factor preserved) and non-slack
// generator setpoints so the slack picks up only losses. Voltage setpoints
// and topology are untouched.
std::vector<HourlyCase> generate_hourly_cases(const Network& base, const ScenarioSpec& spec);

}  // namespace pflin
