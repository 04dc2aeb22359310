#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace pflin {

enum class BusKind { slack, pv, pq };

// All electrical quantities are per-unit on the system MVA base; angles are
// radians. Physical units (MW, MVAr, kV) exist only at the file boundary.
struct Bus {
  int id = 0;
  BusKind kind = BusKind::pq;
  double p_load = 0.0;
  double q_load = 0.0;
  double g_shunt = 0.0;  // shunt admittance consuming V^2*g at the bus
  double b_shunt = 0.0;  // positive = capacitive (injects reactive power)
  double base_kv = 100.0;
  double v_init = 1.0;
  double a_init = 0.0;
};

struct Generator {
  int bus = 0;
  double p_gen = 0.0;
  double q_gen = 0.0;
  double v_set = 1.0;
  double q_min = -1e4;
  double q_max = 1e4;
  bool in_service = true;
};

struct Branch {
  int from = 0;
  int to = 0;
  double r = 0.0;
  double x = 0.0;
  double b_charging = 0.0;  // total line charging susceptance
  double tap = 1.0;         // off-nominal ratio at the from end, 1 = none
  double shift = 0.0;       // phase shift in radians at the from end
  double rate_a = 0.0;      // thermal rating in MVA, 0 = unlimited
  bool in_service = true;
};

struct Network {
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;  // ascending id once loaded
  std::vector<Generator> generators;
  std::vector<Branch> branches;
};

struct SeriesAdmittance {
  double g = 0.0;
  double b = 0.0;
};

// g = r/(r^2+x^2), b = -x/(r^2+x^2). Zero-impedance branches are rejected.
SeriesAdmittance series_admittance(const Branch& branch);

// Whether a caller can consume a phase-shifting two-port. Linear models cannot:
// a shifted branch has no pi equivalent and the flow equations below assume one.
enum class ShiftPolicy { reject, allow };

// Pi model of a branch normalized for the off-nominal tap. End shunts include
// the tap-scaled halves of the line charging, so the from-side two-port entries
// are exactly (g+g_from) + j(b+b_from) / -(g+jb) and analogously at the to end.
struct BranchPi {
  double g = 0.0;       // series, after dividing by tap
  double b = 0.0;
  double g_from = 0.0;  // from-end shunt: y*(1-t)/t^2 + j*b_charging/2/t^2
  double b_from = 0.0;
  double g_to = 0.0;    // to-end shunt: y*(t-1)/t + j*b_charging/2
  double b_to = 0.0;
  double shift = 0.0;   // carried through for AC callers
};

BranchPi pi_equivalent(const Branch& branch, ShiftPolicy policy);

// Structural checks; each violation is one human-readable string and an empty
// result means the network is solvable. Checks: exactly one slack bus carrying
// an in-service generator, unique ascending ids, resolvable generator/branch
// endpoints, from != to, nonzero impedance, tap > 0, base_kV > 0, v levels > 0,
// q_min <= q_max, PV buses backed by an in-service generator, agreeing voltage
// setpoints per bus, and in-service connectivity.
std::vector<std::string> validate(const Network& net);

std::unordered_map<int, int> build_bus_index(const Network& net);

// Per-bus aggregate the solvers consume: net scheduled injection (generation
// minus load), shunt admittance, and the governing voltage setpoint.
struct BusAggregate {
  BusKind kind = BusKind::pq;
  double p_net = 0.0;
  double q_net = 0.0;
  double g_shunt = 0.0;
  double b_shunt = 0.0;
  double v_set = 1.0;  // v_init when the bus has no in-service generator
  bool has_gen = false;
};

std::vector<BusAggregate> aggregate_injections(const Network& net);

// In-service branches with resolved endpoint indices and cached pi models.
struct IndexedBranch {
  int index = 0;  // position in net.branches
  int from = 0;   // bus indices, not ids
  int to = 0;
  BranchPi pi;
  double x = 0.0;
  double tap = 1.0;
};

std::vector<IndexedBranch> in_service_branches(const Network& net, ShiftPolicy policy);

// "4-9#7": endpoints by external id plus the branch position, unique per row.
std::string branch_key(const Network& net, int branch_index);

}  // namespace pflin
