#include "pflin/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "pflin/errors.hpp"

namespace pflin {

SeriesAdmittance series_admittance(const Branch& branch) {
  const double denom = branch.r * branch.r + branch.x * branch.x;
  if (denom == 0.0)
    throw InvalidBranch("branch " + std::to_string(branch.from) + "-" +
                        std::to_string(branch.to) + " has zero series impedance");
  return {branch.r / denom, -branch.x / denom};
}

BranchPi pi_equivalent(const Branch& branch, ShiftPolicy policy) {
  if (policy == ShiftPolicy::reject && branch.shift != 0.0)
    throw UnsupportedPhaseShift("branch " + std::to_string(branch.from) + "-" +
                                std::to_string(branch.to) +
                                " has a phase shift; no pi equivalent exists");
  if (branch.tap <= 0.0)
    throw InvalidBranch("branch " + std::to_string(branch.from) + "-" +
                        std::to_string(branch.to) + " has non-positive tap");
  const auto [gs, bs] = series_admittance(branch);
  const double t = branch.tap;
  const double t2 = t * t;
  BranchPi pi;
  pi.g = gs / t;
  pi.b = bs / t;
  pi.g_from = gs * (1.0 - t) / t2;
  pi.b_from = bs * (1.0 - t) / t2 + branch.b_charging / 2.0 / t2;
  pi.g_to = gs * (t - 1.0) / t;
  pi.b_to = bs * (t - 1.0) / t + branch.b_charging / 2.0;
  pi.shift = branch.shift;
  return pi;
}

std::unordered_map<int, int> build_bus_index(const Network& net) {
  std::unordered_map<int, int> index;
  index.reserve(net.buses.size());
  for (std::size_t i = 0; i < net.buses.size(); ++i) index.emplace(net.buses[i].id, int(i));
  return index;
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> v;
  if (net.base_mva <= 0.0) v.push_back("base_mva must be positive");
  if (net.buses.empty()) {
    v.push_back("network has no buses");
    return v;
  }

  std::set<int> seen;
  int slack_count = 0;
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const Bus& bus = net.buses[i];
    if (!seen.insert(bus.id).second)
      v.push_back("duplicate bus id " + std::to_string(bus.id));
    if (bus.kind == BusKind::slack) ++slack_count;
    if (bus.base_kv <= 0.0)
      v.push_back("bus " + std::to_string(bus.id) + ": base_kV must be positive");
    if (bus.v_init <= 0.0)
      v.push_back("bus " + std::to_string(bus.id) + ": initial voltage must be positive");
  }
  if (slack_count != 1)
    v.push_back("network must have exactly one slack bus, found " + std::to_string(slack_count));

  const auto index = build_bus_index(net);

  struct BusGen {
    bool any = false;
    double v_set = 0.0;
    bool conflict = false;
  };
  std::unordered_map<int, BusGen> gen_at;
  for (std::size_t i = 0; i < net.generators.size(); ++i) {
    const Generator& gen = net.generators[i];
    if (!index.count(gen.bus)) {
      v.push_back("generator " + std::to_string(i + 1) + ": unknown bus " +
                  std::to_string(gen.bus));
      continue;
    }
    if (gen.q_min > gen.q_max)
      v.push_back("generator " + std::to_string(i + 1) + ": q_min exceeds q_max");
    if (gen.v_set <= 0.0)
      v.push_back("generator " + std::to_string(i + 1) + ": voltage setpoint must be positive");
    if (!gen.in_service) continue;
    BusGen& bg = gen_at[gen.bus];
    if (!bg.any) {
      bg.any = true;
      bg.v_set = gen.v_set;
    } else if (bg.v_set != gen.v_set) {
      bg.conflict = true;
    }
  }
  for (const auto& [bus_id, bg] : gen_at)
    if (bg.conflict)
      v.push_back("bus " + std::to_string(bus_id) +
                  ": in-service generators disagree on the voltage setpoint");

  for (const Bus& bus : net.buses) {
    const bool has_gen = gen_at.count(bus.id) && gen_at.at(bus.id).any;
    if (bus.kind == BusKind::slack && !has_gen)
      v.push_back("slack bus " + std::to_string(bus.id) + " has no in-service generator");
    if (bus.kind == BusKind::pv && !has_gen)
      v.push_back("PV bus " + std::to_string(bus.id) + " has no in-service generator");
  }

  for (std::size_t i = 0; i < net.branches.size(); ++i) {
    const Branch& br = net.branches[i];
    const std::string label = "branch " + std::to_string(i + 1);
    if (!index.count(br.from)) v.push_back(label + ": unknown from-bus " + std::to_string(br.from));
    if (!index.count(br.to)) v.push_back(label + ": unknown to-bus " + std::to_string(br.to));
    if (br.from == br.to) v.push_back(label + ": from and to are the same bus");
    if (br.r == 0.0 && br.x == 0.0) v.push_back(label + ": zero series impedance");
    if (br.tap <= 0.0) v.push_back(label + ": tap must be positive");
    if (br.rate_a < 0.0) v.push_back(label + ": negative thermal rating");
  }

  // connectivity over in-service branches only; every bus must be reachable
  if (slack_count == 1 && std::all_of(net.branches.begin(), net.branches.end(),
                                      [&](const Branch& br) {
                                        return index.count(br.from) && index.count(br.to);
                                      })) {
    std::vector<std::vector<int>> adj(net.buses.size());
    for (const Branch& br : net.branches) {
      if (!br.in_service) continue;
      const int a = index.at(br.from);
      const int b = index.at(br.to);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<char> reach(net.buses.size(), 0);
    std::queue<int> frontier;
    for (std::size_t i = 0; i < net.buses.size(); ++i)
      if (net.buses[i].kind == BusKind::slack) {
        frontier.push(int(i));
        reach[i] = 1;
      }
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop();
      for (int nxt : adj[cur])
        if (!reach[nxt]) {
          reach[nxt] = 1;
          frontier.push(nxt);
        }
    }
    if (std::count(reach.begin(), reach.end(), char(1)) != int(net.buses.size()))
      v.push_back("network not connected");
  }

  return v;
}

std::vector<BusAggregate> aggregate_injections(const Network& net) {
  const auto index = build_bus_index(net);
  std::vector<BusAggregate> agg(net.buses.size());
  for (std::size_t i = 0; i < net.buses.size(); ++i) {
    const Bus& bus = net.buses[i];
    agg[i].kind = bus.kind;
    agg[i].p_net = -bus.p_load;
    agg[i].q_net = -bus.q_load;
    agg[i].g_shunt = bus.g_shunt;
    agg[i].b_shunt = bus.b_shunt;
    agg[i].v_set = bus.v_init;
  }
  for (const Generator& gen : net.generators) {
    if (!gen.in_service) continue;
    auto it = index.find(gen.bus);
    if (it == index.end()) throw InvalidArgument("generator references unknown bus");
    BusAggregate& a = agg[it->second];
    a.p_net += gen.p_gen;
    a.q_net += gen.q_gen;
    if (!a.has_gen) a.v_set = gen.v_set;  // first in-service unit governs
    a.has_gen = true;
  }
  return agg;
}

std::vector<IndexedBranch> in_service_branches(const Network& net, ShiftPolicy policy) {
  const auto index = build_bus_index(net);
  std::vector<IndexedBranch> out;
  out.reserve(net.branches.size());
  for (std::size_t i = 0; i < net.branches.size(); ++i) {
    const Branch& br = net.branches[i];
    if (!br.in_service) continue;
    IndexedBranch ib;
    ib.index = int(i);
    ib.from = index.at(br.from);
    ib.to = index.at(br.to);
    ib.pi = pi_equivalent(br, policy);
    ib.x = br.x;
    ib.tap = br.tap;
    out.push_back(ib);
  }
  return out;
}

std::string branch_key(const Network& net, int branch_index) {
  const Branch& br = net.branches.at(branch_index);
  return std::to_string(br.from) + "-" + std::to_string(br.to) + "#" +
         std::to_string(branch_index + 1);
}

}  // namespace pflin
