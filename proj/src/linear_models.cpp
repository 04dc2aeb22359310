#include "pflin/linear_models.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pflin/errors.hpp"

namespace pflin {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Factor, solve, and polish with iterative refinement: residual re-solves
// until the residual infinity norm drops below 1e-11, at most two passes.
Eigen::VectorXd sparse_solve(const SparseMatrix& a, const Eigen::VectorXd& rhs,
                             const std::string& what) {
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularSystem(what + ": factorization failed");
  Eigen::VectorXd z = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !z.allFinite())
    throw SingularSystem(what + ": solve failed");
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXd residual = rhs - a * z;
    if (residual.lpNorm<Eigen::Infinity>() < 1e-11) break;
    z += lu.solve(residual);
  }
  return z;
}

int find_slack(const std::vector<BusAggregate>& agg) {
  for (std::size_t i = 0; i < agg.size(); ++i)
    if (agg[i].kind == BusKind::slack) return int(i);
  throw InvalidArgument("network has no slack bus");
}

}  // namespace

std::string to_string(LinearModel model) {
  switch (model) {
    case LinearModel::dc: return "dc";
    case LinearModel::ddc: return "ddc";
    case LinearModel::lac: return "lac";
    case LinearModel::dlac: return "dlac";
  }
  return "dc";
}

LinearModel linear_model_from_string(const std::string& name) {
  if (name == "dc") return LinearModel::dc;
  if (name == "ddc") return LinearModel::ddc;
  if (name == "lac") return LinearModel::lac;
  if (name == "dlac") return LinearModel::dlac;
  throw InvalidArgument("unknown linear model '" + name + "'");
}

LinearSolution solve_dc_family(const Network& net, double k_d) {
  const auto violations = validate(net);
  if (!violations.empty()) throw ValidationError(violations);
  if (k_d <= 0.0) throw InvalidArgument("k_d must be positive");

  const auto agg = aggregate_injections(net);
  const int n = int(net.buses.size());
  const int slack = find_slack(agg);
  // shift rejection: the angle-only model has no phase shifter either
  const auto branches = in_service_branches(net, ShiftPolicy::reject);

  std::vector<int> pos(n, -1);
  int unknowns = 0;
  for (int i = 0; i < n; ++i)
    if (i != slack) pos[i] = unknowns++;

  std::vector<Triplet> trip;
  trip.reserve(4 * branches.size());
  for (const IndexedBranch& ib : branches) {
    if (ib.x == 0.0)
      throw InvalidBranch("branch " + branch_key(net, ib.index) +
                          " has zero reactance; the angle-only model is undefined");
    const double w = k_d / (ib.x * ib.tap);
    const int pf = pos[ib.from];
    const int pt = pos[ib.to];
    if (pf >= 0) trip.emplace_back(pf, pf, w);
    if (pt >= 0) trip.emplace_back(pt, pt, w);
    if (pf >= 0 && pt >= 0) {
      trip.emplace_back(pf, pt, -w);
      trip.emplace_back(pt, pf, -w);
    }
  }
  SparseMatrix b_mat(unknowns, unknowns);
  b_mat.setFromTriplets(trip.begin(), trip.end());
  b_mat.makeCompressed();

  Eigen::VectorXd rhs(unknowns);
  for (int i = 0; i < n; ++i)
    if (pos[i] >= 0) rhs(pos[i]) = agg[i].p_net;  // shunt conductance ignored here

  Eigen::VectorXd theta(unknowns);
  if (unknowns > 0) theta = sparse_solve(b_mat, rhs, "dc system");

  LinearSolution sol;
  sol.model = k_d == 1.0 ? LinearModel::dc : LinearModel::ddc;
  sol.case_name = net.name;
  sol.vm.assign(n, 1.0);
  sol.va.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (pos[i] >= 0) sol.va[i] = theta(pos[i]);
  sol.q_balance.assign(n, kNan);

  double slack_inj = 0.0;
  for (const IndexedBranch& ib : branches) {
    const double w = k_d / (ib.x * ib.tap);
    BranchFlow flow;
    flow.branch = ib.index;
    flow.p_from = w * (sol.va[ib.from] - sol.va[ib.to]);
    flow.p_to = -flow.p_from;
    flow.q_from = kNan;
    flow.q_to = kNan;
    sol.flows.push_back(flow);
    if (ib.from == slack) slack_inj += flow.p_from;
    if (ib.to == slack) slack_inj += flow.p_to;
  }
  sol.slack_p = slack_inj;
  return sol;
}

std::vector<BranchFlow> eval_flows_lac(const Network& net, const std::vector<double>& vm,
                                       const std::vector<double>& va,
                                       const ModelCoefficients& coeffs) {
  if (vm.size() != net.buses.size() || va.size() != net.buses.size())
    throw InvalidArgument("voltage state size does not match the bus count");
  const double k1 = coeffs.k_a[0], k2 = coeffs.k_a[1], k3 = coeffs.k_a[2];
  const double k4 = coeffs.k_a[3], k5 = coeffs.k_a[4];
  std::vector<BranchFlow> flows;
  for (const IndexedBranch& ib : in_service_branches(net, ShiftPolicy::reject)) {
    const BranchPi& pi = ib.pi;
    const double vi = vm[ib.from];
    const double vj = vm[ib.to];
    const double th = va[ib.from] - va[ib.to];

    BranchFlow flow;
    flow.branch = ib.index;
    flow.p_from = -k1 * pi.b * th + k2 * pi.g * (vi - vj) + pi.g_from * (2.0 * k3 * vi - 1.0);
    flow.q_from = pi.b_from - 2.0 * k3 * vi * pi.b_from - k4 * pi.g * th - k5 * pi.b * (vi - vj);
    flow.p_to = -k1 * pi.b * (-th) + k2 * pi.g * (vj - vi) + pi.g_to * (2.0 * k3 * vj - 1.0);
    flow.q_to = pi.b_to - 2.0 * k3 * vj * pi.b_to - k4 * pi.g * (-th) - k5 * pi.b * (vj - vi);
    flows.push_back(flow);
  }
  return flows;
}

LinearSolution solve_lac_family(const Network& net, const ModelCoefficients& coeffs) {
  const auto violations = validate(net);
  if (!violations.empty()) throw ValidationError(violations);

  const auto agg = aggregate_injections(net);
  const int n = int(net.buses.size());
  const int slack = find_slack(agg);
  const auto branches = in_service_branches(net, ShiftPolicy::reject);
  const double k1 = coeffs.k_a[0], k2 = coeffs.k_a[1], k3 = coeffs.k_a[2];
  const double k4 = coeffs.k_a[3], k5 = coeffs.k_a[4];

  // unknowns: theta at non-slack buses, vm at PQ buses
  std::vector<int> th_pos(n, -1), vm_pos(n, -1);
  int unknowns = 0;
  for (int i = 0; i < n; ++i)
    if (i != slack) th_pos[i] = unknowns++;
  for (int i = 0; i < n; ++i)
    if (agg[i].kind == BusKind::pq) vm_pos[i] = unknowns++;

  std::vector<double> v_fixed(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (agg[i].kind != BusKind::pq) v_fixed[i] = agg[i].v_set;

  std::vector<Triplet> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);

  // accumulate one linear term: coefficient c on theta_j or vm_j into row,
  // moving fixed variables to the right-hand side
  auto add_theta = [&](int row, int j, double c) {
    if (row < 0) return;
    if (th_pos[j] >= 0)
      trip.emplace_back(row, th_pos[j], c);
    // slack theta is zero, nothing moves to the rhs
  };
  auto add_vm = [&](int row, int j, double c) {
    if (row < 0) return;
    if (vm_pos[j] >= 0)
      trip.emplace_back(row, vm_pos[j], c);
    else
      rhs(row) -= c * v_fixed[j];
  };
  auto add_const = [&](int row, double c) {
    if (row >= 0) rhs(row) -= c;
  };

  for (const IndexedBranch& ib : branches) {
    const BranchPi& pi = ib.pi;
    const int i = ib.from;
    const int j = ib.to;
    const int prow_i = th_pos[i];  // active balance rows are indexed by theta slots
    const int prow_j = th_pos[j];
    const int qrow_i = vm_pos[i];  // reactive balance rows by vm slots
    const int qrow_j = vm_pos[j];

    // P_ij into the balance at i
    add_theta(prow_i, i, -k1 * pi.b);
    add_theta(prow_i, j, k1 * pi.b);
    add_vm(prow_i, i, k2 * pi.g + 2.0 * k3 * pi.g_from);
    add_vm(prow_i, j, -k2 * pi.g);
    add_const(prow_i, -pi.g_from);

    // P_ji into the balance at j
    add_theta(prow_j, j, -k1 * pi.b);
    add_theta(prow_j, i, k1 * pi.b);
    add_vm(prow_j, j, k2 * pi.g + 2.0 * k3 * pi.g_to);
    add_vm(prow_j, i, -k2 * pi.g);
    add_const(prow_j, -pi.g_to);

    // Q_ij into the balance at i
    add_theta(qrow_i, i, -k4 * pi.g);
    add_theta(qrow_i, j, k4 * pi.g);
    add_vm(qrow_i, i, -2.0 * k3 * pi.b_from - k5 * pi.b);
    add_vm(qrow_i, j, k5 * pi.b);
    add_const(qrow_i, pi.b_from);

    // Q_ji into the balance at j
    add_theta(qrow_j, j, -k4 * pi.g);
    add_theta(qrow_j, i, k4 * pi.g);
    add_vm(qrow_j, j, -2.0 * k3 * pi.b_to - k5 * pi.b);
    add_vm(qrow_j, i, k5 * pi.b);
    add_const(qrow_j, pi.b_to);
  }

  // linearized bus shunts: consumption P = (2*K3*vm-1)*g, Q = -(2*K3*vm-1)*b
  for (int i = 0; i < n; ++i) {
    if (agg[i].g_shunt != 0.0) {
      add_vm(th_pos[i], i, 2.0 * k3 * agg[i].g_shunt);
      add_const(th_pos[i], -agg[i].g_shunt);
    }
    if (agg[i].b_shunt != 0.0) {
      add_vm(vm_pos[i], i, -2.0 * k3 * agg[i].b_shunt);
      add_const(vm_pos[i], agg[i].b_shunt);
    }
  }

  // scheduled injections close the balance: sum(flows) + shunt = net injection
  for (int i = 0; i < n; ++i) {
    if (th_pos[i] >= 0) rhs(th_pos[i]) += agg[i].p_net;
    if (vm_pos[i] >= 0) rhs(vm_pos[i]) += agg[i].q_net;
  }

  SparseMatrix a(unknowns, unknowns);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  Eigen::VectorXd z(unknowns);
  if (unknowns > 0) z = sparse_solve(a, rhs, "linear voltage-angle system");

  LinearSolution sol;
  const bool identity = k1 == 1.0 && k2 == 1.0 && k3 == 1.0 && k4 == 1.0 && k5 == 1.0;
  sol.model = identity ? LinearModel::lac : LinearModel::dlac;
  sol.case_name = net.name;
  sol.vm.resize(n);
  sol.va.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    sol.vm[i] = vm_pos[i] >= 0 ? z(vm_pos[i]) : v_fixed[i];
    if (th_pos[i] >= 0) sol.va[i] = z(th_pos[i]);
  }
  sol.flows = eval_flows_lac(net, sol.vm, sol.va, coeffs);

  // recover the free injections at the slack (P) and PV/slack buses (Q)
  std::vector<double> p_flow_sum(n, 0.0), q_flow_sum(n, 0.0);
  const auto index = build_bus_index(net);
  for (const BranchFlow& flow : sol.flows) {
    const Branch& br = net.branches[flow.branch];
    p_flow_sum[index.at(br.from)] += flow.p_from;
    q_flow_sum[index.at(br.from)] += flow.q_from;
    p_flow_sum[index.at(br.to)] += flow.p_to;
    q_flow_sum[index.at(br.to)] += flow.q_to;
  }
  sol.q_balance.assign(n, kNan);
  for (int i = 0; i < n; ++i) {
    const double p_sh = (2.0 * k3 * sol.vm[i] - 1.0) * agg[i].g_shunt;
    const double q_sh = -(2.0 * k3 * sol.vm[i] - 1.0) * agg[i].b_shunt;
    if (i == slack) sol.slack_p = p_flow_sum[i] + p_sh;
    if (agg[i].kind != BusKind::pq) sol.q_balance[i] = q_flow_sum[i] + q_sh;
  }
  return sol;
}

}  // namespace pflin
