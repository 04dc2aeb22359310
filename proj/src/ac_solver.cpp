#include "pflin/ac_solver.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pflin/errors.hpp"

namespace pflin {
namespace {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct YBus {
  Eigen::SparseMatrix<Complex> y;
};

// Standard two-port assembly. With tap t and shift s the from-end entries are
// divided by t^2 / t*e^{-js}, matching the pi quantities in network.hpp.
YBus build_ybus(const Network& net, const std::vector<BusAggregate>& agg,
                const std::vector<IndexedBranch>& branches) {
  const int n = int(net.buses.size());
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(4 * branches.size() + n);
  for (const IndexedBranch& ib : branches) {
    const Branch& br = net.branches[ib.index];
    const auto [gs, bs] = series_admittance(br);
    const Complex ys(gs, bs);
    const Complex ysh(0.0, br.b_charging / 2.0);
    const double t = br.tap;
    const Complex tap = std::polar(t, br.shift);
    trip.emplace_back(ib.from, ib.from, (ys + ysh) / (t * t));
    trip.emplace_back(ib.from, ib.to, -ys / std::conj(tap));
    trip.emplace_back(ib.to, ib.from, -ys / tap);
    trip.emplace_back(ib.to, ib.to, ys + ysh);
  }
  for (int i = 0; i < n; ++i)
    trip.emplace_back(i, i, Complex(agg[i].g_shunt, agg[i].b_shunt));
  YBus ybus;
  ybus.y.resize(n, n);
  ybus.y.setFromTriplets(trip.begin(), trip.end());
  ybus.y.makeCompressed();
  return ybus;
}

// Calculated net injections S_i = V_i * conj(sum_j Y_ij V_j) at a state.
void calc_injections(const Eigen::SparseMatrix<Complex>& y, const std::vector<double>& vm,
                     const std::vector<double>& va, std::vector<double>& p,
                     std::vector<double>& q) {
  const int n = int(vm.size());
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = std::polar(vm[i], va[i]);
  Eigen::VectorXcd s = v.array() * (y * v).conjugate().array();
  p.resize(n);
  q.resize(n);
  for (int i = 0; i < n; ++i) {
    p[i] = s(i).real();
    q[i] = s(i).imag();
  }
}

}  // namespace

std::vector<BranchFlow> compute_branch_flows_ac(const Network& net,
                                                const std::vector<double>& vm,
                                                const std::vector<double>& va) {
  if (vm.size() != net.buses.size() || va.size() != net.buses.size())
    throw InvalidArgument("voltage state size does not match the bus count");
  std::vector<BranchFlow> flows;
  for (const IndexedBranch& ib : in_service_branches(net, ShiftPolicy::allow)) {
    const BranchPi& pi = ib.pi;
    const double vi = vm[ib.from];
    const double vj = vm[ib.to];
    const double th_from = va[ib.from] - va[ib.to] - pi.shift;
    const double th_to = -th_from;

    BranchFlow flow;
    flow.branch = ib.index;
    flow.p_from = vi * vi * (pi.g + pi.g_from) -
                  vi * vj * (pi.g * std::cos(th_from) + pi.b * std::sin(th_from));
    flow.q_from = -vi * vi * (pi.b + pi.b_from) +
                  vi * vj * (pi.b * std::cos(th_from) - pi.g * std::sin(th_from));
    flow.p_to = vj * vj * (pi.g + pi.g_to) -
                vj * vi * (pi.g * std::cos(th_to) + pi.b * std::sin(th_to));
    flow.q_to = -vj * vj * (pi.b + pi.b_to) +
                vj * vi * (pi.b * std::cos(th_to) - pi.g * std::sin(th_to));
    flows.push_back(flow);
  }
  return flows;
}

AcSolution solve_ac(const Network& net, const AcOptions& options) {
  const auto violations = validate(net);
  if (!violations.empty()) throw ValidationError(violations);
  if (options.tol <= 0.0) throw InvalidArgument("tol must be positive");
  if (options.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");

  const auto agg = aggregate_injections(net);
  const auto branches = in_service_branches(net, ShiftPolicy::allow);
  const YBus ybus = build_ybus(net, agg, branches);
  const int n = int(net.buses.size());

  int slack = -1;
  for (int i = 0; i < n; ++i)
    if (agg[i].kind == BusKind::slack) slack = i;

  // unknown layout: theta at every non-slack bus, then vm at every PQ bus
  std::vector<int> th_pos(n, -1), vm_pos(n, -1);
  int unknowns = 0;
  for (int i = 0; i < n; ++i)
    if (i != slack) th_pos[i] = unknowns++;
  for (int i = 0; i < n; ++i)
    if (agg[i].kind == BusKind::pq) vm_pos[i] = unknowns++;

  std::vector<double> vm(n), va(n);
  for (int i = 0; i < n; ++i) {
    if (agg[i].kind == BusKind::pq) {
      vm[i] = options.flat_start ? 1.0 : net.buses[i].v_init;
    } else {
      vm[i] = agg[i].v_set;
    }
    va[i] = options.flat_start ? 0.0 : net.buses[i].a_init - net.buses[slack].a_init;
  }
  va[slack] = 0.0;

  std::vector<double> p_calc, q_calc;
  AcSolution sol;
  sol.case_name = net.name;

  auto mismatch_norm = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i != slack) m = std::max(m, std::abs(agg[i].p_net - p[i]));
      if (agg[i].kind == BusKind::pq) m = std::max(m, std::abs(agg[i].q_net - q[i]));
    }
    return m;
  };

  int iter = 0;
  while (true) {
    calc_injections(ybus.y, vm, va, p_calc, q_calc);
    const double norm = mismatch_norm(p_calc, q_calc);
    sol.mismatch_history.push_back(norm);
    if (!std::isfinite(norm)) throw Divergence(iter, norm);
    if (norm < options.tol) {
      sol.max_mismatch = norm;
      break;
    }
    if (iter >= options.max_iter) throw Divergence(iter, norm);

    // polar Jacobian of the calculated injections
    std::vector<Triplet> trip;
    trip.reserve(8 * branches.size() + 2 * size_t(n));
    Eigen::VectorXd rhs(unknowns);
    for (int i = 0; i < n; ++i) {
      if (th_pos[i] >= 0) rhs(th_pos[i]) = agg[i].p_net - p_calc[i];
      if (vm_pos[i] >= 0) rhs(vm_pos[i]) = agg[i].q_net - q_calc[i];
    }
    for (int col = 0; col < ybus.y.outerSize(); ++col) {
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(ybus.y, col); it; ++it) {
        const int i = int(it.row());
        const int j = int(it.col());
        const double gij = it.value().real();
        const double bij = it.value().imag();
        if (i == j) {
          const double vi = vm[i];
          if (th_pos[i] >= 0) {
            trip.emplace_back(th_pos[i], th_pos[i], -q_calc[i] - bij * vi * vi);
            if (vm_pos[i] >= 0)
              trip.emplace_back(th_pos[i], vm_pos[i], p_calc[i] / vi + gij * vi);
          }
          if (vm_pos[i] >= 0) {
            trip.emplace_back(vm_pos[i], th_pos[i], p_calc[i] - gij * vi * vi);
            trip.emplace_back(vm_pos[i], vm_pos[i], q_calc[i] / vi - bij * vi);
          }
        } else {
          const double vi = vm[i];
          const double vj = vm[j];
          const double th = va[i] - va[j];
          const double c = std::cos(th);
          const double s = std::sin(th);
          const double dp_dth = vi * vj * (gij * s - bij * c);
          const double dp_dv = vi * (gij * c + bij * s);
          const double dq_dth = -vi * vj * (gij * c + bij * s);
          const double dq_dv = vi * (gij * s - bij * c);
          if (th_pos[i] >= 0) {
            if (th_pos[j] >= 0) trip.emplace_back(th_pos[i], th_pos[j], dp_dth);
            if (vm_pos[j] >= 0) trip.emplace_back(th_pos[i], vm_pos[j], dp_dv);
          }
          if (vm_pos[i] >= 0) {
            if (th_pos[j] >= 0) trip.emplace_back(vm_pos[i], th_pos[j], dq_dth);
            if (vm_pos[j] >= 0) trip.emplace_back(vm_pos[i], vm_pos[j], dq_dv);
          }
        }
      }
    }
    SparseMatrix jac(unknowns, unknowns);
    jac.setFromTriplets(trip.begin(), trip.end());
    jac.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success) throw SingularJacobian(iter);
    const Eigen::VectorXd step = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !step.allFinite()) throw SingularJacobian(iter);

    for (int i = 0; i < n; ++i) {
      if (th_pos[i] >= 0) va[i] += step(th_pos[i]);
      if (vm_pos[i] >= 0) vm[i] += step(vm_pos[i]);
    }
    ++iter;
  }

  sol.vm = std::move(vm);
  sol.va = std::move(va);
  sol.iterations = iter;
  sol.p_inj = p_calc;
  sol.q_inj = q_calc;
  sol.flows = compute_branch_flows_ac(net, sol.vm, sol.va);
  return sol;
}

}  // namespace pflin
