#pragma once

#include <string>
#include <vector>

#include "pflin/network.hpp"

namespace pflin {

struct AcOptions {
  double tol = 1e-8;    // infinity norm of the per-unit mismatch vector
  int max_iter = 30;
  bool flat_start = true;  // false: start from the case vm/va
};

// Directional per-unit flows of one branch; branch is the position in
// Network::branches. For the linear family q_from/q_to may be NaN.
struct BranchFlow {
  int branch = 0;
  double p_from = 0.0;
  double q_from = 0.0;
  double p_to = 0.0;
  double q_to = 0.0;
};

struct AcSolution {
  std::string case_name;
  std::vector<double> vm;     // per-unit, bus order
  std::vector<double> va;     // radians, slack pinned to zero
  std::vector<double> p_inj;  // net injection (generation minus load) at the solution
  std::vector<double> q_inj;
  std::vector<BranchFlow> flows;  // in-service branches, case order
  int iterations = 0;
  double max_mismatch = 0.0;           // recomputed from vm/va, not from the last step
  std::vector<double> mismatch_history;  // mismatch before each Newton step, then final
};

// Full Newton-Raphson in polar coordinates with an analytic Jacobian and a
// sparse factorization per iteration. PV buses hold vm at the setpoint, the
// slack holds vm and va; convergence is certified by recomputing the mismatch
// from the state. Throws Divergence or SingularJacobian.
AcSolution solve_ac(const Network& net, const AcOptions& options = {});

// Exact branch flows for an arbitrary voltage state, tap normalization and
// phase shifts included. vm/va are indexed like net.buses.
std::vector<BranchFlow> compute_branch_flows_ac(const Network& net,
                                                const std::vector<double>& vm,
                                                const std::vector<double>& va);

}  // namespace pflin
