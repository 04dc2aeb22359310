#pragma once

#include <array>
#include <string>
#include <vector>

#include "pflin/ac_solver.hpp"
#include "pflin/network.hpp"

namespace pflin {

// k_d scales the reactance-only flow model; k_a are the five multipliers of
// the coupled linear model in the order (K_A1..K_A5): active angle term,
// active voltage term, shunt voltage term, reactive angle term, reactive
// voltage term. All ones reproduces the unfitted first-order model.
struct ModelCoefficients {
  double k_d = 1.0;
  std::array<double, 5> k_a = {1.0, 1.0, 1.0, 1.0, 1.0};
  std::vector<std::string> trained_on;
  std::string fit_stats_ref;

  static ModelCoefficients identity() { return {}; }
};

enum class LinearModel { dc, ddc, lac, dlac };

std::string to_string(LinearModel model);
LinearModel linear_model_from_string(const std::string& name);

struct LinearSolution {
  LinearModel model = LinearModel::dc;
  std::string case_name;
  std::vector<double> vm;  // fixed at 1 for the dc family
  std::vector<double> va;  // radians, slack at zero
  std::vector<BranchFlow> flows;  // q entries are NaN for the dc family
  double slack_p = 0.0;    // net active injection required at the slack bus
  // net reactive injection recovered at PV and slack buses; NaN elsewhere and
  // for the dc family
  std::vector<double> q_balance;
};

// Angle-only model: P_ij = k_d * theta_ij / (x_ij * tap_ij), losses and
// reactive power dropped, voltage flat. The solve goes through the scaled
// susceptance matrix, so flows are invariant to k_d while angles scale by
// 1/k_d. k_d = 1 is the classic model; a fitted k_d is the data-driven one.
LinearSolution solve_dc_family(const Network& net, double k_d);

// Coupled linear model in (theta, vm): one sparse factorization, no iteration.
// Branch flows follow eval_flows_lac; bus shunts enter as (2*K_A3*vm-1)-scaled
// consumption. PV and slack voltages are fixed at their setpoints. Identity
// coefficients give the plain first-order model, fitted ones the data-driven
// variant. Phase shifters are unsupported here.
LinearSolution solve_lac_family(const Network& net, const ModelCoefficients& coeffs);

// Linearized branch flows at an arbitrary state:
//   P_ij = -K_A1*b*theta_ij + K_A2*g*(vi-vj) + g_from*(2*K_A3*vi - 1)
//   Q_ij = b_from - 2*K_A3*vi*b_from - K_A4*g*theta_ij - K_A5*b*(vi-vj)
// with the tap-normalized series (g, b) and total end shunts (g_from, b_from)
// of the pi model; mirrored at the to end. For tap-1, shift-0 branches at the
// flat state this matches the exact AC flows.
std::vector<BranchFlow> eval_flows_lac(const Network& net, const std::vector<double>& vm,
                                       const std::vector<double>& va,
                                       const ModelCoefficients& coeffs);

}  // namespace pflin
