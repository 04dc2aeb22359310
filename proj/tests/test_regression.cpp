#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "pflin/errors.hpp"
#include "pflin/linear_models.hpp"
#include "pflin/network.hpp"
#include "pflin/regression.hpp"

namespace {

using namespace pflin;
using nlohmann::json;

const std::string kOraclePath =
    std::string(PFLIN_SOURCE_DIR) + "/tests/oracle/regression_reference.json";

json load_oracle() {
  std::ifstream in(kOraclePath);
  REQUIRE(in.good());
  json data;
  in >> data;
  return data;
}

DesignMatrix oracle_design(const json& data) {
  DesignMatrix design;
  const auto& x = data.at("x");
  const auto& y = data.at("y");
  design.x.resize(Eigen::Index(x.size()), 2);
  design.y.resize(Eigen::Index(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    design.x(Eigen::Index(i), 0) = x[i][0].get<double>();
    design.x(Eigen::Index(i), 1) = x[i][1].get<double>();
    design.y(Eigen::Index(i)) = y[i].get<double>();
  }
  design.column_names = {"x1", "x2"};
  return design;
}

// Ring of nominal-tap branches with line charging, enough variety for a
// well-conditioned fit of every coefficient.
Network training_ring() {
  Network net;
  net.name = "train";
  net.base_mva = 100.0;
  const int n = 8;
  for (int i = 1; i <= n; ++i) {
    Bus bus;
    bus.id = i;
    bus.kind = i == 1 ? BusKind::slack : BusKind::pq;
    bus.p_load = i == 1 ? 0.0 : 0.2 + 0.05 * i;
    bus.q_load = 0.05 * i;
    bus.base_kv = 138.0;
    net.buses.push_back(bus);
  }
  auto add = [&](int f, int t, double r, double x, double b) {
    Branch br;
    br.from = f;
    br.to = t;
    br.r = r;
    br.x = x;
    br.b_charging = b;
    net.branches.push_back(br);
  };
  for (int i = 1; i <= n; ++i)
    add(i, i % n + 1, 0.008 + 0.001 * i, 0.05 + 0.01 * i, 0.03 + 0.01 * i);
  add(1, 4, 0.02, 0.09, 0.08);
  add(2, 6, 0.015, 0.11, 0.06);
  Generator gen;
  gen.bus = 1;
  gen.v_set = 1.02;
  net.generators.push_back(gen);
  return net;
}

// Synthetic training records whose flows obey the linearized model exactly;
// fitting them must give the generating coefficients back.
std::vector<AcSolution> linear_states(const Network& net, const ModelCoefficients& truth,
                                      int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dv(0.96, 1.04);
  std::uniform_real_distribution<double> da(-0.15, 0.15);
  std::vector<AcSolution> sols;
  for (int s = 0; s < count; ++s) {
    AcSolution sol;
    sol.case_name = "state_" + std::to_string(s);
    sol.vm.resize(net.buses.size());
    sol.va.resize(net.buses.size());
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
      sol.vm[i] = dv(rng);
      sol.va[i] = i == 0 ? 0.0 : da(rng);
    }
    sol.flows = eval_flows_lac(net, sol.vm, sol.va, truth);
    sols.push_back(std::move(sol));
  }
  return sols;
}

}  // namespace

TEST_CASE("ordinary least squares recovers an exact proportionality") {
  DesignMatrix design;
  design.x.resize(3, 1);
  design.x << 1.0, 2.0, 3.0;
  design.y.resize(3);
  design.y << 1.4, 2.8, 4.2;
  design.column_names = {"slope"};
  const FitResult fit = ols_fit(design);
  CHECK(std::abs(fit.beta(0) - 1.4) < 1e-15);
  CHECK(fit.ss_res < 1e-28);
  CHECK(fit.r2_uncentered == 1.0);
  CHECK(fit.n == 3);
  CHECK(fit.k == 1);
  CHECK_FALSE(fit.vif.has_value());
  // hat diagonal of a rank-1 projector sums to one
  CHECK(std::abs(fit.hat_diag.sum() - 1.0) < 1e-12);
}

TEST_CASE("reference corpus reproduces the frozen statistics") {
  const json data = load_oracle();
  const DesignMatrix design = oracle_design(data);
  const FitResult fit = ols_fit(design);
  const auto vec = [&](const char* key) { return data.at(key).get<std::vector<double>>(); };

  const auto beta = vec("beta");
  const auto stderr_ref = vec("stderr");
  const auto ci_lo = vec("ci95_lo");
  const auto ci_hi = vec("ci95_hi");
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(fit.beta(j) - beta[std::size_t(j)]) < 1e-10);
    CHECK(std::abs(fit.std_err(j) - stderr_ref[std::size_t(j)]) < 1e-10);
    CHECK(std::abs(fit.ci_lo(j) - ci_lo[std::size_t(j)]) < 1e-10);
    CHECK(std::abs(fit.ci_hi(j) - ci_hi[std::size_t(j)]) < 1e-10);
  }
  CHECK(std::abs(fit.ss_res - data.at("ss_res").get<double>()) < 1e-10);
  CHECK(std::abs(fit.ms_res - data.at("ms_res").get<double>()) < 1e-10);
  CHECK(std::abs(fit.r2_centered - data.at("r2_centered").get<double>()) < 1e-12);
  CHECK(std::abs(fit.r2_uncentered - data.at("r2_uncentered").get<double>()) < 1e-12);

  const auto residuals = vec("residuals");
  const auto standardized = vec("standardized");
  const auto rstudent = vec("rstudent");
  const auto hat = vec("hat_diag");
  for (int i = 0; i < fit.n; ++i) {
    CHECK(std::abs(fit.residuals(i) - residuals[std::size_t(i)]) < 1e-10);
    CHECK(std::abs(fit.standardized(i) - standardized[std::size_t(i)]) < 1e-10);
    CHECK(std::abs(fit.rstudent(i) - rstudent[std::size_t(i)]) < 1e-10);
    CHECK(std::abs(fit.hat_diag(i) - hat[std::size_t(i)]) < 1e-12);
  }
  CHECK(fit.undefined_rstudent_rows.empty());

  REQUIRE(fit.vif.has_value());
  const auto vif_ref = vec("vif");
  CHECK(std::abs((*fit.vif)[0] - vif_ref[0]) < 1e-12);
  CHECK(std::abs((*fit.vif)[1] - vif_ref[1]) < 1e-12);

  // sequential decomposition, term rows then the residual row
  REQUIRE(fit.anova.size() == 3);
  const auto& anova_ref = data.at("anova");
  for (std::size_t j = 0; j < 2; ++j) {
    const AnovaRow& row = fit.anova[j];
    CHECK(row.term == anova_ref[j].at("term").get<std::string>());
    CHECK(row.df == anova_ref[j].at("df").get<int>());
    CHECK(std::abs(row.ss - anova_ref[j].at("ss").get<double>()) < 1e-9);
    CHECK(std::abs(row.f - anova_ref[j].at("f").get<double>()) < 1e-6);
    const double pr_ref = anova_ref[j].at("pr").get<double>();
    CHECK(std::abs(row.pr - pr_ref) < 1e-9 * std::max(1.0, std::abs(pr_ref)));
    CHECK(std::abs(row.pr - pr_ref) <= 1e-6 * pr_ref + 1e-300);
  }
  CHECK(fit.anova[2].term == "Residuals");
  CHECK(fit.anova[2].df == data.at("residual_df").get<int>());
  CHECK(std::abs(fit.anova[2].ss - data.at("ss_res").get<double>()) < 1e-10);
  CHECK(std::isnan(fit.anova[2].f));
  CHECK(std::isnan(fit.anova[2].pr));

  // structural identities of least squares
  CHECK(std::abs((design.x.transpose() * fit.residuals)(0)) < 1e-10);
  CHECK(std::abs((design.x.transpose() * fit.residuals)(1)) < 1e-10);
  CHECK(std::abs(fit.hat_diag.sum() - 2.0) < 1e-12);
}

TEST_CASE("variance inflation has a closed form for a planted correlation") {
  // two unit-variance columns with correlation 0.6 give VIF = 1/(1-0.36)
  Eigen::MatrixXd x(8, 2);
  for (int i = 0; i < 8; ++i) {
    const double x1 = i % 2 == 0 ? 1.0 : -1.0;
    const double z = (i / 2) % 2 == 0 ? 1.0 : -1.0;
    x(i, 0) = x1;
    x(i, 1) = 0.6 * x1 + 0.8 * z;
  }
  const auto vif = variance_inflation_factors(x);
  CHECK(std::abs(vif[0] - 1.5625) < 1e-12);
  CHECK(std::abs(vif[1] - 1.5625) < 1e-12);

  CHECK_THROWS_AS(variance_inflation_factors(Eigen::MatrixXd::Ones(5, 1)), NotApplicable);

  Eigen::MatrixXd collinear(6, 2);
  for (int i = 0; i < 6; ++i) {
    collinear(i, 0) = double(i + 1);
    collinear(i, 1) = 2.0 * double(i + 1);
  }
  const auto inf_vif = variance_inflation_factors(collinear);
  CHECK(std::isinf(inf_vif[0]));
  CHECK(std::isinf(inf_vif[1]));
}

TEST_CASE("a point that fixes its own fit has no studentized residual") {
  DesignMatrix design;
  design.x.resize(3, 1);
  design.x << 1.0, 0.0, 0.0;
  design.y.resize(3);
  design.y << 2.0, 1.0, -1.0;
  design.column_names = {"c"};
  const FitResult fit = ols_fit(design);
  CHECK(std::abs(fit.hat_diag(0) - 1.0) < 1e-14);
  CHECK(std::isnan(fit.rstudent(0)));
  REQUIRE(fit.undefined_rstudent_rows.size() == 1);
  CHECK(fit.undefined_rstudent_rows[0] == 0);
  CHECK(std::isfinite(fit.rstudent(1)));
  CHECK(std::isfinite(fit.rstudent(2)));
}

TEST_CASE("degenerate designs are rejected with specific errors") {
  DesignMatrix design;
  design.x.resize(2, 2);
  design.x << 1.0, 2.0, 3.0, 4.0;
  design.y.resize(2);
  design.y << 1.0, 2.0;
  CHECK_THROWS_AS(ols_fit(design), InvalidArgument);  // n <= k

  design.x.resize(4, 2);  // n < 3k
  design.x << 1, 2, 3, 4, 5, 6, 7, 8;
  design.y.resize(4);
  design.y << 1, 2, 3, 4;
  CHECK_THROWS_AS(ols_fit(design), InvalidArgument);

  DesignMatrix dup;
  dup.x.resize(8, 2);
  for (int i = 0; i < 8; ++i) {
    dup.x(i, 0) = double(i + 1);
    dup.x(i, 1) = 3.0 * double(i + 1);
  }
  dup.y = Eigen::VectorXd::LinSpaced(8, 1.0, 8.0);
  dup.column_names = {"a", "b"};
  bool threw = false;
  try {
    ols_fit(dup);
  } catch (const RankDeficient& e) {
    threw = true;
    CHECK(std::string(e.what()).find("dependent") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("single-regressor anova squares the t statistic") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0.0, 0.4);
  DesignMatrix design;
  design.x.resize(12, 1);
  design.y.resize(12);
  for (int i = 0; i < 12; ++i) {
    design.x(i, 0) = 0.5 * (i + 1);
    design.y(i) = 2.0 * design.x(i, 0) + noise(rng);
  }
  const FitResult fit = ols_fit(design);
  const double t = fit.beta(0) / fit.std_err(0);
  CHECK(std::abs(fit.anova[0].f - t * t) < 1e-10 * std::abs(t * t));
}

TEST_CASE("offsets carry the known constant without touching coefficients") {
  DesignMatrix design;
  design.x.resize(6, 1);
  design.y.resize(6);
  design.offset.resize(6);
  for (int i = 0; i < 6; ++i) {
    design.x(i, 0) = double(i + 1);
    design.offset(i) = 0.25 * double(i % 3);
    design.y(i) = design.offset(i) + 2.0 * design.x(i, 0);
  }
  const FitResult fit = ols_fit(design);
  CHECK(std::abs(fit.beta(0) - 2.0) < 1e-14);
  CHECK(fit.r2_uncentered == 1.0);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(fit.fitted(i) - design.y(i)) < 1e-14);
}

TEST_CASE("flow datasets mirror the linearized equations term for term") {
  const Network net = training_ring();
  const ModelCoefficients truth = ModelCoefficients::identity();
  const auto sols = linear_states(net, truth, 2, 42);

  const DesignMatrix p = assemble_p_dataset(net, sols);
  const DesignMatrix q = assemble_q_dataset(net, sols);
  const DesignMatrix ddc = assemble_ddc_dataset(net, sols);

  const std::size_t per_state = net.branches.size();
  CHECK(std::size_t(p.x.rows()) == 2 * per_state);
  CHECK(p.column_names == std::vector<std::string>{"k_a1", "k_a2"});
  CHECK(q.column_names == std::vector<std::string>{"k_a3", "k_a4", "k_a5"});
  CHECK(ddc.column_names == std::vector<std::string>{"k_d"});
  CHECK(p.row_keys[0] == "state_0:1-2#1");
  CHECK(q.offset.size() == q.y.size());

  // the reactive offset is exactly the from-end shunt susceptance
  const auto branches = in_service_branches(net, ShiftPolicy::reject);
  for (std::size_t b = 0; b < per_state; ++b)
    CHECK(q.offset(Eigen::Index(b)) == branches[b].pi.b_from);

  // identity coefficients generated the data, so every response is the row sum
  for (Eigen::Index i = 0; i < p.x.rows(); ++i)
    CHECK(std::abs(p.x.row(i).sum() - p.y(i)) < 1e-14);
  for (Eigen::Index i = 0; i < q.x.rows(); ++i)
    CHECK(std::abs(q.x.row(i).sum() + q.offset(i) - q.y(i)) < 1e-14);

  AcSolution bad = sols[0];
  bad.vm.pop_back();
  CHECK_THROWS_AS(assemble_p_dataset(net, {bad}), TopologyMismatch);
  AcSolution reordered = sols[0];
  std::swap(reordered.flows[0].branch, reordered.flows[1].branch);
  CHECK_THROWS_AS(assemble_q_dataset(net, {reordered}), TopologyMismatch);
  CHECK_THROWS_AS(assemble_ddc_dataset(net, {}), InvalidArgument);
}

TEST_CASE("fitting data from a known linear model recovers its coefficients") {
  const Network net = training_ring();
  ModelCoefficients truth;
  truth.k_a = {0.93, 1.07, 1.02, 0.95, 1.08};
  const auto sols = linear_states(net, truth, 6, 2024);

  const CoefficientFit fit = fit_model_coefficients(net, sols);
  for (int j = 0; j < 5; ++j) {
    CAPTURE(j);
    CHECK(std::abs(fit.coeffs.k_a[std::size_t(j)] - truth.k_a[std::size_t(j)]) < 1e-8);
  }
  CHECK(fit.p_fit.r2_uncentered > 1.0 - 1e-12);
  CHECK(fit.q_fit.r2_uncentered > 1.0 - 1e-12);
  CHECK(fit.coeffs.k_d > 0.0);
  REQUIRE(fit.coeffs.trained_on.size() == 6);
  CHECK(fit.coeffs.trained_on[0] == "state_0");

  // pure angle-model data hands back the planted proportionality exactly
  for (double k_true : {0.8, 1.25}) {
    std::vector<AcSolution> dc_states = sols;
    const auto branches = in_service_branches(net, ShiftPolicy::reject);
    for (AcSolution& sol : dc_states)
      for (std::size_t b = 0; b < branches.size(); ++b) {
        const auto& ib = branches[b];
        const double th = sol.va[ib.from] - sol.va[ib.to];
        sol.flows[b].p_from = k_true * th / (ib.x * ib.tap);
        sol.flows[b].p_to = -sol.flows[b].p_from;
      }
    const FitResult ddc = ols_fit(assemble_ddc_dataset(net, dc_states));
    CHECK(std::abs(ddc.beta(0) - k_true) < 1e-12);
  }
}
