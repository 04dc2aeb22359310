#include <cmath>

#include <doctest.h>

#include "pflin/distributions.hpp"
#include "pflin/errors.hpp"

using namespace pflin;

// Every reference constant below is a frozen value from an independent,
// widely cross-checked statistics implementation, printed at full precision.

TEST_CASE("regularized incomplete beta matches reference values") {
  CHECK(std::abs(regularized_incomplete_beta(0.3, 2.5, 3.5) - 0.29675298929566646) < 1e-14);
  CHECK(std::abs(regularized_incomplete_beta(0.8, 0.5, 0.5) - 0.7048327646991335) < 1e-14);
  // complement identity: I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(std::abs((1.0 - regularized_incomplete_beta(0.7, 3.5, 2.5)) - 0.2967529892956665) <
        1e-14);
  CHECK(regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
  // symmetric parameters at the midpoint
  CHECK(std::abs(regularized_incomplete_beta(0.5, 4.0, 4.0) - 0.5) < 1e-14);
}

TEST_CASE("f tail probabilities match reference values") {
  CHECK(std::abs(f_tail_probability(5.0, 3, 12) - 0.017766997639552824) < 1e-15);
  CHECK(std::abs(f_tail_probability(1.0, 1, 1) - 0.5000000000000001) < 1e-15);
  CHECK(std::abs(f_tail_probability(52.97850462090555, 1, 8) - 8.564065768120275e-05) <
        1e-17);
  CHECK(std::abs(f_tail_probability(1748.7583158737202, 1, 8) - 1.1780468685553673e-10) <
        1e-22);
  CHECK(f_tail_probability(0.0, 2, 10) == 1.0);
}

TEST_CASE("student t cdf matches reference values and symmetry") {
  CHECK(std::abs(t_cdf(1.5, 7) - 0.911350756505015) < 1e-14);
  CHECK(std::abs(t_cdf(-2.3, 12) - 0.020098786856730274) < 1e-14);
  CHECK(t_cdf(0.0, 5) == 0.5);
  CHECK(std::abs(t_cdf(1.7, 9) + t_cdf(-1.7, 9) - 1.0) < 1e-14);
}

TEST_CASE("student t quantile inverts the cdf") {
  // the bisection is exact to the last ulp of the cdf; the remaining gap to
  // the reference values is the cdf's own accuracy amplified by 1/pdf
  CHECK(std::abs(t_quantile(0.975, 10) - 2.2281388519649385) < 1e-9);
  CHECK(std::abs(t_quantile(0.975, 8) - 2.306004135204166) < 1e-9);
  CHECK(std::abs(t_quantile(0.975, 2000) - 1.9611508260994375) < 1e-9);
  CHECK(std::abs(t_quantile(0.10, 5) - (-1.4758840488558214)) < 1e-9);
  CHECK(t_quantile(0.5, 7) == 0.0);
  for (double p : {0.025, 0.3, 0.7, 0.99}) {
    for (double df : {1.0, 4.0, 30.0, 500.0}) {
      CHECK(std::abs(t_cdf(t_quantile(p, df), df) - p) < 1e-12);
    }
  }
}

TEST_CASE("distribution domain errors are rejected") {
  CHECK_THROWS_AS(regularized_incomplete_beta(-0.1, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.1, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(regularized_incomplete_beta(0.5, 0.0, 1.0), InvalidArgument);
  CHECK(f_tail_probability(-1.0, 2, 3) == 1.0);  // non-positive statistics keep full mass
  CHECK_THROWS_AS(f_tail_probability(1.0, 0, 3), InvalidArgument);
  CHECK_THROWS_AS(t_cdf(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(t_quantile(0.0, 5), InvalidArgument);
  CHECK_THROWS_AS(t_quantile(1.0, 5), InvalidArgument);
}
