#pragma once

namespace pflin {

// Regularized incomplete beta I_x(a, b) by the continued fraction with the
// modified Lentz recurrence; relative accuracy ~1e-14 over the open interval.
double regularized_incomplete_beta(double x, double a, double b);

// Upper tail Pr(F > f) for an F statistic with (df1, df2) degrees of freedom.
// Values underflow to denormals/zero for the huge statistics the sequential
// ANOVA produces; the report writers render anything below 2.2e-16 as a
// "< 2.2e-16" class entry.
double f_tail_probability(double f, double df1, double df2);

// Student-t distribution with df degrees of freedom.
double t_cdf(double x, double df);
double t_quantile(double p, double df);  // inverse CDF, p in (0, 1)

}  // namespace pflin
