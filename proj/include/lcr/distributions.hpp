#pragma once

namespace lcr::stat {

// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
// separately keeps precision when x is close to 1.
double regularized_beta(double a, double b, double x, double y);
double regularized_beta(double a, double b, double x);

// Student-t CDF, df >= 1 (real df accepted; integer df in practice).
double t_cdf(double t, double df);
// Two-sided p-value P(|T| >= |t|), evaluated on the upper tail directly.
double t_two_sided_p(double t, double df);
// Inverse CDF, p in (0, 1).
double t_quantile(double p, double df);

double f_cdf(double f, double df1, double df2);
// Upper tail 1 - F(f) without cancellation.
double f_sf(double f, double df1, double df2);

double normal_cdf(double z);

}  // namespace lcr::stat
