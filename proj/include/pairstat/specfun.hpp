#pragma once

// Special functions and distribution tails behind every p-value.
//
// All functions are pure and thread-safe. Arguments outside the documented
// domain raise StatsError(DomainError); a NaN statistic propagates as NaN.

namespace pairstat::specfun {

// ln(Gamma(x)) for x > 0 (Lanczos, g = 7, 9 terms).
double ln_gamma(double x);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

// I_x(a, b) with y = 1 - x supplied by the caller. Lets tails such as
// I_{(1-r)/2} avoid forming 1 - x in floating point.
double reg_inc_beta(double x, double y, double a, double b);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double reg_inc_gamma_lower(double a, double x);
double reg_inc_gamma_upper(double a, double x);

// Upper tails P(X > x).
double normal_sf(double z);
double t_sf(double t, double dof);
double chi2_sf(double x, double dof);
double f_sf(double f, double d1, double d2);

// 1 - I_{(r_abs+1)/2}(a, a): the upper tail of a symmetric Beta(a, a) law
// rescaled to [-1, 1]. Pearson's r under the null has a = n/2 - 1.
double beta_sym_sf(double r_abs, double a);

}  // namespace pairstat::specfun
