#pragma once

// Standard normal and Student-t distribution functions used by the
// transforms and the test statistics. All functions are pure.

namespace povs {

/// Standard normal CDF, Phi(x).
double normal_cdf(double x);

/// Upper tail 1 - Phi(x), without cancellation for large x.
double normal_sf(double x);

/// Inverse of Phi. Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b).
///
/// Evaluated by the modified Lentz continued fraction, using the
/// I_x(a,b) = 1 - I_{1-x}(b,a) reflection when x lies past the mean
/// a/(a+b). Throws std::domain_error for a <= 0, b <= 0 or x outside
/// [0,1], and ConvergenceError if the fraction does not converge.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value 2 P(T_df >= |t|) for real-valued df > 0.
double t_p_two_sided(double t, double df);

}  // namespace povs
