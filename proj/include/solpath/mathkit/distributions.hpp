#pragma once

namespace solpath {

// Standard normal CDF, accurate to ~1e-16 absolute (erfc based).
double std_normal_cdf(double x);

// Inverse of std_normal_cdf by bisection; throws OutOfRange unless 0 < u < 1.
double std_normal_quantile(double u);

// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);

// Quantile of the chi-square distribution with `df` degrees of freedom.
double chi_square_quantile(int df, double u);

}  // namespace solpath
