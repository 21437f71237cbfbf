#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace goldi {

// Linear-interpolation quantile between order statistics (the convention
// shared by flood thresholds, EVI summaries, and the rice features).
// q is in [0,100]. For n values the quantile sits at rank q/100*(n-1).
double quantile_linear(std::span<const double> values, double q);

inline double median_linear(std::span<const double> values) {
  return quantile_linear(values, 50.0);
}

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value for a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

double student_t_cdf(double t, double df);

// Quantile of the t distribution (bisection on the CDF).
double student_t_quantile(double p, double df);

}  // namespace goldi
