#pragma once

#include <span>
#include <vector>

namespace cyrisk::math {

double digamma(double x);
double trigamma(double x);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

double gamma_logpdf(double x, double shape, double scale);
double gamma_cdf(double x, double shape, double scale);

double log_sum_exp(std::span<const double> xs);

// Interpolated order-statistic quantile (the "linear" convention: position
// p * (n - 1) in the ascending-sorted sample).
double quantile_sorted(std::span<const double> sorted, double p);

// Mean of the upper (1 - level) tail of the sorted sample, with fractional
// weight on the boundary observation.
double tail_mean_sorted(std::span<const double> sorted, double level);

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};

MeanSE mean_se(std::span<const double> xs);

} // namespace cyrisk::math
