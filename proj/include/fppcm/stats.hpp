#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace fppcm::stats {

// Type-7 quantile (linear interpolation between order statistics).
double quantile_type7(std::vector<double> xs, double p);

// Upper tail of the chi-square distribution with k degrees of freedom,
// P(X >= x), via the regularized incomplete gamma function.
double chi_square_sf(double x, double dof);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

struct Chi2Result {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
    std::size_t buckets = 0;
};

// Two-sample chi-square homogeneity test on integer-valued observations.
// Buckets of width 1, tail-merged so every expected count is >= 5.
Chi2Result two_sample_chi2(const std::vector<long long>& a,
                           const std::vector<long long>& b);

// Hill estimator of the tail exponent on samples in [threshold, cap].
// Returns the estimated exponent of P(X > x) ~ x^{-hill}; NaN if fewer
// than 10 samples qualify.
double hill_estimator(const std::vector<double>& xs, double threshold,
                      double cap);

// Pearson correlation; NaN for degenerate input.
double correlation(const std::vector<double>& xs, const std::vector<double>& ys);

double mean(const std::vector<double>& xs);
double stddev(const std::vector<double>& xs);

} // namespace fppcm::stats
