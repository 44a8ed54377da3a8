#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ltlab::stats {

double mean(std::span<const double> xs);
// Unbiased sample variance.
double variance(std::span<const double> xs);
double stderr_of_mean(std::span<const double> xs);

struct KsResult {
  double D = 0.0;  // sup-norm distance between empirical CDFs
  double p = 1.0;  // asymptotic p-value
};

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

// Two-sample Kolmogorov-Smirnov test. The p-value uses the asymptotic
// Kolmogorov distribution at effective size m*n/(m+n). Throws on empty input.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample KS against a continuous CDF.
KsResult ks_one_sample(std::span<const double> xs,
                       const std::function<double(double)>& cdf);

// Least-squares slope of log(y) against log(x). Entries with y <= 0 are
// skipped. Requires at least two usable points.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

// Bootstrap standard error of the mean difference statistic used by the
// KS-monotonicity diagnostic: resamples replica indices (B resamples, seeded).
double bootstrap_se(std::span<const double> xs,
                    const std::function<double(std::span<const double>)>& stat,
                    int resamples, std::uint64_t seed);

// Pearson correlation.
double correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace ltlab::stats
