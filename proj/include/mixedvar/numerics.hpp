#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mixedvar {

// Cascade (pairwise) summation with a fixed association order.  The result
// depends only on the order of the elements, never on chunking or thread
// count, and keeps rounding error O(log n) at n = 2^20.
double pairwise_sum(std::span<const double> x);

// x^e by binary exponentiation; exact product chain for small integer powers.
double ipow(double x, unsigned e);

// log2(x) for x > 0, otherwise 0.  Total version of the base-2 logarithm used
// by the ratio estimators; callers test the sign themselves when they need to
// flag the fallback.
double log2_plus(double x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;        // coefficient of determination
  double slope_se = 0.0;  // standard error of the slope
};

// Ordinary least squares of y on x; requires x.size() == y.size() >= 2.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);

// One-sample Kolmogorov-Smirnov distance between the sample and the normal
// law N(mean, sd^2).  Sorts a copy of the sample.
double ks_distance(std::vector<double> sample, double mean, double sd);

// Critical value K_alpha / sqrt(n) with K_alpha = sqrt(-log(alpha/2)/2).
double ks_critical(double alpha, std::size_t n);

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, divides by n-1
  std::size_t count = 0;
};

SampleStats sample_stats(std::span<const double> x);

// Hurwitz zeta zeta(s, a) = sum_{k>=0} (a+k)^-s for s > 1, via the
// Euler-Maclaurin expansion.  Intended for large a (series tail evaluation);
// requires a >= 10.
double hurwitz_zeta(double s, double a);

}  // namespace mixedvar
