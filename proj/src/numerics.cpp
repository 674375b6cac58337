#include "mixedvar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixedvar/errors.hpp"

namespace mixedvar {

namespace {

double pairwise_sum_impl(const double* x, std::size_t n) {
  // Fixed association: split at the midpoint, left-to-right inside blocks.
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(x, half) + pairwise_sum_impl(x + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> x) {
  return pairwise_sum_impl(x.data(), x.size());
}

double ipow(double x, unsigned e) {
  double result = 1.0;
  while (e != 0) {
    if (e & 1u) result *= x;
    x *= x;
    e >>= 1;
  }
  return result;
}

double log2_plus(double x) { return x > 0.0 ? std::log2(x) : 0.0; }

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw ParameterError("ols_fit: need two equally sized samples of size >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ParameterError("ols_fit: regressor is constant");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double rss = std::max(0.0, syy - fit.slope * sxy);
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  fit.slope_se =
      n > 2 ? std::sqrt(rss / (static_cast<double>(n - 2) * sxx)) : 0.0;
  return fit;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance(std::vector<double> sample, double mean, double sd) {
  if (sample.empty()) throw ParameterError("ks_distance: empty sample");
  if (!(sd > 0.0)) throw ParameterError("ks_distance: sd must be positive");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf((sample[i] - mean) / sd);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double ks_critical(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0) || n == 0)
    throw ParameterError("ks_critical: need alpha in (0,1) and n >= 1");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

SampleStats sample_stats(std::span<const double> x) {
  SampleStats s;
  s.count = x.size();
  if (s.count == 0) return s;
  s.mean = pairwise_sum(x) / static_cast<double>(s.count);
  if (s.count == 1) return s;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - s.mean;
    sq[i] = d * d;
  }
  s.variance = pairwise_sum(sq) / static_cast<double>(s.count - 1);
  return s;
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw ParameterError("hurwitz_zeta: need s > 1");
  if (!(a >= 10.0)) throw ParameterError("hurwitz_zeta: need a >= 10");
  // Sum a short head directly, then Euler-Maclaurin on the remainder:
  // zeta(s, b) ~ b^(1-s)/(s-1) + b^(-s)/2 + sum_j B_2j/(2j)! (s)_(2j-1) b^(-s-2j+1).
  constexpr int kHead = 16;
  double head = 0.0;
  for (int k = 0; k < kHead; ++k) head += std::pow(a + k, -s);
  const double b = a + kHead;
  double tail = std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s);
  // Bernoulli numbers B_2, B_4, B_6, B_8 over (2j)!.
  static constexpr double kB[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                  -1.0 / 1209600.0};
  double poch = s;  // (s)_1
  double bpow = std::pow(b, -s - 1.0);
  for (int j = 0; j < 4; ++j) {
    tail += kB[j] * poch * bpow;
    poch *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    bpow /= b * b;
  }
  return head + tail;
}

}  // namespace mixedvar
