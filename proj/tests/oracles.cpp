#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "mixedvar/asymptotics.hpp"
#include "mixedvar/fgn.hpp"

namespace oracle {

std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * M_PI * static_cast<double>(j) *
                           static_cast<double>(k) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

double direct_power_variation(const std::vector<double>& values,
                              std::size_t stride, int power) {
  double sum = 0.0;
  for (std::size_t i = 0; i + stride < values.size(); i += stride) {
    const double d = values[i + stride] - values[i];
    double term = 1.0;
    for (int e = 0; e < power; ++e) term *= d;
    sum += term;
  }
  return sum;
}

double direct_mixed_variation(const std::vector<double>& w,
                              const std::vector<double>& b, unsigned p,
                              unsigned r) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double dw = w[i + 1] - w[i];
    const double db = b[i + 1] - b[i];
    double term = 1.0;
    for (unsigned e = 0; e < p; ++e) term *= dw;
    for (unsigned e = 0; e < r; ++e) term *= db;
    sum += term;
  }
  return sum;
}

double direct_centered_sum(const mixedvar::GridPath& w,
                           const mixedvar::GridPath& bh, unsigned p,
                           unsigned r, double H) {
  const std::size_t n = w.n;
  const double nd = static_cast<double>(n);
  const double scale = std::pow(nd, r * H + 0.5 * p);
  const double w_unit = 1.0 / std::sqrt(w.T);
  const double b_unit = std::pow(bh.T, -H);
  const double center =
      mixedvar::hermite_moment(static_cast<int>(p)) *
      mixedvar::hermite_moment(static_cast<int>(r));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dw = (w.values[i + 1] - w.values[i]) * w_unit;
    const double db = (bh.values[i + 1] - bh.values[i]) * b_unit;
    double term = 1.0;
    for (unsigned e = 0; e < p; ++e) term *= dw;
    for (unsigned e = 0; e < r; ++e) term *= db;
    sum += scale * term - center;
  }
  return sum;
}

std::vector<double> cholesky(const std::vector<double>& a, std::size_t n) {
  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (s <= 0.0)
          throw std::runtime_error("cholesky: non-positive pivot");
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  return L;
}

std::vector<double> correlated_draw(const std::vector<double>& L,
                                    std::size_t n,
                                    mixedvar::GaussianStream& g) {
  std::vector<double> z(n);
  for (auto& v : z) v = g();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= i; ++k) acc += L[i * n + k] * z[k];
    x[i] = acc;
  }
  return x;
}

std::vector<double> fgn_covariance_matrix(double H, std::size_t n) {
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i * n + j] =
          mixedvar::fgn_autocovariance(H, i > j ? i - j : j - i);
  return c;
}

std::vector<double> fbm_covariance_matrix(double H,
                                          const std::vector<double>& times) {
  const std::size_t n = times.size();
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i * n + j] = 0.5 * (std::pow(times[i], 2.0 * H) +
                            std::pow(times[j], 2.0 * H) -
                            std::pow(std::abs(times[i] - times[j]), 2.0 * H));
  return c;
}

MeanSe mean_se(const std::vector<double>& x) {
  MeanSe out;
  if (x.empty()) return out;
  double sum = 0.0;
  for (double v : x) sum += v;
  out.mean = sum / static_cast<double>(x.size());
  if (x.size() < 2) return out;
  double ss = 0.0;
  for (double v : x) ss += (v - out.mean) * (v - out.mean);
  const double var = ss / static_cast<double>(x.size() - 1);
  out.se = std::sqrt(var / static_cast<double>(x.size()));
  return out;
}

double draw_autocovariance(const std::vector<double>& x, std::size_t lag) {
  double sum = 0.0;
  const std::size_t count = x.size() - lag;
  for (std::size_t i = 0; i < count; ++i) sum += x[i] * x[i + lag];
  return sum / static_cast<double>(count);
}

}  // namespace oracle
