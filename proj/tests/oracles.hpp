#pragma once

// Independent brute-force reference implementations used only by tests.
// Everything here is written directly from the defining formulas (naive DFT,
// direct summation, dense Cholesky) so library results can be checked against
// a second route.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mixedvar/model.hpp"
#include "mixedvar/rng.hpp"

namespace oracle {

// O(n^2) forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
std::vector<std::complex<double>> naive_dft(const std::vector<double>& x);

// Direct power variation of grid values at stride s: sum over coarse
// increments (values[(i+1)s] - values[is])^power.
double direct_power_variation(const std::vector<double>& values,
                              std::size_t stride, int power);

// Direct mixed variation sum_i dW_i^p dB_i^r on shared grids.
double direct_mixed_variation(const std::vector<double>& w,
                              const std::vector<double>& b, unsigned p,
                              unsigned r);

// Direct centered sum on the unit horizon (rescales [0,T] increments by
// 1/sqrt(T) and T^-H first): sum_i (n^(rH+p/2) dW^p dB^r - mu_p mu_r).
double direct_centered_sum(const mixedvar::GridPath& w,
                           const mixedvar::GridPath& bh, unsigned p,
                           unsigned r, double H);

// Dense lower-triangular Cholesky factor of a symmetric positive-definite
// row-major n x n matrix.  Throws std::runtime_error if a pivot is <= 0.
std::vector<double> cholesky(const std::vector<double>& a, std::size_t n);

// x = L z with z iid standard normal.
std::vector<double> correlated_draw(const std::vector<double>& L,
                                    std::size_t n,
                                    mixedvar::GaussianStream& g);

// Toeplitz covariance of standard fGn, C_ij = rho_H(|i-j|).
std::vector<double> fgn_covariance_matrix(double H, std::size_t n);

// fBm covariance at arbitrary times, C_ij = (t_i^2H + t_j^2H - |t_i-t_j|^2H)/2.
std::vector<double> fbm_covariance_matrix(double H,
                                          const std::vector<double>& times);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

MeanSe mean_se(const std::vector<double>& x);

// Per-draw estimate of E[x_i x_{i+lag}] for one zero-mean stationary sample.
double draw_autocovariance(const std::vector<double>& x, std::size_t lag);

}  // namespace oracle
