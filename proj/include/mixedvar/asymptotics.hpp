#pragma once

#include <vector>

namespace mixedvar {

// Gaussian moments and small combinatorial helpers -----------------------------

// mu_m = E[N(0,1)^m] = (m-1)!! for even m, 0 for odd m.
double hermite_moment(int m);

// n!! with the conventions 0!! = (-1)!! = 1.
double double_factorial(int n);

// n! as a double (exact for n <= 22).
double factorial(int n);

// Limit variances for the mixed centered sums ----------------------------------

// sigma^2_{p,r} = mu_{2r} (mu_{2p} - mu_p^2): the i.i.d. component of the limit
// variance of n^{-1/2} S^{H,p,r}_n.
double sigma2_pr(int p, int r);

// Result of a truncated correlation-series evaluation.  `value` is the series
// sum including an analytic tail estimate; `tail_bound` bounds the error of
// the truncation actually performed (it is <= the requested tolerance unless
// the evaluation threw), and `truncation_lag` is the last lag summed directly.
struct SeriesEvaluation {
  double value = 0.0;
  int truncation_lag = 0;
  double tail_bound = 0.0;
};

// Sum over all integer lags of rho_H(m)^q, where rho_H is the unit-step
// fractional Gaussian noise autocovariance.  Direct summation up to a lag M
// plus a tail evaluated through a binomial expansion of rho_H in powers of
// 1/m whose partial sums reduce to Hurwitz zeta values; the expansion
// remainder is bounded rigorously.  Requires q >= 2 and q(2-2H) > 1 (the
// series diverges otherwise).
SeriesEvaluation fgn_power_series_sum(double H, int q, double tol = 1e-10);

// Gaussian-chaos component sigma^2_{H,r} of the limit variance of
// n^{-1/2} S^{H,p,r}_n:
//   even r >= 2, H in (0,3/4):
//       sum_{l=1}^{r/2}   (r!)^2 / ((2l)!  ((r-2l)!!)^2)   * S_{2l}
//   odd  r >= 3, H in (0,1/2]:
//       sum_{l=1}^{(r-1)/2} (r!)^2 / ((2l+1)!((r-2l-1)!!)^2) * S_{2l+1}
//   r = 1 -> 0,
// where S_q = fgn_power_series_sum(H, q).  Even r with H >= 3/4 and odd r
// with H > 1/2 raise a regime error (the corresponding central limit theorem
// fails there).
SeriesEvaluation sigma2_Hr(double H, int r, double tol = 1e-10);

// Scale constant for the boundary case H = 3/4: 3r(r-1)/4 for even r >= 2
// (and 0 for r = 0).
double sigma_34_r(int r);

// Limit variance of (n log n)^{-1/2} S^{3/4,p,r}_n for even p and even
// r >= 2: (9/16) (r!/(2 (r-2)!!))^2 mu_p^2.  For r in {2,4} this equals
// (3r(r-1)/8)^2 mu_p^2, i.e. sigma_34_r/2 plays the role of the standard
// deviation there.
double critical_limit_variance(int p, int r);

// Wick machinery over centered quadratic forms of fBm increments ---------------

// One term c * (B_t - B_s)^2 in a quadratic form; endpoints must satisfy
// 0 <= s < t.
struct IncrementTerm {
  double coeff = 0.0;
  double s = 0.0;
  double t = 0.0;
};
using QuadraticForm = std::vector<IncrementTerm>;

// E[(B_t - B_s)(B_v - B_u)] for fBm with Hurst index H:
//   (|t-u|^{2H} + |s-v|^{2H} - |t-v|^{2H} - |s-u|^{2H}) / 2.
double fbm_increment_cov(double H, double s, double t, double u, double v);

// E[sum_i c_i (B_{t_i} - B_{s_i})^2] = sum_i c_i |t_i - s_i|^{2H}.
double quadratic_form_mean(double H, const QuadraticForm& q);

// Cov(X, Y) for X = sum_i c_i (DB_i)^2, Y = sum_j d_j (DB_j)^2: by Wick's
// rule Cov((DB_i)^2, (DB_j)^2) = 2 E[DB_i DB_j]^2, so the result is
// 2 sum_{ij} c_i d_j fbm_increment_cov(i,j)^2.
double centered_product_expectation(double H, const QuadraticForm& x,
                                    const QuadraticForm& y);

// The quadratic form shifted in time by m: (s,t) -> (s+m, t+m).
QuadraticForm shift_form(const QuadraticForm& q, double m);

// The mean-zero bracket behind the tilde_H fluctuation: unit increment minus
// c_H = 2^{2H-1} times each half-step increment, all squared, on [0,1].
QuadraticForm half_step_bracket(double H);

// The mean-zero bracket behind the tilde_H2 fluctuation: coefficients
// (1, -(c_H+1), +c_H) on the full step, the two half steps and the four
// quarter steps of [0,1].
QuadraticForm quarter_step_bracket(double H);

// rho'_{H,m}: correlation at lag m of the half-step bracket sequence.
double rho_prime(double H, int m);

// rho''_{H,m}: correlation at lag m of the quarter-step bracket sequence.
double rho_double_prime(double H, int m);

// Asymptotic standard deviations of the ratio estimators ------------------------

// sigma'_H = (1/(2 log 2)) sqrt(rho'_{H,0} + 2 sum_{m>=1} rho'_{H,m}), the sd
// of the limit of 2^{k/2}(tilde_H_k - H).  Computable for H in (0,3/4); the
// theorem backing it holds for H in (0,1/4).
SeriesEvaluation sigma_prime_H(double H, double tol = 1e-10);

// sigma''_H, the sd of the normalized tilde_H2 fluctuation:
//   H in (0,1/2): 2^{k/2}(tilde_H2_k - H) has limit sd
//       sqrt(rho''_{H,0} + 2 sum_{m>=1} rho''_{H,m}) / ((2^{2-2H}-2) log 2);
//       a and b do not enter.
//   H in (1/2,3/4): 2^{k(3/2-2H)}(tilde_H2_k - H) has limit sd with
//       (sigma'')^2 = (1 + 2^{4H-3}) (b/a)^4 T^{2-4H}
//                     / (4 (1 - 2^{1-2H})^2 log^2 2),
//       derived from the exact variance of the top-scale Wiener combination
//       (see docs/high-regime-variance.md for the committed experiment).
//   H = 1/2 is a pole of both prefactors.
SeriesEvaluation sigma_double_prime_H(double H, double T, double tol = 1e-10,
                                      double a = 1.0, double b = 1.0);

// An alternative closed form for the high-regime variance (not sd) that is
// sometimes quoted for this statistic: (2^{4H-1}+1) T^{1-2H} /
// ((2-2^{2-2H}) log 2).  The committed experiment in
// docs/high-regime-variance.md discriminates between this value and the one
// sigma_double_prime_H ships; it is retained for comparison only.
double high_regime_variance_alt(double H, double T);

// Leading bias of tilde_H_k for H in (1/4,1/2):
//   (1 - 2^{2H-1}) (b^2/a^2) T^{1-2H} 2^{k(2H-1)}.
double tilde_H_bias(double H, double a, double b, double T, int k);

}  // namespace mixedvar
