#include "mixedvar/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "mixedvar/errors.hpp"
#include "mixedvar/fgn.hpp"
#include "mixedvar/numerics.hpp"

namespace mixedvar {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

// Generalized binomial coefficient C(alpha, j).
double binom_real(double alpha, int j) {
  double out = 1.0;
  for (int i = 0; i < j; ++i) out *= (alpha - i) / (i + 1);
  return out;
}

// Coefficients of (sum_l g[l] x^l)^q by repeated convolution.
std::vector<double> poly_pow(const std::vector<double>& g, int q) {
  std::vector<double> out{1.0};
  for (int step = 0; step < q; ++step) {
    std::vector<double> next(out.size() + g.size() - 1, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) next[i + j] += out[i] * g[j];
    out = std::move(next);
  }
  return out;
}

}  // namespace

double hermite_moment(int m) {
  if (m < 0) throw ParameterError("hermite_moment: order must be >= 0");
  if (m % 2 == 1) return 0.0;
  double out = 1.0;
  for (int i = m - 1; i > 1; i -= 2) out *= i;
  return out;
}

double double_factorial(int n) {
  double out = 1.0;
  for (int i = n; i > 1; i -= 2) out *= i;
  return out;
}

double factorial(int n) {
  if (n < 0) throw ParameterError("factorial: negative argument");
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

double sigma2_pr(int p, int r) {
  if (p < 0 || r < 0) throw ParameterError("sigma2_pr: p, r must be >= 0");
  const double mp = hermite_moment(p);
  return hermite_moment(2 * r) * (hermite_moment(2 * p) - mp * mp);
}

SeriesEvaluation fgn_power_series_sum(double H, int q, double tol) {
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("fgn_power_series_sum: H must lie in (0,1)");
  if (q < 2) throw ParameterError("fgn_power_series_sum: q must be >= 2");
  if (!(q * (2.0 - 2.0 * H) > 1.0))
    throw RegimeError("fgn_power_series_sum: series diverges for q(2-2H) <= 1");
  if (!(tol > 0.0)) throw ParameterError("fgn_power_series_sum: tol must be > 0");

  // rho_H(m) = sum_{l>=0} g_l m^{2H-2-2l} for m >= 2, g_l = C(2H, 2l+2);
  // the coefficient magnitudes decrease in l.
  constexpr int kOrders = 8;
  std::vector<double> g(kOrders);
  for (int l = 0; l < kOrders; ++l) g[l] = binom_real(2.0 * H, 2 * l + 2);
  const std::vector<double> h = poly_pow(g, q);

  const double kappa0 = std::abs(g[0]);
  const double kappaL = std::abs(g[kOrders - 1]);

  for (int M = 64; M <= (1 << 20); M *= 2) {
    // Expansion remainder: |rho^q - P^q| <= q max(|rho|,|P|)^{q-1} |R| with
    // |R(m)| <= (4/3)|g_L| m^{2H-2-2L} and max <= (4/3)|g_0| m^{2H-2}.
    const double bound =
        2.0 * q * std::pow(4.0 / 3.0 * kappa0, q - 1) * (4.0 / 3.0) * kappaL *
        hurwitz_zeta(q * (2.0 - 2.0 * H) + 2.0 * kOrders, M + 1.0);
    if (bound > tol) continue;

    double direct = 0.0;
    for (int m = M; m >= 1; --m) {
      const double rho = fgn_autocovariance(H, m);
      direct += ipow(rho, q);
    }
    double tail = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] == 0.0) continue;
      tail += h[i] * hurwitz_zeta(q * (2.0 - 2.0 * H) + 2.0 * i, M + 1.0);
    }
    SeriesEvaluation out;
    out.value = 1.0 + 2.0 * (direct + tail);
    out.truncation_lag = M;
    out.tail_bound = bound;
    return out;
  }
  throw ResolutionError(
      "fgn_power_series_sum: could not certify the requested tolerance");
}

SeriesEvaluation sigma2_Hr(double H, int r, double tol) {
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("sigma2_Hr: H must lie in (0,1)");
  if (r < 0) throw ParameterError("sigma2_Hr: r must be >= 0");
  if (r == 0 || r == 1) {
    if (r == 1 && H > 0.5)
      throw RegimeError("sigma2_Hr: odd r requires H <= 1/2");
    return {0.0, 0, 0.0};
  }
  const bool even = r % 2 == 0;
  if (even && H >= 0.75)
    throw RegimeError("sigma2_Hr: series diverges for even r with H >= 3/4");
  if (!even && H > 0.5)
    throw RegimeError("sigma2_Hr: odd r requires H <= 1/2");

  const int l_max = even ? r / 2 : (r - 1) / 2;
  std::vector<double> coeff(l_max + 1, 0.0);
  double coeff_sum = 0.0;
  const double rf = factorial(r);
  for (int l = 1; l <= l_max; ++l) {
    const int q = even ? 2 * l : 2 * l + 1;
    const double df = double_factorial(r - q);
    coeff[l] = rf * rf / (factorial(q) * df * df);
    coeff_sum += coeff[l];
  }
  SeriesEvaluation out;
  for (int l = 1; l <= l_max; ++l) {
    const int q = even ? 2 * l : 2 * l + 1;
    const SeriesEvaluation s =
        fgn_power_series_sum(H, q, tol / (2.0 * coeff_sum));
    out.value += coeff[l] * s.value;
    out.truncation_lag = std::max(out.truncation_lag, s.truncation_lag);
    out.tail_bound += coeff[l] * s.tail_bound;
  }
  return out;
}

double sigma_34_r(int r) {
  if (r == 0) return 0.0;
  if (r < 2 || r % 2 != 0)
    throw ParameterError("sigma_34_r: r must be even and >= 2 (or 0)");
  return 3.0 * r * (r - 1) / 4.0;
}

double critical_limit_variance(int p, int r) {
  if (p < 0) throw ParameterError("critical_limit_variance: p must be >= 0");
  if (r < 2 || r % 2 != 0)
    throw ParameterError("critical_limit_variance: r must be even and >= 2");
  const double b2 = factorial(r) / (2.0 * double_factorial(r - 2));
  const double mp = hermite_moment(p);
  return 9.0 / 16.0 * b2 * b2 * mp * mp;
}

double fbm_increment_cov(double H, double s, double t, double u, double v) {
  const double twoH = 2.0 * H;
  return 0.5 * (std::pow(std::abs(t - u), twoH) +
                std::pow(std::abs(s - v), twoH) -
                std::pow(std::abs(t - v), twoH) -
                std::pow(std::abs(s - u), twoH));
}

double quadratic_form_mean(double H, const QuadraticForm& q) {
  double out = 0.0;
  for (const auto& term : q)
    out += term.coeff * std::pow(term.t - term.s, 2.0 * H);
  return out;
}

double centered_product_expectation(double H, const QuadraticForm& x,
                                    const QuadraticForm& y) {
  double out = 0.0;
  for (const auto& a : x)
    for (const auto& b : y) {
      const double c = fbm_increment_cov(H, a.s, a.t, b.s, b.t);
      out += 2.0 * a.coeff * b.coeff * c * c;
    }
  return out;
}

QuadraticForm shift_form(const QuadraticForm& q, double m) {
  QuadraticForm out = q;
  for (auto& term : out) {
    term.s += m;
    term.t += m;
  }
  return out;
}

QuadraticForm half_step_bracket(double H) {
  const double c = std::exp2(2.0 * H - 1.0);
  return {{1.0, 0.0, 1.0}, {-c, 0.0, 0.5}, {-c, 0.5, 1.0}};
}

QuadraticForm quarter_step_bracket(double H) {
  const double c = std::exp2(2.0 * H - 1.0);
  return {{1.0, 0.0, 1.0},       {-(c + 1.0), 0.0, 0.5},
          {-(c + 1.0), 0.5, 1.0}, {c, 0.0, 0.25},
          {c, 0.25, 0.5},        {c, 0.5, 0.75},
          {c, 0.75, 1.0}};
}

double rho_prime(double H, int m) {
  if (!(H > 0.0 && H < 1.0)) throw ParameterError("rho_prime: H in (0,1)");
  if (m < 0) throw ParameterError("rho_prime: m must be >= 0");
  const QuadraticForm b = half_step_bracket(H);
  return centered_product_expectation(H, b, shift_form(b, m));
}

double rho_double_prime(double H, int m) {
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("rho_double_prime: H in (0,1)");
  if (m < 0) throw ParameterError("rho_double_prime: m must be >= 0");
  const QuadraticForm b = quarter_step_bracket(H);
  return centered_product_expectation(H, b, shift_form(b, m));
}

namespace {

// rho_0 + 2 sum_{m>=1} rho_m for the bracket's lagged correlations, where
// rho_m = 2 sum_{ij} c_i c_j f_{ij}(m)^2 and f_{ij}(m) is the increment
// covariance between term i of the bracket and term j shifted by m.  Lags up
// to M are evaluated exactly; beyond M each f is expanded as
// (1/2) sum_{alpha>=2} C(2H,alpha) G_alpha m^{2H-alpha} with
// G_alpha = (u-t)^alpha + (v-s)^alpha - (v-t)^alpha - (u-s)^alpha for terms
// on (s,t) and (u,v), products of two expansions are summed with Hurwitz
// zeta values, and the neglected orders are bounded rigorously.
SeriesEvaluation bracket_correlation_sum(double H, const QuadraticForm& form,
                                         double tol) {
  if (!(4.0 - 4.0 * H > 1.0))
    throw RegimeError(
        "bracket_correlation_sum: series diverges for H >= 3/4");
  constexpr int kMaxOrder = 16;  // expansion orders alpha = 2..kMaxOrder
  const double kappa = std::abs(binom_real(2.0 * H, 2));
  const std::size_t nterms = form.size();

  // Per-pair expansion coefficients A_alpha and the largest endpoint offset.
  struct PairExpansion {
    double weight;                 // c_i * c_j
    double span;                   // max |offset| entering the expansion
    std::vector<double> a;         // A_2..A_kMaxOrder
  };
  std::vector<PairExpansion> pairs;
  pairs.reserve(nterms * nterms);
  for (const auto& x : form)
    for (const auto& y : form) {
      PairExpansion p;
      p.weight = x.coeff * y.coeff;
      const double d1 = y.s - x.t, d2 = y.t - x.s, d3 = y.t - x.t,
                   d4 = y.s - x.s;
      p.span = std::max(std::max(std::abs(d1), std::abs(d2)),
                        std::max(std::abs(d3), std::abs(d4)));
      p.a.resize(kMaxOrder + 1, 0.0);
      for (int alpha = 2; alpha <= kMaxOrder; ++alpha)
        p.a[alpha] = 0.5 * binom_real(2.0 * H, alpha) *
                     (ipow(d1, alpha) + ipow(d2, alpha) - ipow(d3, alpha) -
                      ipow(d4, alpha));
      pairs.push_back(std::move(p));
    }

  for (int M = 64; M <= (1 << 16); M *= 2) {
    // Rigorous bound for the orders > kMaxOrder+2 dropped from each product:
    // |A_alpha| <= 2 kappa span^alpha, so the dropped coefficient at order t
    // is at most 4 kappa^2 (t-3) span^t, and zeta(t-4H, M+1) <=
    // (M+1)^{4H-t} (1 + (M+1)/(t-4H-1)).
    double remainder = 0.0;
    for (const auto& p : pairs) {
      const double x = p.span / (M + 1.0);
      if (x <= 0.0) continue;
      const double geom = std::pow(x, kMaxOrder + 3) *
                          (kMaxOrder / (1.0 - x) + x / ((1.0 - x) * (1.0 - x)));
      const double zeta_factor =
          std::pow(M + 1.0, 4.0 * H) *
          (1.0 + (M + 1.0) / (kMaxOrder + 3.0 - 4.0 * H - 1.0));
      remainder += std::abs(p.weight) * 4.0 * kappa * kappa * geom * zeta_factor;
    }
    remainder *= 2.0 * 2.0;  // the 2 of Wick and the 2 of the two-sided sum
    if (remainder > tol) continue;

    double direct = 0.0;  // sum_{m=1}^{M} rho_m
    for (int m = 1; m <= M; ++m) {
      const QuadraticForm shifted = shift_form(form, m);
      direct += centered_product_expectation(H, form, shifted);
    }
    double tail = 0.0;  // sum_{m>M} rho_m via zeta-summed product expansions
    for (const auto& p : pairs) {
      double pair_tail = 0.0;
      for (int t = 4; t <= kMaxOrder + 2; ++t) {
        double pt = 0.0;
        for (int alpha = std::max(2, t - kMaxOrder);
             alpha <= std::min(kMaxOrder, t - 2); ++alpha)
          pt += p.a[alpha] * p.a[t - alpha];
        if (pt != 0.0)
          pair_tail += pt * hurwitz_zeta(t - 4.0 * H, M + 1.0);
      }
      tail += 2.0 * p.weight * pair_tail;
    }
    SeriesEvaluation out;
    out.value = centered_product_expectation(H, form, form) +
                2.0 * (direct + tail);
    out.truncation_lag = M;
    out.tail_bound = remainder;
    return out;
  }
  throw ResolutionError(
      "bracket_correlation_sum: could not certify the requested tolerance");
}

}  // namespace

SeriesEvaluation sigma_prime_H(double H, double tol) {
  if (!(H > 0.0 && H < 0.75))
    throw RegimeError("sigma_prime_H: computable only for H in (0,3/4)");
  if (!(tol > 0.0)) throw ParameterError("sigma_prime_H: tol must be > 0");
  SeriesEvaluation s = bracket_correlation_sum(H, half_step_bracket(H), tol);
  if (s.value < 0.0)
    throw ResolutionError(
        "sigma_prime_H: negative variance after truncation");
  s.value = std::sqrt(s.value) / (2.0 * kLog2);
  return s;
}

SeriesEvaluation sigma_double_prime_H(double H, double T, double tol, double a,
                                      double b) {
  if (!(T > 0.0)) throw ParameterError("sigma_double_prime_H: T must be > 0");
  if (H == 0.5)
    throw RegimeError("sigma_double_prime_H: pole at H = 1/2");
  if (!(H > 0.0 && H < 0.75))
    throw RegimeError("sigma_double_prime_H: H must lie in (0,3/4)");
  if (H < 0.5) {
    SeriesEvaluation s =
        bracket_correlation_sum(H, quarter_step_bracket(H), tol);
    if (s.value < 0.0)
      throw ResolutionError(
          "sigma_double_prime_H: negative variance after truncation");
    s.value = std::sqrt(s.value) / ((std::exp2(2.0 - 2.0 * H) - 2.0) * kLog2);
    return s;
  }
  if (!(a > 0.0 && b > 0.0))
    throw ParameterError(
        "sigma_double_prime_H: the high regime needs a > 0 and b > 0");
  const double ratio = b / a;
  const double denom = 1.0 - std::exp2(1.0 - 2.0 * H);
  const double variance = (1.0 + std::exp2(4.0 * H - 3.0)) * ratio * ratio *
                          ratio * ratio * std::pow(T, 2.0 - 4.0 * H) /
                          (4.0 * denom * denom * kLog2 * kLog2);
  return {std::sqrt(variance), 0, 0.0};
}

double high_regime_variance_alt(double H, double T) {
  if (!(H > 0.5 && H < 0.75))
    throw ParameterError(
        "high_regime_variance_alt: H must lie in (1/2,3/4)");
  if (!(T > 0.0))
    throw ParameterError("high_regime_variance_alt: T must be > 0");
  return (std::exp2(4.0 * H - 1.0) + 1.0) * std::pow(T, 1.0 - 2.0 * H) /
         ((2.0 - std::exp2(2.0 - 2.0 * H)) * kLog2);
}

double tilde_H_bias(double H, double a, double b, double T, int k) {
  if (!(a > 0.0)) throw ParameterError("tilde_H_bias: a must be > 0");
  if (!(b >= 0.0)) throw ParameterError("tilde_H_bias: b must be >= 0");
  if (!(T > 0.0)) throw ParameterError("tilde_H_bias: T must be > 0");
  return (1.0 - std::exp2(2.0 * H - 1.0)) * (b * b) / (a * a) *
         std::pow(T, 1.0 - 2.0 * H) * std::exp2(k * (2.0 * H - 1.0));
}

}  // namespace mixedvar
