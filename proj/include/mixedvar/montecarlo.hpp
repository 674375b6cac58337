#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixedvar/estimators.hpp"
#include "mixedvar/model.hpp"

namespace mixedvar {

// One requested table cell: an estimator at a level.  For the regression
// estimators (bar_H2 / bar_H4) the level is ignored and the default window
// configuration of their kind applies.
struct EstimatorSpec {
  EstimatorId id = EstimatorId::tilde_H;
  int k = 19;
};

struct ExperimentConfig {
  std::vector<ModelParams> params_grid;
  std::size_t n = std::size_t{1} << 20;
  int replications = 10;
  std::uint64_t seed = 0;
  std::vector<EstimatorSpec> estimators;
  int workers = 0;  // 0 -> MIXEDVAR_WORKERS env var, else hardware threads
  // First replication index; summaries over disjoint index ranges with the
  // same seed combine exactly into the summary over the union.
  std::uint64_t replication_offset = 0;
  bool retain_values = false;
};

// Aggregate of one (model-parameters, estimator) cell.  For H estimators,
// `mu`/`delta` average the estimate and |estimate - H| over all replications
// that evaluated without error (degenerate log2+ records included, counted).
// For the squared-scale estimators the table-facing value is the square
// root, so mu/delta average sqrt(estimate) and |sqrt(estimate) - truth| over
// the replications with a nonnegative estimate; negative squares count as
// degenerate and are excluded from mu/delta.
struct McCell {
  std::size_t params_index = 0;
  EstimatorId id = EstimatorId::tilde_H;
  int k = 0;
  double truth = 0.0;  // H, a or b depending on the estimator
  double mu = 0.0;
  double delta = 0.0;
  int used = 0;        // replications entering mu/delta
  int degenerate = 0;  // flagged records (including excluded scale records)
  int errors = 0;      // replications where evaluation threw
  std::string first_error;
  std::vector<double> values;  // per replication when retain_values is set
};

struct McSummary {
  ExperimentConfig config;
  std::vector<McCell> cells;  // params-grid major, estimator minor
};

// Runs the replication harness: for each parameter set and replication,
// simulate one mixed path, build the quadratic (and, when needed, quartic)
// ladders, evaluate every requested estimator, and fold the results in
// replication-index order.  The result depends only on (config contents,
// seed), never on the worker count.
McSummary run_table(const ExperimentConfig& config);

// Merge summaries over adjacent replication ranges of the same experiment
// (identical grid, n, seed, estimators, retain_values; rhs must continue
// where lhs stopped).  With retained values the pooled moments are recomputed
// from the concatenated per-replication values, so the merge reproduces a
// single run over the union bit for bit; without them the means are combined
// by used-count weighting.  Throws ParameterError on any layout mismatch.
McSummary merge_summaries(const McSummary& lhs, const McSummary& rhs);

std::string summary_to_json(const McSummary& summary);
// Paper-style layout: one column per parameter set, two rows (mu, delta) per
// estimator, plus degenerate/error counts.
std::string summary_to_csv(const McSummary& summary);

// --- central limit checks ------------------------------------------------------

struct CltReport {
  double H = 0.5;
  int p = 0, r = 0;
  std::size_t n = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  // "sqrt_n", "sqrt_n_log_n" or "n_H": the normalizer applied to S_n.
  std::string normalizer;
  double sample_variance = 0.0;
  double theoretical_variance = 0.0;
  double ks_distance = 0.0;
  double ks_critical_1pct = 0.0;
  bool gaussian_limit = true;
  // Scaling-only mode: Var(n^{1-2H} S_n) per dyadic level (H > 3/4).
  std::vector<std::size_t> scaling_ns;
  std::vector<double> scaling_variances;
};

// Samples the normalized centered sum S^{H,p,r}_n across replications and
// compares the sample variance with the analytic limit variance, plus a
// Kolmogorov-Smirnov distance against the limit normal law.  Regimes:
//   r = 0                         n^{-1/2},      mu_{2p} - mu_p^2
//   p odd                         n^{-1/2},      mu_{2p} mu_{2r}
//   p, r even, r >= 2, H < 3/4    n^{-1/2},      sigma2_Hr mu_p^2 + sigma2_pr
//   p, r even, r >= 2, H = 3/4    (n ln n)^{-1/2}, critical_limit_variance
//   p even, r odd, H < 1/2        n^{-1/2},      sigma2_Hr mu_p^2 + sigma2_pr
//   p even, r odd, H = 1/2        as above plus mu_p^2 (r!!)^2 (the lag-sum
//                                 of rho_{1/2} is 1, not 0, so the first
//                                 Gaussian-chaos term survives exactly here)
//   p even, r odd, H > 1/2        n^{-H},        mu_p^2 mu_{r+1}^2
// Even p and r with H > 3/4 has a non-Gaussian limit: regime error (use
// rosenblatt_scaling_check).
CltReport clt_check(double H, int p, int r, std::size_t n, int replications,
                    std::uint64_t seed, int workers = 0);

// Scaling-only check for the non-Gaussian regime (p, r even, H > 3/4):
// verifies Var(n^{1-2H} S_n) stabilizes across dyadic n (subsampled from the
// top resolution).
CltReport rosenblatt_scaling_check(double H, int p, int r, std::size_t n,
                                   int replications, std::uint64_t seed,
                                   int workers = 0);

std::string clt_report_to_json(const CltReport& report);

// --- almost-sure rate check ----------------------------------------------------

struct RateReport {
  double H = 0.5;
  int p = 0, r = 0;
  double gamma = 0.5;
  double eps = 0.1;
  int n_levels = 0;
  std::uint64_t seed = 0;
  std::vector<int> levels;          // j with n = 2^j
  std::vector<double> log2_abs_s;   // log2 |S_{2^j}|
  double slope = 0.0;               // OLS slope of log2|S| on j
  double margin = 0.0;              // one-sided 99% Student bound on the slope
  bool pass = false;                // slope <= gamma + eps + margin
};

// One path at n = 2^20 (a = b = 1, T = 1), subsampled at the top n_levels
// dyadic resolutions; |S^{H,p,r}_{2^j}| should grow no faster than
// 2^{j(gamma+eps)} eventually, which the fitted slope checks.  log2|S| noise
// is heavy-tailed toward -inf (near-zero draws), so the margin uses the
// Student t(n_levels - 2) 99% quantile rather than a normal 2-sigma rule.
RateReport rate_check(double H, int p, int r, double gamma, double eps,
                      int n_levels, std::uint64_t seed);

std::string rate_report_to_json(const RateReport& report);

// --- regime classifier validation ----------------------------------------------

struct ClassifierRow {
  double H = 0.0;
  int below = 0;
  int above = 0;
  int inconclusive = 0;
};

struct ClassifierReport {
  std::size_t n = 0;
  int replications = 0;
  int k_lo = 0, k_hi = 0;
  std::uint64_t seed = 0;
  std::vector<ClassifierRow> rows;
};

// Runs classify_regime on fresh simulations (T = 3, a = b = 1) for each H.
ClassifierReport classifier_validation(const std::vector<double>& H_list,
                                       std::size_t n, int replications,
                                       std::uint64_t seed, int k_lo, int k_hi,
                                       int workers = 0);

std::string classifier_report_to_json(const ClassifierReport& report);

// Scaled dyadic differences 10^4 U_k, k = k_lo..k_hi, one simulated path per
// H (T = 3, a = b = 1).
struct UTableReport {
  std::size_t n = 0;
  int k_lo = 0, k_hi = 0;
  std::uint64_t seed = 0;
  std::vector<double> H_list;
  std::vector<std::vector<double>> scaled_u;  // [H index][k - k_lo]
};

UTableReport u_ladder_table(const std::vector<double>& H_list, std::size_t n,
                            std::uint64_t seed, int k_lo, int k_hi);

std::string u_table_to_json(const UTableReport& report);

// --- presets -------------------------------------------------------------------

// Encoded replication protocols matching the six summary tables
// (T = 3, a = b = 1, n = 2^20, 10 replications):
//   table1: H = 0.05..0.45 step 0.05; hat_H@20, tilde_H@19, tilde_H2@18,
//           tilde_a2@19
//   table2: H = 0.525..0.725 step 0.025; hat_H2@19, tilde_H2@18, bar_H2,
//           hat_b2@20
//   table4: same H grid; hat_H4@19, tilde_H4@18, bar_H4  (quartic ladder)
//   table5: H = 0.05..0.45 step 0.05; hat_H_a@20, hat_H_ab@20
//   table6: H = 0.5..0.725 step 0.025; tilde_H_b@19, hat_H_ab@20
// table3 is the sign table of scaled U_k values (see u_ladder_table); the
// CLI maps it there.
ExperimentConfig table_preset(const std::string& name, std::uint64_t seed,
                              int workers);

// Resolve an effective worker count: explicit > 0 wins, else the
// MIXEDVAR_WORKERS environment variable, else the hardware thread count.
int resolve_workers(int requested);

}  // namespace mixedvar
