#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mixedvar/model.hpp"
#include "mixedvar/variation.hpp"

namespace mixedvar {

enum class EstimatorId {
  hat_H,      // 1/2 (1 - log2(V_{2^k}) / k)
  tilde_H,    // 1/2 (log2(V_{2^k} / V_{2^(k+1)}) + 1)
  tilde_H2,   // 1/2 (log2+(U_k / U_(k+1)) + 1)
  hat_H2,     // 1/2 (1 - log2+(U_k) / k)
  hat_H4,     // -log2+(U4_k) / (2k)
  tilde_H4,   // 1/2 log2+(U4_k / U4_(k+1))
  bar_H2,     // regression on log2+(U_j), slope -> (1 - slope)/2
  bar_H4,     // regression on log2+(U4_j), slope -> -slope/2
  tilde_a2,   // 2^(k(2H~-1)) T^(-2H~) V_{2^k}
  tilde_b2,   // (2^(1-2H~2) V_{2^k} - V_{2^(k+1)}) / ((2^(1-2H~2)-1) T)
  hat_a2,     // 2^(k(2H~2-1)) T^(-2H~2) (1-2^(1-2H~2))^(-1) U_k
  hat_b2,     // V_{2^k} / T
  hat_H_a,    // (k + 2 log2 a - log2 V_{2^k}) / (2(k - log2 T))
  tilde_H_b,  // 1/2 (log2+((V_{2^k}-b^2 T)/(V_{2^(k+1)}-b^2 T)) + 1)
  hat_H_ab,   // (k + 2 log2 a - log2+(V_{2^k}-b^2 T)) / (2(k - log2 T))
};

std::string_view estimator_name(EstimatorId id);
std::optional<EstimatorId> estimator_from_name(std::string_view name);

// H-interval (union of up to two open intervals) on which the estimator is
// provably consistent.  Metadata only: estimators still compute outside it.
struct ValidRange {
  std::array<std::pair<double, double>, 2> intervals{};
  std::size_t count = 0;

  bool contains(double H) const;
  std::string str() const;  // e.g. "(0,0.5)" or "(0,0.5)u(0.5,0.75)"
};

struct EstimateRecord {
  EstimatorId id = EstimatorId::hat_H;
  int k = 0;  // level used; window start for the regression estimators
  double estimate = 0.0;
  std::optional<double> asymptotic_sd;
  bool degenerate = false;  // a log2+ fallback (or negative scale) fired
  ValidRange valid_range;
};

// --- Hurst estimators on a quadratic ladder ---------------------------------
EstimateRecord hat_H(const VariationLadder& ladder, int k);
EstimateRecord tilde_H(const VariationLadder& ladder, int k);
EstimateRecord tilde_H2(const VariationLadder& ladder, int k);
EstimateRecord hat_H2(const VariationLadder& ladder, int k);

// --- Hurst estimators on a quartic ladder: (hat_H4, tilde_H4) ---------------
std::pair<EstimateRecord, EstimateRecord> quartic_estimators(
    const VariationLadder& quartic_ladder, int k);

// --- log-log regression over dyadic-difference levels -----------------------
struct RegressionConfig {
  std::vector<int> window_starts;  // candidate lowest levels m
  int k_top = 19;                  // highest level included in every window
};
// Defaults: quadratic windows m = 11..15, quartic m = 11..16, k_top = 19.
RegressionConfig default_regression_config(VariationKind kind);
// Fits log2+(U_j) on j = m..k_top per window, picks the window with maximal
// R^2.  Quadratic ladder yields bar_H2, quartic yields bar_H4; record.k is
// the chosen window start.
EstimateRecord regression_H(const VariationLadder& ladder,
                            const RegressionConfig& config);

// --- scale estimators --------------------------------------------------------
// Records carry squared scales (a^2, b^2).  tilde_b2 may be negative; it is
// returned as-is with the degenerate flag set.  tilde_H2_k == 1/2 is a pole.
std::pair<EstimateRecord, EstimateRecord> scale_estimators_low(
    const VariationLadder& ladder, int k, double tilde_H_k, double tilde_H2_k);
std::pair<EstimateRecord, EstimateRecord> scale_estimators_low(
    const VariationLadder& ladder, int k);
std::pair<EstimateRecord, EstimateRecord> scale_estimators_high(
    const VariationLadder& ladder, int k, double tilde_H2_k);
std::pair<EstimateRecord, EstimateRecord> scale_estimators_high(
    const VariationLadder& ladder, int k);
// Single members: the fBm scale in the low regime needs only tilde_H, and
// the Wiener scale in the high regime needs no Hurst input at all, so both
// stay computable where the paired inversion hits the tilde_H2 pole.
EstimateRecord tilde_a2(const VariationLadder& ladder, int k);
EstimateRecord hat_b2(const VariationLadder& ladder, int k);

// --- known-coefficient estimators --------------------------------------------
enum class KnownCoefficient { a, b, a_and_b };
EstimateRecord known_coefficient_estimator(const VariationLadder& ladder,
                                           int k, KnownCoefficient known,
                                           const ModelParams& params);

// --- regime classifier --------------------------------------------------------
enum class Regime { H_below_3_4, H_above_3_4, inconclusive };

struct RegimeVerdict {
  Regime verdict = Regime::inconclusive;
  double evidence = 0.0;  // fraction of negative U_k over the window
  int k_lo = 0, k_hi = 0;
  double z_mean = 0.0;  // mean of Z_k over the window with b^2 = V_{2^(k_hi+1)}/T
};

// Decision rule over the window [k_lo, k_hi] (>= 6 levels; the ladder must
// also hold level k_hi + 1):
//   1. no negative U_k            -> H_below_3_4
//   2. at least half negative     -> H_above_3_4
//   3. otherwise                  -> H_below_3_4 iff mean_k Z_k >= 0.78,
// where Z_k uses the plug-in scale b^2 = V_{2^(k_hi+1)}/T.  Under H < 3/4 the
// Z_k grow like 2^(k(3/2-2H)) while under H > 3/4 they form an approximately
// standard Gaussian stationary sequence, so the mean separates the regimes
// far better than the negative-count alone; 0.78 balances the two error
// rates.  `inconclusive` is reserved for callers that cannot run the rule.
RegimeVerdict classify_regime(const VariationLadder& ladder, int k_lo,
                              int k_hi);

// Plug-in asymptotic sd, using `record.estimate` in place of the unknown H:
//   tilde_H   -> sigma'_H 2^(-k/2)                       (H in (0,3/4), H != 1/2)
//   tilde_H2  -> sigma''_H 2^(-k/2)                      (H in (0,1/2))
//             -> sigma''_{H,T,a,b} 2^(-k(3/2-2H))        (H in (1/2,3/4); needs a, b)
// Leaves the field unset when the plug-in value lies outside the computable
// domain or required scales are missing.
void attach_asymptotic_sd(EstimateRecord& record, double T,
                          std::optional<double> a = std::nullopt,
                          std::optional<double> b = std::nullopt);

// --- export -------------------------------------------------------------------
std::string estimate_to_json(const EstimateRecord& record);
std::string estimates_to_json(const std::vector<EstimateRecord>& records);
// CSV "estimator,k,estimate,sd,degenerate" (sd empty when absent).
std::string estimates_to_csv(const std::vector<EstimateRecord>& records);

}  // namespace mixedvar
