#include "mixedvar/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mixedvar/asymptotics.hpp"
#include "mixedvar/errors.hpp"
#include "mixedvar/numerics.hpp"

namespace mixedvar {

namespace {

struct IdName {
  EstimatorId id;
  std::string_view name;
};

constexpr IdName kIdNames[] = {
    {EstimatorId::hat_H, "hat_H"},       {EstimatorId::tilde_H, "tilde_H"},
    {EstimatorId::tilde_H2, "tilde_H2"}, {EstimatorId::hat_H2, "hat_H2"},
    {EstimatorId::hat_H4, "hat_H4"},     {EstimatorId::tilde_H4, "tilde_H4"},
    {EstimatorId::bar_H2, "bar_H2"},     {EstimatorId::bar_H4, "bar_H4"},
    {EstimatorId::tilde_a2, "tilde_a2"}, {EstimatorId::tilde_b2, "tilde_b2"},
    {EstimatorId::hat_a2, "hat_a2"},     {EstimatorId::hat_b2, "hat_b2"},
    {EstimatorId::hat_H_a, "hat_H_a"},   {EstimatorId::tilde_H_b, "tilde_H_b"},
    {EstimatorId::hat_H_ab, "hat_H_ab"},
};

ValidRange range1(double lo, double hi) {
  ValidRange r;
  r.intervals[0] = {lo, hi};
  r.count = 1;
  return r;
}

ValidRange range2(double lo1, double hi1, double lo2, double hi2) {
  ValidRange r;
  r.intervals[0] = {lo1, hi1};
  r.intervals[1] = {lo2, hi2};
  r.count = 2;
  return r;
}

const ValidRange kLowRange = range1(0.0, 0.5);
const ValidRange kSplitRange = range2(0.0, 0.5, 0.5, 0.75);
const ValidRange kQuarticRange = range1(0.5, 0.75);
const ValidRange kUpperRange = range1(0.5, 1.0);

void require_quadratic(const VariationLadder& ladder, std::string_view who) {
  if (ladder.kind != VariationKind::quadratic)
    throw ParameterError(std::string(who) + ": quadratic ladder required");
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view estimator_name(EstimatorId id) {
  for (const auto& e : kIdNames)
    if (e.id == id) return e.name;
  return "unknown";
}

std::optional<EstimatorId> estimator_from_name(std::string_view name) {
  for (const auto& e : kIdNames)
    if (e.name == name) return e.id;
  return std::nullopt;
}

bool ValidRange::contains(double H) const {
  for (std::size_t i = 0; i < count; ++i)
    if (H > intervals[i].first && H < intervals[i].second) return true;
  return false;
}

std::string ValidRange::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) out << 'u';
    out << '(' << intervals[i].first << ',' << intervals[i].second << ')';
  }
  return out.str();
}

EstimateRecord hat_H(const VariationLadder& ladder, int k) {
  require_quadratic(ladder, "hat_H");
  if (k < 1) throw ParameterError("hat_H: k must be >= 1");
  const double v = ladder.at(k);
  EstimateRecord rec;
  rec.id = EstimatorId::hat_H;
  rec.k = k;
  rec.degenerate = !(v > 0.0);
  rec.estimate = 0.5 * (1.0 - log2_plus(v) / k);
  rec.valid_range = kLowRange;
  return rec;
}

EstimateRecord tilde_H(const VariationLadder& ladder, int k) {
  require_quadratic(ladder, "tilde_H");
  const double vk = ladder.at(k);
  const double vk1 = ladder.at(k + 1);
  EstimateRecord rec;
  rec.id = EstimatorId::tilde_H;
  rec.k = k;
  rec.degenerate = !(vk > 0.0 && vk1 > 0.0);
  rec.estimate = 0.5 * ((rec.degenerate ? 0.0 : std::log2(vk / vk1)) + 1.0);
  rec.valid_range = kLowRange;
  return rec;
}

EstimateRecord tilde_H2(const VariationLadder& ladder, int k) {
  require_quadratic(ladder, "tilde_H2");
  const double uk = dyadic_difference(ladder, k);
  const double uk1 = dyadic_difference(ladder, k + 1);
  EstimateRecord rec;
  rec.id = EstimatorId::tilde_H2;
  rec.k = k;
  // The log2+ convention applies to the ratio.  Below H = 1/2 both levels are
  // eventually negative and the ratio still carries the signal, so the value
  // is kept; the flag records that a sign was nonpositive.
  rec.degenerate = !(uk > 0.0 && uk1 > 0.0);
  const double ratio = uk1 != 0.0 ? uk / uk1 : 0.0;
  rec.estimate = 0.5 * (log2_plus(ratio) + 1.0);
  rec.valid_range = kSplitRange;
  return rec;
}

EstimateRecord hat_H2(const VariationLadder& ladder, int k) {
  require_quadratic(ladder, "hat_H2");
  if (k < 1) throw ParameterError("hat_H2: k must be >= 1");
  const double uk = dyadic_difference(ladder, k);
  EstimateRecord rec;
  rec.id = EstimatorId::hat_H2;
  rec.k = k;
  rec.degenerate = !(uk > 0.0);
  rec.estimate = 0.5 * (1.0 - log2_plus(uk) / k);
  rec.valid_range = kSplitRange;
  return rec;
}

std::pair<EstimateRecord, EstimateRecord> quartic_estimators(
    const VariationLadder& quartic_ladder, int k) {
  if (quartic_ladder.kind != VariationKind::quartic)
    throw ParameterError("quartic_estimators: quartic ladder required");
  if (k < 1) throw ParameterError("quartic_estimators: k must be >= 1");
  const double uk = dyadic_difference(quartic_ladder, k);
  const double uk1 = dyadic_difference(quartic_ladder, k + 1);

  EstimateRecord hat;
  hat.id = EstimatorId::hat_H4;
  hat.k = k;
  hat.degenerate = !(uk > 0.0);
  hat.estimate = -log2_plus(uk) / (2.0 * k);
  hat.valid_range = kQuarticRange;

  EstimateRecord tilde;
  tilde.id = EstimatorId::tilde_H4;
  tilde.k = k;
  tilde.degenerate = !(uk > 0.0 && uk1 > 0.0);
  tilde.estimate = 0.5 * log2_plus(uk1 != 0.0 ? uk / uk1 : 0.0);
  tilde.valid_range = kQuarticRange;
  return {hat, tilde};
}

RegressionConfig default_regression_config(VariationKind kind) {
  RegressionConfig config;
  const int last = kind == VariationKind::quadratic ? 15 : 16;
  for (int m = 11; m <= last; ++m) config.window_starts.push_back(m);
  config.k_top = 19;
  return config;
}

EstimateRecord regression_H(const VariationLadder& ladder,
                            const RegressionConfig& config) {
  if (config.window_starts.empty())
    throw ParameterError("regression_H: no candidate windows");
  bool found = false;
  LinearFit best{};
  int best_m = 0;
  bool best_degenerate = false;
  for (int m : config.window_starts) {
    if (m > config.k_top - 2)
      throw ParameterError("regression_H: window needs at least 3 levels");
    std::vector<double> xs, ys;
    bool any_positive = false, any_nonpositive = false;
    for (int j = m; j <= config.k_top; ++j) {
      const double u = dyadic_difference(ladder, j);
      (u > 0.0 ? any_positive : any_nonpositive) = true;
      xs.push_back(static_cast<double>(j));
      ys.push_back(log2_plus(u));
    }
    if (!any_positive) continue;  // window carries no signal at all
    const LinearFit fit = ols_fit(xs, ys);
    if (!found || fit.r2 > best.r2) {
      found = true;
      best = fit;
      best_m = m;
      best_degenerate = any_nonpositive;
    }
  }
  if (!found)
    throw ResolutionError(
        "regression_H: inconclusive (every window had only nonpositive "
        "differences)");
  EstimateRecord rec;
  rec.id = ladder.kind == VariationKind::quadratic ? EstimatorId::bar_H2
                                                   : EstimatorId::bar_H4;
  rec.k = best_m;
  rec.degenerate = best_degenerate;
  rec.estimate = ladder.kind == VariationKind::quadratic
                     ? 0.5 * (1.0 - best.slope)
                     : -0.5 * best.slope;
  rec.valid_range =
      ladder.kind == VariationKind::quadratic ? kSplitRange : kQuarticRange;
  return rec;
}

namespace {

EstimateRecord tilde_a2_record(const VariationLadder& ladder, int k,
                               double tilde_H_k) {
  EstimateRecord a2;
  a2.id = EstimatorId::tilde_a2;
  a2.k = k;
  a2.estimate = std::exp2(k * (2.0 * tilde_H_k - 1.0)) *
                std::pow(ladder.T, -2.0 * tilde_H_k) * ladder.at(k);
  a2.valid_range = kLowRange;
  return a2;
}

EstimateRecord hat_b2_record(const VariationLadder& ladder, int k) {
  EstimateRecord b2;
  b2.id = EstimatorId::hat_b2;
  b2.k = k;
  b2.estimate = ladder.at(k) / ladder.T;
  b2.valid_range = kUpperRange;
  return b2;
}

}  // namespace

std::pair<EstimateRecord, EstimateRecord> scale_estimators_low(
    const VariationLadder& ladder, int k, double tilde_H_k,
    double tilde_H2_k) {
  require_quadratic(ladder, "scale_estimators_low");
  const double T = ladder.T;
  const double vk = ladder.at(k);
  const double vk1 = ladder.at(k + 1);

  EstimateRecord a2 = tilde_a2_record(ladder, k, tilde_H_k);

  const double w = std::exp2(1.0 - 2.0 * tilde_H2_k);
  if (w == 1.0)
    throw RegimeError(
        "scale_estimators_low: tilde_H2 = 1/2 makes the b^2 denominator "
        "vanish");
  EstimateRecord b2;
  b2.id = EstimatorId::tilde_b2;
  b2.k = k;
  b2.estimate = (w * vk - vk1) / ((w - 1.0) * T);
  b2.degenerate = b2.estimate < 0.0;
  b2.valid_range = kLowRange;
  return {a2, b2};
}

std::pair<EstimateRecord, EstimateRecord> scale_estimators_low(
    const VariationLadder& ladder, int k) {
  return scale_estimators_low(ladder, k, tilde_H(ladder, k).estimate,
                              tilde_H2(ladder, k).estimate);
}

std::pair<EstimateRecord, EstimateRecord> scale_estimators_high(
    const VariationLadder& ladder, int k, double tilde_H2_k) {
  require_quadratic(ladder, "scale_estimators_high");
  const double T = ladder.T;
  const double uk = dyadic_difference(ladder, k);

  const double w = std::exp2(1.0 - 2.0 * tilde_H2_k);
  if (w == 1.0)
    throw RegimeError(
        "scale_estimators_high: tilde_H2 = 1/2 makes the a^2 denominator "
        "vanish");
  EstimateRecord a2;
  a2.id = EstimatorId::hat_a2;
  a2.k = k;
  a2.estimate = std::exp2(k * (2.0 * tilde_H2_k - 1.0)) *
                std::pow(T, -2.0 * tilde_H2_k) * uk / (1.0 - w);
  a2.degenerate = a2.estimate < 0.0;
  a2.valid_range = kSplitRange;

  return {a2, hat_b2_record(ladder, k)};
}

std::pair<EstimateRecord, EstimateRecord> scale_estimators_high(
    const VariationLadder& ladder, int k) {
  return scale_estimators_high(ladder, k, tilde_H2(ladder, k).estimate);
}

EstimateRecord tilde_a2(const VariationLadder& ladder, int k) {
  require_quadratic(ladder, "tilde_a2");
  return tilde_a2_record(ladder, k, tilde_H(ladder, k).estimate);
}

EstimateRecord hat_b2(const VariationLadder& ladder, int k) {
  require_quadratic(ladder, "hat_b2");
  return hat_b2_record(ladder, k);
}

EstimateRecord known_coefficient_estimator(const VariationLadder& ladder,
                                           int k, KnownCoefficient known,
                                           const ModelParams& params) {
  require_quadratic(ladder, "known_coefficient_estimator");
  const double T = ladder.T;
  const double log2T = std::log2(T);
  EstimateRecord rec;
  rec.k = k;
  switch (known) {
    case KnownCoefficient::a: {
      if (!(params.a > 0.0))
        throw ParameterError("known_coefficient_estimator: a must be known");
      if (static_cast<double>(k) == log2T)
        throw ParameterError(
            "known_coefficient_estimator: k = log2 T makes the denominator "
            "vanish");
      const double vk = ladder.at(k);
      rec.id = EstimatorId::hat_H_a;
      rec.degenerate = !(vk > 0.0);
      rec.estimate = (k + 2.0 * std::log2(params.a) - log2_plus(vk)) /
                     (2.0 * (k - log2T));
      rec.valid_range = kLowRange;
      return rec;
    }
    case KnownCoefficient::b: {
      if (!(params.b > 0.0))
        throw ParameterError("known_coefficient_estimator: b must be known");
      const double num = ladder.at(k) - params.b * params.b * T;
      const double den = ladder.at(k + 1) - params.b * params.b * T;
      rec.id = EstimatorId::tilde_H_b;
      rec.degenerate = !(num > 0.0 && den > 0.0);
      rec.estimate = 0.5 * (log2_plus(den != 0.0 ? num / den : 0.0) + 1.0);
      rec.valid_range = range1(0.0, 0.75);
      return rec;
    }
    case KnownCoefficient::a_and_b: {
      if (!(params.a > 0.0) || !(params.b > 0.0))
        throw ParameterError(
            "known_coefficient_estimator: a and b must be known");
      if (static_cast<double>(k) == log2T)
        throw ParameterError(
            "known_coefficient_estimator: k = log2 T makes the denominator "
            "vanish");
      const double diff = ladder.at(k) - params.b * params.b * T;
      rec.id = EstimatorId::hat_H_ab;
      rec.degenerate = !(diff > 0.0);
      rec.estimate = (k + 2.0 * std::log2(params.a) - log2_plus(diff)) /
                     (2.0 * (k - log2T));
      rec.valid_range = range1(0.0, 0.75);
      return rec;
    }
  }
  throw ParameterError("known_coefficient_estimator: bad selector");
}

RegimeVerdict classify_regime(const VariationLadder& ladder, int k_lo,
                              int k_hi) {
  require_quadratic(ladder, "classify_regime");
  if (k_hi - k_lo + 1 < 6)
    throw ParameterError("classify_regime: window must span >= 6 levels");
  if (!ladder.has(k_lo) || !ladder.has(k_hi + 1))
    throw ResolutionError("classify_regime: ladder must cover the window "
                          "plus one level");
  RegimeVerdict verdict;
  verdict.k_lo = k_lo;
  verdict.k_hi = k_hi;
  const int count = k_hi - k_lo + 1;
  int negatives = 0;
  for (int k = k_lo; k <= k_hi; ++k)
    if (dyadic_difference(ladder, k) < 0.0) ++negatives;
  verdict.evidence = static_cast<double>(negatives) / count;

  if (negatives == 0) {
    verdict.verdict = Regime::H_below_3_4;
    return verdict;
  }
  if (2 * negatives >= count) {
    verdict.verdict = Regime::H_above_3_4;
    // z_mean still reported below for diagnostics.
  }
  const double plug_b2T = ladder.at(k_hi + 1);  // b^2 T estimated at the top
  double zsum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k)
    zsum += std::exp2(0.5 * k) * dyadic_difference(ladder, k) / plug_b2T;
  verdict.z_mean = zsum / count;
  if (2 * negatives < count)
    verdict.verdict = verdict.z_mean >= 0.78 ? Regime::H_below_3_4
                                             : Regime::H_above_3_4;
  return verdict;
}

void attach_asymptotic_sd(EstimateRecord& rec, double T,
                          std::optional<double> a, std::optional<double> b) {
  const double h = rec.estimate;
  try {
    switch (rec.id) {
      case EstimatorId::tilde_H:
        if (h > 0.0 && h < 0.75 && h != 0.5)
          rec.asymptotic_sd =
              sigma_prime_H(h).value * std::exp2(-0.5 * rec.k);
        break;
      case EstimatorId::tilde_H2:
        if (h > 0.0 && h < 0.5) {
          rec.asymptotic_sd =
              sigma_double_prime_H(h, T).value * std::exp2(-0.5 * rec.k);
        } else if (h > 0.5 && h < 0.75 && a && b) {
          rec.asymptotic_sd =
              sigma_double_prime_H(h, T, 1e-10, *a, *b).value *
              std::exp2(-rec.k * (1.5 - 2.0 * h));
        }
        break;
      default:
        break;
    }
  } catch (const Error&) {
    // Outside the computable domain: leave the sd unset.
  }
}

namespace {

nlohmann::json record_to_json_object(const EstimateRecord& rec) {
  nlohmann::json j;
  j["estimator"] = std::string(estimator_name(rec.id));
  j["k"] = rec.k;
  j["estimate"] = rec.estimate;
  if (rec.asymptotic_sd)
    j["sd"] = *rec.asymptotic_sd;
  else
    j["sd"] = nullptr;
  j["degenerate"] = rec.degenerate;
  j["valid_range"] = rec.valid_range.str();
  return j;
}

}  // namespace

std::string estimate_to_json(const EstimateRecord& rec) {
  return record_to_json_object(rec).dump();
}

std::string estimates_to_json(const std::vector<EstimateRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rec : records) arr.push_back(record_to_json_object(rec));
  return arr.dump(2);
}

std::string estimates_to_csv(const std::vector<EstimateRecord>& records) {
  std::string out = "estimator,k,estimate,sd,degenerate\n";
  for (const auto& rec : records) {
    out += std::string(estimator_name(rec.id)) + ',' + std::to_string(rec.k) +
           ',' + format_g17(rec.estimate) + ',' +
           (rec.asymptotic_sd ? format_g17(*rec.asymptotic_sd) : "") + ',' +
           (rec.degenerate ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace mixedvar
