#pragma once

#include <filesystem>
#include <vector>

#include "mixedvar/model.hpp"

namespace mixedvar {

struct MixedVariationSpec {
  unsigned p = 0;  // Wiener-increment exponent
  unsigned r = 0;  // fBm-increment exponent
};

enum class VariationKind { quadratic, quartic };

// Power variation of one path at dyadic resolutions 2^k, k = k_min..k_max:
// values[k - k_min] = sum over the 2^k coarse increments of the increment
// squared (quadratic) or to the fourth power (quartic).
struct VariationLadder {
  VariationKind kind = VariationKind::quadratic;
  double T = 1.0;
  int k_min = 0;
  std::vector<double> values;

  int k_max() const { return k_min + static_cast<int>(values.size()) - 1; }
  bool has(int k) const { return k >= k_min && k <= k_max(); }
  double at(int k) const;  // throws on missing level
};

// sum_i (dW_i)^p (dB_i)^r over the shared grid.  Grids must agree in n and T.
double mixed_variation(const GridPath& w, const GridPath& bh,
                       MixedVariationSpec spec);

// Centered sum S_n = sum_i (n^(rH + p/2) (dW_i)^p (dB_i)^r - mu_p mu_r),
// defined on the unit horizon.  Paths on [0,T] with T != 1 are first mapped
// to [0,1] by self-similarity (dW / sqrt(T), dB / T^H), so the statistic is
// always the unit-horizon one.
double centered_sum(const GridPath& w, const GridPath& bh,
                    MixedVariationSpec spec, double H);

// Coarse levels are produced by subsampling the single observed path; the
// path must satisfy n >= 2^k_max and 2^k_max | n.
VariationLadder power_variation_ladder(const GridPath& path,
                                       VariationKind kind, int k_min,
                                       int k_max);

// Quadratic kind: V_{2^k} - V_{2^(k+1)}; quartic kind: V_{2^k} - 2 V_{2^(k+1)}.
double dyadic_difference(const VariationLadder& ladder, int k);

// Z_k = 2^(k/2) U_k / (b^2 T) on a quadratic ladder.
double z_statistic(const VariationLadder& ladder, int k, double b, double T);

// CSV "k,value" with one row per level.
void write_ladder_csv(const VariationLadder& ladder,
                      const std::filesystem::path& file);
// CSV "k,z" for k = k_lo..k_hi (k+1 must be on the ladder).
void write_z_csv(const VariationLadder& ladder, int k_lo, int k_hi, double b,
                 const std::filesystem::path& file);

}  // namespace mixedvar
