#include "mixedvar/variation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "mixedvar/asymptotics.hpp"
#include "mixedvar/errors.hpp"
#include "mixedvar/numerics.hpp"

namespace mixedvar {

namespace {

void require_shared_grid(const GridPath& w, const GridPath& bh) {
  if (w.n != bh.n || w.T != bh.T)
    throw ParameterError("paths must share the grid (same n and T)");
  if (w.n == 0) throw ParameterError("paths must have at least one step");
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double VariationLadder::at(int k) const {
  if (!has(k))
    throw ResolutionError("ladder level " + std::to_string(k) +
                          " not available (have " + std::to_string(k_min) +
                          ".." + std::to_string(k_max()) + ")");
  return values[static_cast<std::size_t>(k - k_min)];
}

double mixed_variation(const GridPath& w, const GridPath& bh,
                       MixedVariationSpec spec) {
  require_shared_grid(w, bh);
  std::vector<double> terms(w.n);
  for (std::size_t i = 0; i < w.n; ++i) {
    const double dw = w.values[i + 1] - w.values[i];
    const double db = bh.values[i + 1] - bh.values[i];
    terms[i] = ipow(dw, spec.p) * ipow(db, spec.r);
  }
  return pairwise_sum(terms);
}

double centered_sum(const GridPath& w, const GridPath& bh,
                    MixedVariationSpec spec, double H) {
  require_shared_grid(w, bh);
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("centered_sum: H must lie in (0,1)");
  const double n = static_cast<double>(w.n);
  // Unit-horizon convention: rescale increments by self-similarity, then the
  // per-term normalizer n^(rH + p/2) factors into the increments.
  const double w_scale = std::sqrt(n / w.T);
  const double b_scale = std::pow(n / bh.T, H);
  const double center = hermite_moment(spec.p) * hermite_moment(spec.r);
  std::vector<double> terms(w.n);
  for (std::size_t i = 0; i < w.n; ++i) {
    const double dw = w_scale * (w.values[i + 1] - w.values[i]);
    const double db = b_scale * (bh.values[i + 1] - bh.values[i]);
    terms[i] = ipow(dw, spec.p) * ipow(db, spec.r) - center;
  }
  return pairwise_sum(terms);
}

VariationLadder power_variation_ladder(const GridPath& path,
                                       VariationKind kind, int k_min,
                                       int k_max) {
  path.validate();
  if (k_min < 0 || k_max < k_min)
    throw ParameterError("power_variation_ladder: need 0 <= k_min <= k_max");
  if (k_max >= 63) throw ParameterError("power_variation_ladder: k_max too large");
  const std::size_t top = std::size_t{1} << k_max;
  if (path.n < top || path.n % top != 0)
    throw ResolutionError(
        "power_variation_ladder: path has n=" + std::to_string(path.n) +
        " but level " + std::to_string(k_max) + " requires n divisible by " +
        std::to_string(top));

  VariationLadder ladder;
  ladder.kind = kind;
  ladder.T = path.T;
  ladder.k_min = k_min;
  ladder.values.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  std::vector<double> terms;
  for (int k = k_min; k <= k_max; ++k) {
    const std::size_t cells = std::size_t{1} << k;
    const std::size_t stride = path.n / cells;
    terms.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
      const double d =
          path.values[(i + 1) * stride] - path.values[i * stride];
      const double d2 = d * d;
      terms[i] = kind == VariationKind::quadratic ? d2 : d2 * d2;
    }
    ladder.values.push_back(pairwise_sum(terms));
  }
  return ladder;
}

double dyadic_difference(const VariationLadder& ladder, int k) {
  const double vk = ladder.at(k);
  const double vk1 = ladder.at(k + 1);
  return ladder.kind == VariationKind::quadratic ? vk - vk1 : vk - 2.0 * vk1;
}

double z_statistic(const VariationLadder& ladder, int k, double b, double T) {
  if (ladder.kind != VariationKind::quadratic)
    throw ParameterError("z_statistic: quadratic ladder required");
  if (!(b > 0.0)) throw ParameterError("z_statistic: b must be positive");
  if (!(T > 0.0)) throw ParameterError("z_statistic: T must be positive");
  return std::exp2(0.5 * k) * dyadic_difference(ladder, k) / (b * b * T);
}

void write_ladder_csv(const VariationLadder& ladder,
                      const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << "k,value\n";
  for (int k = ladder.k_min; k <= ladder.k_max(); ++k)
    out << k << ',' << format_g17(ladder.at(k)) << '\n';
  if (!out) throw IoError("write failed: " + file.string());
}

void write_z_csv(const VariationLadder& ladder, int k_lo, int k_hi, double b,
                 const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open for writing: " + file.string());
  out << "k,z\n";
  for (int k = k_lo; k <= k_hi; ++k)
    out << k << ',' << format_g17(z_statistic(ladder, k, b, ladder.T)) << '\n';
  if (!out) throw IoError("write failed: " + file.string());
}

}  // namespace mixedvar
