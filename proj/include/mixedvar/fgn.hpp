#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "mixedvar/model.hpp"

namespace mixedvar {

// Autocovariance of standard fractional Gaussian noise at integer lag m:
// rho_H(m) = ((m+1)^2H + |m-1|^2H)/2 - m^2H.  Throws on H outside (0,1).
double fgn_autocovariance(double H, std::size_t m);

// Eigenvalues of the size-2n circulant embedding of the fGn autocovariance.
struct CirculantSpectrum {
  double H = 0.0;
  std::size_t n = 0;                // noise length; eigenvalues has 2n entries
  std::vector<double> eigenvalues;  // nonnegative after clamping
};

// DFT of the symmetrized row (rho(0),...,rho(n),rho(n-1),...,rho(1)).
// Eigenvalues in [-1e-8 * max, 0) are clamped to 0; anything lower throws
// EmbeddingError carrying (H, n, worst eigenvalue), because sampling from a
// truncated spectrum would no longer be exact.
CirculantSpectrum build_spectrum(double H, std::size_t n);

// One exact draw of length-n standard fGn (unit grid step).  Deterministic
// given the seed.  Draw order: xi_0, then the pair (a_j, b_j) for each
// j = 1..n-1, then xi_n; the spectral coefficients are
//   c_0 = sqrt(l_0/M) xi_0,   c_n = sqrt(l_n/M) xi_n,
//   c_j = sqrt(l_j/(2M)) (a_j + i b_j),  M = 2n,
// and the sample is the real inverse DFT of the Hermitian extension.
std::vector<double> sample_fgn(const CirculantSpectrum& spectrum,
                               std::uint64_t seed);

struct MixedPaths {
  GridPath mixed;
  GridPath fbm;
  GridPath wiener;
};

// Mixed path on {i*T/n}: fbm is the cumulative sum of (T/n)^H-scaled fGn,
// wiener the cumulative sum of independent N(0, T/n) increments, and
// mixed = a*fbm + b*wiener.  The fGn and Wiener noise streams derive from
// `seed` via derive_stream_seed with tags fgn_noise and wiener_noise.
// Zero a or b is allowed and yields the degenerate one-component model.
MixedPaths sample_mixed_path(const ModelParams& params, std::size_t n,
                             std::uint64_t seed);

// Spectrum cache keyed by (H, n): concurrent reads, idempotent inserts.
class SpectrumCache {
 public:
  std::shared_ptr<const CirculantSpectrum> get(double H, std::size_t n);
  void clear();
  static SpectrumCache& global();

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<double, std::size_t>,
           std::shared_ptr<const CirculantSpectrum>>
      cache_;
};

}  // namespace mixedvar
