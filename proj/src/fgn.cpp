#include "mixedvar/fgn.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "mixedvar/errors.hpp"
#include "mixedvar/rng.hpp"

namespace mixedvar {

EmbeddingError::EmbeddingError(double hurst_, std::size_t n_,
                               double worst_eigenvalue_)
    : ParameterError("circulant embedding failed: H=" + std::to_string(hurst_) +
                     ", n=" + std::to_string(n_) + ", worst eigenvalue=" +
                     std::to_string(worst_eigenvalue_)),
      hurst(hurst_),
      n(n_),
      worst_eigenvalue(worst_eigenvalue_) {}

double fgn_autocovariance(double H, std::size_t m) {
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("fgn_autocovariance: H must lie in (0,1)");
  if (m == 0) return 1.0;
  const double md = static_cast<double>(m);
  const double e = 2.0 * H;
  if (m < 8)
    return 0.5 * (std::pow(md + 1.0, e) + std::pow(md - 1.0, e)) -
           std::pow(md, e);
  // Large lags: the direct second difference of m^{2H} cancels to near the
  // rounding floor of m^{2H} (fatal by m ~ 2^20), so evaluate
  //   ((1+x)^e + (1-x)^e)/2 - 1, x = 1/m,
  // by its even binomial series instead.
  const double x2 = 1.0 / (md * md);
  double coeff = 0.5 * e * (e - 1.0);  // C(e,2)
  double power = x2;
  double sum = 0.0;
  for (int j = 1; j < 60; ++j) {
    const double term = coeff * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    coeff *= (e - 2.0 * j) * (e - 2.0 * j - 1.0) /
             ((2.0 * j + 1.0) * (2.0 * j + 2.0));
    power *= x2;
  }
  return std::pow(md, e) * sum;
}

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is.  One plan pair per transform size, created lazily under a
// lock and reused with caller-owned fftw_malloc'd buffers (same alignment as
// the buffers the plans were created with).
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
  static std::map<std::size_t, PlanPair> cache;
  return cache;
}

template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t count)
      : data(static_cast<T*>(fftw_malloc(sizeof(T) * count))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* data;
};

PlanPair plans_for_size(std::size_t m) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  FftwBuffer<double> real(m);
  FftwBuffer<fftw_complex> cplx(m / 2 + 1);
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(m), real.data, cplx.data,
                               FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(m), cplx.data, real.data,
                               FFTW_ESTIMATE);
  if (p.r2c == nullptr || p.c2r == nullptr)
    throw ResolutionError("FFTW plan creation failed for size " +
                          std::to_string(m));
  cache.emplace(m, p);
  return p;
}

}  // namespace

CirculantSpectrum build_spectrum(double H, std::size_t n) {
  if (n < 1) throw ParameterError("build_spectrum: n must be >= 1");
  if (!(H > 0.0 && H < 1.0))
    throw ParameterError("build_spectrum: H must lie in (0,1)");
  const std::size_t m = 2 * n;
  FftwBuffer<double> row(m);
  for (std::size_t j = 0; j <= n; ++j) row.data[j] = fgn_autocovariance(H, j);
  for (std::size_t j = n + 1; j < m; ++j) row.data[j] = row.data[m - j];

  FftwBuffer<fftw_complex> out(n + 1);
  fftw_execute_dft_r2c(plans_for_size(m).r2c, row.data, out.data);

  CirculantSpectrum spectrum;
  spectrum.H = H;
  spectrum.n = n;
  spectrum.eigenvalues.resize(m);
  double max_eig = 0.0;
  for (std::size_t j = 0; j <= n; ++j)
    max_eig = std::max(max_eig, out.data[j][0]);
  // The row is even-symmetric, so imaginary parts are pure rounding noise;
  // tolerate only that much.
  const double imag_tol = 1e-9 * std::max(1.0, max_eig);
  double worst = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (std::abs(out.data[j][1]) > imag_tol)
      throw ResolutionError("build_spectrum: non-real eigenvalue");
    worst = std::min(worst, out.data[j][0]);
  }
  const double clamp_tol = -1e-8 * max_eig;
  if (worst < clamp_tol) throw EmbeddingError(H, n, worst);
  for (std::size_t j = 0; j <= n; ++j) {
    const double lambda = std::max(out.data[j][0], 0.0);
    spectrum.eigenvalues[j] = lambda;
    if (j >= 1 && j < n) spectrum.eigenvalues[m - j] = lambda;
  }
  return spectrum;
}

std::vector<double> sample_fgn(const CirculantSpectrum& spectrum,
                               std::uint64_t seed) {
  const std::size_t n = spectrum.n;
  if (n == 0 || spectrum.eigenvalues.size() != 2 * n)
    throw ParameterError("sample_fgn: invalid spectrum");
  const std::size_t m = 2 * n;
  const double md = static_cast<double>(m);
  GaussianStream normals(seed);

  FftwBuffer<fftw_complex> coeff(n + 1);
  const auto& lambda = spectrum.eigenvalues;
  const double xi0 = normals();
  coeff.data[0][0] = std::sqrt(lambda[0] / md) * xi0;
  coeff.data[0][1] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double aj = normals();
    const double bj = normals();
    const double s = std::sqrt(lambda[j] / (2.0 * md));
    coeff.data[j][0] = s * aj;
    coeff.data[j][1] = s * bj;
  }
  const double xin = normals();
  coeff.data[n][0] = std::sqrt(lambda[n] / md) * xin;
  coeff.data[n][1] = 0.0;

  FftwBuffer<double> out(m);
  fftw_execute_dft_c2r(plans_for_size(m).c2r, coeff.data, out.data);
  return std::vector<double>(out.data, out.data + n);
}

MixedPaths sample_mixed_path(const ModelParams& params, std::size_t n,
                             std::uint64_t seed) {
  params.validate(/*allow_zero_scale=*/true);
  if (n < 1) throw ParameterError("sample_mixed_path: n must be >= 1");

  const auto spectrum = SpectrumCache::global().get(params.H, n);
  const std::vector<double> noise =
      sample_fgn(*spectrum, derive_stream_seed(seed, StreamTag::fgn_noise));
  GaussianStream wiener_normals(
      derive_stream_seed(seed, StreamTag::wiener_noise));

  const double dt = params.T / static_cast<double>(n);
  const double fgn_scale = std::pow(dt, params.H);  // self-similarity
  const double wiener_scale = std::sqrt(dt);

  MixedPaths paths;
  for (GridPath* p : {&paths.mixed, &paths.fbm, &paths.wiener}) {
    p->n = n;
    p->T = params.T;
    p->values.assign(n + 1, 0.0);
  }
  double fbm = 0.0, wiener = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fbm += fgn_scale * noise[i];
    wiener += wiener_scale * wiener_normals();
    paths.fbm.values[i + 1] = fbm;
    paths.wiener.values[i + 1] = wiener;
    paths.mixed.values[i + 1] = params.a * fbm + params.b * wiener;
  }
  return paths;
}

std::shared_ptr<const CirculantSpectrum> SpectrumCache::get(double H,
                                                            std::size_t n) {
  const auto key = std::make_pair(H, n);
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto spectrum = std::make_shared<const CirculantSpectrum>(build_spectrum(H, n));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.emplace(key, std::move(spectrum));
  return it->second;  // idempotent: first insert wins
}

void SpectrumCache::clear() {
  std::unique_lock lock(mutex_);
  cache_.clear();
}

SpectrumCache& SpectrumCache::global() {
  static SpectrumCache cache;
  return cache;
}

}  // namespace mixedvar
