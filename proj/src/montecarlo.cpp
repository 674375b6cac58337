#include "mixedvar/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "mixedvar/asymptotics.hpp"
#include "mixedvar/errors.hpp"
#include "mixedvar/fgn.hpp"
#include "mixedvar/numerics.hpp"
#include "mixedvar/rng.hpp"
#include "mixedvar/variation.hpp"

namespace mixedvar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

int log2_size(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

// Index-sharded worker pool; the caller must make fn(i) independent across i.
void parallel_for(int workers, std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  workers = static_cast<int>(
      std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

bool is_scale_estimator(EstimatorId id) {
  return id == EstimatorId::tilde_a2 || id == EstimatorId::tilde_b2 ||
         id == EstimatorId::hat_a2 || id == EstimatorId::hat_b2;
}

double cell_truth(EstimatorId id, const ModelParams& params) {
  switch (id) {
    case EstimatorId::tilde_a2:
    case EstimatorId::hat_a2:
      return params.a;
    case EstimatorId::tilde_b2:
    case EstimatorId::hat_b2:
      return params.b;
    default:
      return params.H;
  }
}

bool needs_quartic(EstimatorId id) {
  return id == EstimatorId::hat_H4 || id == EstimatorId::tilde_H4 ||
         id == EstimatorId::bar_H4;
}

EstimateRecord evaluate_spec(const EstimatorSpec& spec,
                             const VariationLadder& quad,
                             const VariationLadder* quart,
                             const ModelParams& params) {
  switch (spec.id) {
    case EstimatorId::hat_H:
      return hat_H(quad, spec.k);
    case EstimatorId::tilde_H:
      return tilde_H(quad, spec.k);
    case EstimatorId::tilde_H2:
      return tilde_H2(quad, spec.k);
    case EstimatorId::hat_H2:
      return hat_H2(quad, spec.k);
    case EstimatorId::hat_H4:
    case EstimatorId::tilde_H4: {
      if (!quart) throw ParameterError("quartic ladder not built");
      auto pair = quartic_estimators(*quart, spec.k);
      return spec.id == EstimatorId::hat_H4 ? pair.first : pair.second;
    }
    case EstimatorId::bar_H2:
      return regression_H(quad,
                          default_regression_config(VariationKind::quadratic));
    case EstimatorId::bar_H4:
      if (!quart) throw ParameterError("quartic ladder not built");
      return regression_H(*quart,
                          default_regression_config(VariationKind::quartic));
    case EstimatorId::tilde_a2:
      return tilde_a2(quad, spec.k);
    case EstimatorId::tilde_b2:
      return scale_estimators_low(quad, spec.k).second;
    case EstimatorId::hat_a2:
      return scale_estimators_high(quad, spec.k).first;
    case EstimatorId::hat_b2:
      return hat_b2(quad, spec.k);
    case EstimatorId::hat_H_a:
      return known_coefficient_estimator(quad, spec.k, KnownCoefficient::a,
                                         params);
    case EstimatorId::tilde_H_b:
      return known_coefficient_estimator(quad, spec.k, KnownCoefficient::b,
                                         params);
    case EstimatorId::hat_H_ab:
      return known_coefficient_estimator(quad, spec.k,
                                         KnownCoefficient::a_and_b, params);
  }
  throw ParameterError("unknown estimator id");
}

struct RepOutcome {
  double estimate = kNaN;
  bool degenerate = false;
  bool error = false;
  std::string message;
};

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : config.params_grid)
    grid.push_back({{"H", p.H}, {"a", p.a}, {"b", p.b}, {"T", p.T}});
  nlohmann::json specs = nlohmann::json::array();
  for (const auto& s : config.estimators)
    specs.push_back(
        {{"estimator", std::string(estimator_name(s.id))}, {"k", s.k}});
  return {{"params_grid", grid},
          {"n", config.n},
          {"replications", config.replications},
          {"seed", config.seed},
          {"estimators", specs},
          {"replication_offset", config.replication_offset},
          {"retain_values", config.retain_values}};
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIXEDVAR_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

McSummary run_table(const ExperimentConfig& config) {
  if (config.replications < 1)
    throw ParameterError("run_table: replications must be >= 1");
  if (!is_power_of_two(config.n))
    throw ParameterError("run_table: n must be a power of two");
  if (config.params_grid.empty())
    throw ParameterError("run_table: empty parameter grid");
  for (const auto& p : config.params_grid) p.validate(true);

  const std::size_t n_params = config.params_grid.size();
  const std::size_t n_specs = config.estimators.size();
  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const int k_max = log2_size(config.n);
  const bool want_quartic =
      std::any_of(config.estimators.begin(), config.estimators.end(),
                  [](const EstimatorSpec& s) { return needs_quartic(s.id); });

  // slot[(pi * n_specs + si) * reps + rep]
  std::vector<RepOutcome> slots(n_params * n_specs * reps);

  parallel_for(
      resolve_workers(config.workers), n_params * reps, [&](std::size_t task) {
        const std::size_t pi = task / reps;
        const std::size_t rep = task % reps;
        const ModelParams& params = config.params_grid[pi];
        const std::uint64_t rep_seed = derive_stream_seed(
            config.seed, StreamTag::replication,
            config.replication_offset + rep);
        const std::uint64_t cell_seed =
            derive_stream_seed(rep_seed, StreamTag::cell, pi);
        RepOutcome* out = &slots[(pi * n_specs) * reps + rep];
        try {
          const MixedPaths paths =
              sample_mixed_path(params, config.n, cell_seed);
          const VariationLadder quad = power_variation_ladder(
              paths.mixed, VariationKind::quadratic, 1, k_max);
          VariationLadder quart;
          if (want_quartic)
            quart = power_variation_ladder(paths.mixed,
                                           VariationKind::quartic, 1, k_max);
          for (std::size_t si = 0; si < n_specs; ++si) {
            RepOutcome& slot = out[si * reps];
            try {
              const EstimateRecord rec =
                  evaluate_spec(config.estimators[si], quad,
                                want_quartic ? &quart : nullptr, params);
              slot.estimate = rec.estimate;
              slot.degenerate = rec.degenerate;
            } catch (const std::exception& e) {
              slot.error = true;
              slot.message = e.what();
            }
          }
        } catch (const std::exception& e) {
          for (std::size_t si = 0; si < n_specs; ++si) {
            out[si * reps].error = true;
            out[si * reps].message = e.what();
          }
        }
      });

  McSummary summary;
  summary.config = config;
  summary.cells.reserve(n_params * n_specs);
  for (std::size_t pi = 0; pi < n_params; ++pi) {
    for (std::size_t si = 0; si < n_specs; ++si) {
      McCell cell;
      cell.params_index = pi;
      cell.id = config.estimators[si].id;
      cell.k = config.estimators[si].k;
      cell.truth = cell_truth(cell.id, config.params_grid[pi]);
      const bool scale = is_scale_estimator(cell.id);
      std::vector<double> used_values, used_errors;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const RepOutcome& slot = slots[(pi * n_specs + si) * reps + rep];
        double table_value = kNaN;
        if (slot.error) {
          ++cell.errors;
          if (cell.first_error.empty()) cell.first_error = slot.message;
        } else if (scale) {
          if (slot.estimate < 0.0) {
            ++cell.degenerate;  // negative square: no table value
          } else {
            table_value = std::sqrt(slot.estimate);
            used_values.push_back(table_value);
            used_errors.push_back(std::abs(table_value - cell.truth));
            if (slot.degenerate) ++cell.degenerate;
          }
        } else {
          table_value = slot.estimate;
          used_values.push_back(table_value);
          used_errors.push_back(std::abs(table_value - cell.truth));
          if (slot.degenerate) ++cell.degenerate;
        }
        if (config.retain_values) cell.values.push_back(table_value);
      }
      cell.used = static_cast<int>(used_values.size());
      cell.mu = cell.used > 0 ? pairwise_sum(used_values) / cell.used : kNaN;
      cell.delta =
          cell.used > 0 ? pairwise_sum(used_errors) / cell.used : kNaN;
      summary.cells.push_back(std::move(cell));
    }
  }
  return summary;
}

McSummary merge_summaries(const McSummary& lhs, const McSummary& rhs) {
  const ExperimentConfig& a = lhs.config;
  const ExperimentConfig& b = rhs.config;
  bool same = a.n == b.n && a.seed == b.seed &&
              a.retain_values == b.retain_values &&
              a.params_grid.size() == b.params_grid.size() &&
              a.estimators.size() == b.estimators.size();
  for (std::size_t i = 0; same && i < a.params_grid.size(); ++i) {
    const ModelParams &p = a.params_grid[i], &q = b.params_grid[i];
    same = p.H == q.H && p.a == q.a && p.b == q.b && p.T == q.T;
  }
  for (std::size_t i = 0; same && i < a.estimators.size(); ++i)
    same = a.estimators[i].id == b.estimators[i].id &&
           a.estimators[i].k == b.estimators[i].k;
  if (!same || lhs.cells.size() != rhs.cells.size())
    throw ParameterError("merge_summaries: summaries come from different experiments");
  if (b.replication_offset != a.replication_offset + a.replications)
    throw ParameterError(
        "merge_summaries: replication ranges must be adjacent");

  McSummary out = lhs;
  out.config.replications += rhs.config.replications;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    McCell& c = out.cells[i];
    const McCell& r = rhs.cells[i];
    if (c.id != r.id || c.k != r.k || c.params_index != r.params_index)
      throw ParameterError("merge_summaries: cell layout mismatch");
    c.degenerate += r.degenerate;
    c.errors += r.errors;
    if (c.first_error.empty()) c.first_error = r.first_error;
    c.values.insert(c.values.end(), r.values.begin(), r.values.end());
    if (a.retain_values) {
      // Rebuild the moments from the pooled per-replication values with the
      // same summation as run_table, so the merge is bit-exact.
      std::vector<double> used_values, used_errors;
      for (double v : c.values) {
        if (std::isnan(v)) continue;  // errored or negative-square slot
        used_values.push_back(v);
        used_errors.push_back(std::abs(v - c.truth));
      }
      c.used = static_cast<int>(used_values.size());
      c.mu = c.used > 0 ? pairwise_sum(used_values) / c.used : kNaN;
      c.delta = c.used > 0 ? pairwise_sum(used_errors) / c.used : kNaN;
    } else {
      const int total = c.used + r.used;
      if (total > 0) {
        c.mu = ((c.used > 0 ? c.mu * c.used : 0.0) +
                (r.used > 0 ? r.mu * r.used : 0.0)) /
               total;
        c.delta = ((c.used > 0 ? c.delta * c.used : 0.0) +
                   (r.used > 0 ? r.delta * r.used : 0.0)) /
                  total;
      } else {
        c.mu = c.delta = kNaN;
      }
      c.used = total;
    }
  }
  return out;
}

std::string summary_to_json(const McSummary& summary) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : summary.cells) {
    nlohmann::json j = {{"params_index", c.params_index},
                        {"estimator", std::string(estimator_name(c.id))},
                        {"k", c.k},
                        {"truth", c.truth},
                        {"mu", c.mu},
                        {"delta", c.delta},
                        {"used", c.used},
                        {"degenerate", c.degenerate},
                        {"errors", c.errors}};
    if (!c.first_error.empty()) j["first_error"] = c.first_error;
    if (!c.values.empty()) j["values"] = c.values;
    cells.push_back(std::move(j));
  }
  nlohmann::json out = {{"config", config_to_json(summary.config)},
                        {"cells", cells}};
  return out.dump(2);
}

std::string summary_to_csv(const McSummary& summary) {
  const auto& grid = summary.config.params_grid;
  const std::size_t n_specs = summary.config.estimators.size();
  std::string out = "statistic";
  for (const auto& p : grid) out += ",H=" + format_g17(p.H);
  out += '\n';
  for (std::size_t si = 0; si < n_specs; ++si) {
    const auto& spec = summary.config.estimators[si];
    const std::string base = std::string(estimator_name(spec.id)) + "_" +
                             std::to_string(spec.k);
    for (const char* row : {"mu", "delta", "degenerate", "errors"}) {
      out += std::string(row) + " " + base;
      for (std::size_t pi = 0; pi < grid.size(); ++pi) {
        const McCell& c = summary.cells[pi * n_specs + si];
        out += ',';
        if (std::string(row) == "mu")
          out += format_g17(c.mu);
        else if (std::string(row) == "delta")
          out += format_g17(c.delta);
        else if (std::string(row) == "degenerate")
          out += std::to_string(c.degenerate);
        else
          out += std::to_string(c.errors);
      }
      out += '\n';
    }
  }
  return out;
}

namespace {

struct CltRegime {
  std::string normalizer;  // "sqrt_n", "sqrt_n_log_n", "n_H"
  double variance = 0.0;
};

CltRegime clt_regime(double H, int p, int r, double series_tol) {
  if (!(H > 0.0 && H < 1.0)) throw ParameterError("clt_check: H in (0,1)");
  if (p < 0 || r < 0) throw ParameterError("clt_check: p, r must be >= 0");
  if (p == 0 && r == 0)
    throw ParameterError("clt_check: p + r must be positive");
  const double mp = hermite_moment(p);
  if (r == 0)
    return {"sqrt_n", hermite_moment(2 * p) - mp * mp};
  if (p % 2 == 1)
    return {"sqrt_n", hermite_moment(2 * p) * hermite_moment(2 * r)};
  if (r % 2 == 0) {
    if (H < 0.75) {
      const double chaos = sigma2_Hr(H, r, series_tol).value;
      return {"sqrt_n", chaos * mp * mp + sigma2_pr(p, r)};
    }
    if (H == 0.75) return {"sqrt_n_log_n", critical_limit_variance(p, r)};
    throw RegimeError(
        "clt_check: non-Gaussian limit for even p, r with H > 3/4; use the "
        "scaling-only mode");
  }
  // p even, r odd
  if (H > 0.5) {
    const double mr1 = hermite_moment(r + 1);
    return {"n_H", mp * mp * mr1 * mr1};
  }
  double variance = sigma2_Hr(H, r, series_tol).value * mp * mp +
                    sigma2_pr(p, r);
  if (H == 0.5) {
    // The lag sum of rho_{1/2} is 1 rather than 0, so the first-order
    // Gaussian-chaos term mu_p^2 (r!!)^2 survives exactly at H = 1/2.
    const double c1 = double_factorial(r);
    variance += mp * mp * c1 * c1;
  }
  return {"sqrt_n", variance};
}

}  // namespace

CltReport clt_check(double H, int p, int r, std::size_t n, int replications,
                    std::uint64_t seed, int workers) {
  if (n < 2) throw ParameterError("clt_check: n must be >= 2");
  if (replications < 2)
    throw ParameterError("clt_check: replications must be >= 2");
  const CltRegime regime = clt_regime(H, p, r, 1e-10);

  double normalizer = 1.0 / std::sqrt(static_cast<double>(n));
  if (regime.normalizer == "sqrt_n_log_n")
    normalizer = 1.0 / std::sqrt(static_cast<double>(n) *
                                 std::log(static_cast<double>(n)));
  else if (regime.normalizer == "n_H")
    normalizer = std::pow(static_cast<double>(n), -H);

  const double center = hermite_moment(p) * hermite_moment(r);
  const auto spectrum = SpectrumCache::global().get(H, n);
  std::vector<double> samples(static_cast<std::size_t>(replications));
  parallel_for(
      resolve_workers(workers), samples.size(), [&](std::size_t rep) {
        const std::uint64_t rep_seed =
            derive_stream_seed(seed, StreamTag::replication, rep);
        const std::vector<double> zeta = sample_fgn(
            *spectrum, derive_stream_seed(rep_seed, StreamTag::fgn_noise, 0));
        std::vector<double> terms(n);
        if (p > 0) {
          GaussianStream xi(
              derive_stream_seed(rep_seed, StreamTag::wiener_noise, 0));
          for (std::size_t i = 0; i < n; ++i)
            terms[i] = ipow(xi(), p) * ipow(zeta[i], r) - center;
        } else {
          for (std::size_t i = 0; i < n; ++i)
            terms[i] = ipow(zeta[i], r) - center;
        }
        samples[rep] = pairwise_sum(terms) * normalizer;
      });

  CltReport report;
  report.H = H;
  report.p = p;
  report.r = r;
  report.n = n;
  report.replications = replications;
  report.seed = seed;
  report.normalizer = regime.normalizer;
  report.sample_variance = sample_stats(samples).variance;
  report.theoretical_variance = regime.variance;
  report.ks_distance =
      ks_distance(samples, 0.0, std::sqrt(regime.variance));
  report.ks_critical_1pct = ks_critical(0.01, samples.size());
  report.gaussian_limit = true;
  return report;
}

CltReport rosenblatt_scaling_check(double H, int p, int r, std::size_t n,
                                   int replications, std::uint64_t seed,
                                   int workers) {
  if (!(H > 0.75 && H < 1.0))
    throw ParameterError("rosenblatt_scaling_check: H must lie in (3/4,1)");
  if (p < 0 || p % 2 == 1 || r < 2 || r % 2 == 1)
    throw ParameterError(
        "rosenblatt_scaling_check: requires even p and even r >= 2");
  if (!is_power_of_two(n) || n < 16)
    throw ParameterError(
        "rosenblatt_scaling_check: n must be a power of two >= 16");
  if (replications < 2)
    throw ParameterError("rosenblatt_scaling_check: replications must be >= 2");

  const int j_max = log2_size(n);
  const int j_min = std::max(j_max - 3, 1);
  const MixedVariationSpec spec{static_cast<unsigned>(p),
                                static_cast<unsigned>(r)};
  const ModelParams params{H, 1.0, 1.0, 1.0};
  const std::size_t n_levels = static_cast<std::size_t>(j_max - j_min + 1);
  std::vector<std::vector<double>> level_samples(
      n_levels, std::vector<double>(replications));
  parallel_for(
      resolve_workers(workers), static_cast<std::size_t>(replications),
      [&](std::size_t rep) {
        const std::uint64_t rep_seed =
            derive_stream_seed(seed, StreamTag::replication, rep);
        const MixedPaths paths = sample_mixed_path(params, n, rep_seed);
        for (int j = j_min; j <= j_max; ++j) {
          const std::size_t factor = std::size_t{1} << (j_max - j);
          const GridPath w = subsample(paths.wiener, factor);
          const GridPath b = subsample(paths.fbm, factor);
          const double s = centered_sum(w, b, spec, H);
          const double nj = static_cast<double>(std::size_t{1} << j);
          level_samples[j - j_min][rep] = std::pow(nj, 1.0 - 2.0 * H) * s;
        }
      });

  CltReport report;
  report.H = H;
  report.p = p;
  report.r = r;
  report.n = n;
  report.replications = replications;
  report.seed = seed;
  report.normalizer = "n_{1-2H}";
  report.gaussian_limit = false;
  report.sample_variance = kNaN;
  report.theoretical_variance = kNaN;
  for (int j = j_min; j <= j_max; ++j) {
    report.scaling_ns.push_back(std::size_t{1} << j);
    report.scaling_variances.push_back(
        sample_stats(level_samples[j - j_min]).variance);
  }
  return report;
}

std::string clt_report_to_json(const CltReport& report) {
  nlohmann::json j = {{"H", report.H},
                      {"p", report.p},
                      {"r", report.r},
                      {"n", report.n},
                      {"replications", report.replications},
                      {"seed", report.seed},
                      {"normalizer", report.normalizer},
                      {"gaussian_limit", report.gaussian_limit},
                      {"sample_variance", report.sample_variance},
                      {"theoretical_variance", report.theoretical_variance},
                      {"ks_distance", report.ks_distance},
                      {"ks_critical_1pct", report.ks_critical_1pct}};
  if (!report.scaling_ns.empty()) {
    j["scaling_ns"] = report.scaling_ns;
    j["scaling_variances"] = report.scaling_variances;
  }
  return j.dump(2);
}

RateReport rate_check(double H, int p, int r, double gamma, double eps,
                      int n_levels, std::uint64_t seed) {
  if (!(H > 0.0 && H < 1.0)) throw ParameterError("rate_check: H in (0,1)");
  if (p < 0 || r < 0) throw ParameterError("rate_check: p, r must be >= 0");
  if (!(eps >= 0.0)) throw ParameterError("rate_check: eps must be >= 0");
  constexpr int j_max = 20;
  if (n_levels < 3 || n_levels > j_max - 1)
    throw ParameterError("rate_check: n_levels must lie in [3,19]");

  const ModelParams params{H, 1.0, 1.0, 1.0};
  const MixedPaths paths =
      sample_mixed_path(params, std::size_t{1} << j_max,
                        derive_stream_seed(seed, StreamTag::replication, 0));
  const MixedVariationSpec spec{static_cast<unsigned>(p),
                                static_cast<unsigned>(r)};

  RateReport report;
  report.H = H;
  report.p = p;
  report.r = r;
  report.gamma = gamma;
  report.eps = eps;
  report.n_levels = n_levels;
  report.seed = seed;
  std::vector<double> xs, ys;
  for (int j = j_max - n_levels + 1; j <= j_max; ++j) {
    const std::size_t factor = std::size_t{1} << (j_max - j);
    const GridPath w = subsample(paths.wiener, factor);
    const GridPath b = subsample(paths.fbm, factor);
    const double s = centered_sum(w, b, spec, H);
    if (s == 0.0)
      throw ResolutionError(
          "rate_check: centered sum is exactly zero; inconclusive");
    report.levels.push_back(j);
    report.log2_abs_s.push_back(std::log2(std::abs(s)));
    xs.push_back(static_cast<double>(j));
    ys.push_back(report.log2_abs_s.back());
  }
  const LinearFit fit = ols_fit(xs, ys);
  // One-sided 99% Student quantiles, dof = 1..17 (n_levels - 2 <= 17).
  static constexpr double kT99[] = {31.8205, 6.9646, 4.5407, 3.7469, 3.3649,
                                    3.1427,  2.9980, 2.8965, 2.8214, 2.7638,
                                    2.7181,  2.6810, 2.6503, 2.6245, 2.6025,
                                    2.5835,  2.5669};
  report.slope = fit.slope;
  report.margin = kT99[n_levels - 3] * fit.slope_se;
  report.pass = report.slope <= gamma + eps + report.margin;
  return report;
}

std::string rate_report_to_json(const RateReport& report) {
  nlohmann::json j = {{"H", report.H},
                      {"p", report.p},
                      {"r", report.r},
                      {"gamma", report.gamma},
                      {"eps", report.eps},
                      {"n_levels", report.n_levels},
                      {"seed", report.seed},
                      {"levels", report.levels},
                      {"log2_abs_s", report.log2_abs_s},
                      {"slope", report.slope},
                      {"margin", report.margin},
                      {"pass", report.pass}};
  return j.dump(2);
}

ClassifierReport classifier_validation(const std::vector<double>& H_list,
                                       std::size_t n, int replications,
                                       std::uint64_t seed, int k_lo, int k_hi,
                                       int workers) {
  if (H_list.empty())
    throw ParameterError("classifier_validation: empty H list");
  if (!is_power_of_two(n))
    throw ParameterError("classifier_validation: n must be a power of two");
  if (replications < 1)
    throw ParameterError("classifier_validation: replications must be >= 1");

  const std::size_t reps = static_cast<std::size_t>(replications);
  std::vector<Regime> verdicts(H_list.size() * reps);
  parallel_for(
      resolve_workers(workers), verdicts.size(), [&](std::size_t task) {
        const std::size_t hi = task / reps;
        const std::size_t rep = task % reps;
        const std::uint64_t rep_seed =
            derive_stream_seed(seed, StreamTag::replication, rep);
        const std::uint64_t cell_seed =
            derive_stream_seed(rep_seed, StreamTag::cell, hi);
        const ModelParams params{H_list[hi], 1.0, 1.0, 3.0};
        const MixedPaths paths = sample_mixed_path(params, n, cell_seed);
        const VariationLadder ladder = power_variation_ladder(
            paths.mixed, VariationKind::quadratic, k_lo, k_hi + 1);
        verdicts[task] = classify_regime(ladder, k_lo, k_hi).verdict;
      });

  ClassifierReport report;
  report.n = n;
  report.replications = replications;
  report.k_lo = k_lo;
  report.k_hi = k_hi;
  report.seed = seed;
  for (std::size_t hi = 0; hi < H_list.size(); ++hi) {
    ClassifierRow row;
    row.H = H_list[hi];
    for (std::size_t rep = 0; rep < reps; ++rep) {
      switch (verdicts[hi * reps + rep]) {
        case Regime::H_below_3_4:
          ++row.below;
          break;
        case Regime::H_above_3_4:
          ++row.above;
          break;
        case Regime::inconclusive:
          ++row.inconclusive;
          break;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string classifier_report_to_json(const ClassifierReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"H", r.H},
                    {"below_3_4", r.below},
                    {"above_3_4", r.above},
                    {"inconclusive", r.inconclusive}});
  nlohmann::json j = {{"n", report.n},
                      {"replications", report.replications},
                      {"k_lo", report.k_lo},
                      {"k_hi", report.k_hi},
                      {"seed", report.seed},
                      {"rows", rows}};
  return j.dump(2);
}

UTableReport u_ladder_table(const std::vector<double>& H_list, std::size_t n,
                            std::uint64_t seed, int k_lo, int k_hi) {
  if (H_list.empty()) throw ParameterError("u_ladder_table: empty H list");
  if (!is_power_of_two(n))
    throw ParameterError("u_ladder_table: n must be a power of two");
  UTableReport report;
  report.n = n;
  report.k_lo = k_lo;
  report.k_hi = k_hi;
  report.seed = seed;
  report.H_list = H_list;
  for (std::size_t hi = 0; hi < H_list.size(); ++hi) {
    const std::uint64_t rep_seed =
        derive_stream_seed(seed, StreamTag::replication, 0);
    const std::uint64_t cell_seed =
        derive_stream_seed(rep_seed, StreamTag::cell, hi);
    const ModelParams params{H_list[hi], 1.0, 1.0, 3.0};
    const MixedPaths paths = sample_mixed_path(params, n, cell_seed);
    const VariationLadder ladder = power_variation_ladder(
        paths.mixed, VariationKind::quadratic, k_lo, k_hi + 1);
    std::vector<double> row;
    for (int k = k_lo; k <= k_hi; ++k)
      row.push_back(1e4 * dyadic_difference(ladder, k));
    report.scaled_u.push_back(std::move(row));
  }
  return report;
}

std::string u_table_to_json(const UTableReport& report) {
  nlohmann::json j = {{"n", report.n},
                      {"k_lo", report.k_lo},
                      {"k_hi", report.k_hi},
                      {"seed", report.seed},
                      {"H", report.H_list},
                      {"scaled_u", report.scaled_u}};
  return j.dump(2);
}

ExperimentConfig table_preset(const std::string& name, std::uint64_t seed,
                              int workers) {
  ExperimentConfig config;
  config.n = std::size_t{1} << 20;
  config.replications = 10;
  config.seed = seed;
  config.workers = workers;
  auto grid = [&config](double lo, double hi, double step) {
    for (double h = lo; h < hi + step / 2; h += step)
      config.params_grid.push_back(ModelParams{h, 1.0, 1.0, 3.0});
  };
  if (name == "table1") {
    grid(0.05, 0.45, 0.05);
    config.estimators = {{EstimatorId::hat_H, 20},
                         {EstimatorId::tilde_H, 19},
                         {EstimatorId::tilde_H2, 18},
                         {EstimatorId::tilde_a2, 19}};
  } else if (name == "table2") {
    grid(0.525, 0.725, 0.025);
    config.estimators = {{EstimatorId::hat_H2, 19},
                         {EstimatorId::tilde_H2, 18},
                         {EstimatorId::bar_H2, 0},
                         {EstimatorId::hat_b2, 20}};
  } else if (name == "table4") {
    grid(0.525, 0.725, 0.025);
    config.estimators = {{EstimatorId::hat_H4, 19},
                         {EstimatorId::tilde_H4, 18},
                         {EstimatorId::bar_H4, 0}};
  } else if (name == "table5") {
    grid(0.05, 0.45, 0.05);
    config.estimators = {{EstimatorId::hat_H_a, 20},
                         {EstimatorId::hat_H_ab, 20}};
  } else if (name == "table6") {
    grid(0.5, 0.725, 0.025);
    config.estimators = {{EstimatorId::tilde_H_b, 19},
                         {EstimatorId::hat_H_ab, 20}};
  } else if (name == "table3") {
    throw ParameterError(
        "table3 is the scaled sign table; it is produced by u_ladder_table "
        "(CLI: `table --preset table3`)");
  } else {
    throw ParameterError("unknown table preset: " + name);
  }
  return config;
}

}  // namespace mixedvar
