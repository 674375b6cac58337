#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixedvar/asymptotics.hpp"
#include "mixedvar/errors.hpp"
#include "mixedvar/estimators.hpp"
#include "mixedvar/fgn.hpp"
#include "mixedvar/manifest.hpp"
#include "mixedvar/model.hpp"
#include "mixedvar/montecarlo.hpp"
#include "mixedvar/variation.hpp"

namespace {

using namespace mixedvar;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

struct ManifestScope {
  RunManifest manifest;

  ManifestScope(const std::string& command, std::uint64_t seed,
                const nlohmann::json& config) {
    manifest.command = command;
    manifest.seed = seed;
    manifest.config_json = config.dump();
    manifest.started_at = utc_timestamp();
  }

  void finish(const std::string& primary_output) {
    manifest.finished_at = utc_timestamp();
    write_manifest(manifest, primary_output);
  }
};

void emit(const std::string& text, const std::string& out,
          const std::string& command, std::uint64_t seed,
          const nlohmann::json& config) {
  if (out.empty()) {
    std::cout << text << '\n';
    return;
  }
  ManifestScope scope(command, seed, config);
  write_text_file(out, text + "\n");
  scope.manifest.outputs.push_back(out);
  scope.finish(out);
}

std::filesystem::path with_suffix(const std::filesystem::path& file,
                                  const std::string& tag) {
  std::filesystem::path p = file;
  const std::string ext = p.extension().string();
  p.replace_extension();
  return p.concat("." + tag + ext);
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  double H = 0.5, a = 1.0, b = 1.0, T = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool components = false;
};

int run_simulate(const SimulateArgs& args, const std::string& command) {
  const ModelParams params{args.H, args.a, args.b, args.T};
  params.validate(/*allow_zero_scale=*/true);
  if (args.n == 0) throw ParameterError("simulate: n must be >= 1");
  const nlohmann::json config = {
      {"H", args.H},       {"a", args.a},   {"b", args.b},
      {"T", args.T},       {"n", args.n},   {"seed", args.seed},
      {"out", args.out},   {"components", args.components}};
  ManifestScope scope(command, args.seed, config);
  const MixedPaths paths = sample_mixed_path(params, args.n, args.seed);
  write_path_csv(paths.mixed, args.out);
  scope.manifest.outputs.push_back(args.out);
  if (args.components) {
    const auto fbm = with_suffix(args.out, "fbm");
    const auto wiener = with_suffix(args.out, "wiener");
    write_path_csv(paths.fbm, fbm);
    write_path_csv(paths.wiener, wiener);
    scope.manifest.outputs.push_back(fbm.string());
    scope.manifest.outputs.push_back(wiener.string());
  }
  scope.finish(args.out);
  return 0;
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string in;
  std::vector<std::string> estimators;
  int k = -1;
  int k_min = -1, k_max = -1;
  double a = kNaN, b = kNaN;
  bool classify = false;
  int k_lo = 10, k_hi = -1;
  std::string format = "json";
  std::string out;
};

bool is_regression(EstimatorId id) {
  return id == EstimatorId::bar_H2 || id == EstimatorId::bar_H4;
}

bool needs_quartic_id(EstimatorId id) {
  return id == EstimatorId::hat_H4 || id == EstimatorId::tilde_H4 ||
         id == EstimatorId::bar_H4;
}

int ladder_top(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << (k + 1)) <= n) ++k;
  if ((std::size_t{1} << k) != n)
    throw ParameterError("estimate: input length must be a power of two");
  return k;
}

int run_estimate(const EstimateArgs& args, const std::string& command) {
  const GridPath path = read_path_csv(args.in);
  path.validate();
  const int top = ladder_top(path.n);
  const bool have_a = std::isfinite(args.a);
  const bool have_b = std::isfinite(args.b);

  std::vector<EstimatorId> ids;
  if (args.estimators.empty()) {
    ids = {EstimatorId::hat_H,    EstimatorId::tilde_H,
           EstimatorId::tilde_H2, EstimatorId::hat_H2,
           EstimatorId::hat_H4,   EstimatorId::tilde_H4,
           EstimatorId::tilde_a2, EstimatorId::tilde_b2,
           EstimatorId::hat_a2,   EstimatorId::hat_b2};
    if (top >= 20) {
      ids.push_back(EstimatorId::bar_H2);
      ids.push_back(EstimatorId::bar_H4);
    }
    if (have_a) ids.push_back(EstimatorId::hat_H_a);
    if (have_b) ids.push_back(EstimatorId::tilde_H_b);
    if (have_a && have_b) ids.push_back(EstimatorId::hat_H_ab);
  } else {
    for (const auto& name : args.estimators) {
      const auto id = estimator_from_name(name);
      if (!id) throw ParameterError("unknown estimator: " + name);
      ids.push_back(*id);
    }
  }

  std::vector<int> ks;
  if (args.k_min >= 0 || args.k_max >= 0) {
    if (args.k_min < 0 || args.k_max < args.k_min)
      throw ParameterError("estimate: need 0 <= k-min <= k-max");
    for (int k = args.k_min; k <= args.k_max; ++k) ks.push_back(k);
  } else {
    // default level: deep enough to be informative, shallow enough that the
    // two-level-lookahead estimators still fit on the ladder
    ks.push_back(args.k >= 0 ? args.k : std::max(top - 2, 1));
  }

  const bool want_quartic =
      std::any_of(ids.begin(), ids.end(), needs_quartic_id);
  const VariationLadder quad =
      power_variation_ladder(path, VariationKind::quadratic, 1, top);
  VariationLadder quart;
  if (want_quartic)
    quart = power_variation_ladder(path, VariationKind::quartic, 1, top);

  ModelParams known{0.5, have_a ? args.a : 0.0, have_b ? args.b : 0.0,
                    path.T};
  // The default battery is a survey: estimators that cannot be computed on
  // this path (pole, level out of range) become stub rows instead of killing
  // the run.  Explicitly requested estimators keep strict error exits.
  const bool battery = args.estimators.empty();
  struct FailedRow {
    std::size_t position;
    EstimatorId id;
    int k;
    std::string message;
  };
  std::vector<FailedRow> failed;
  std::size_t n_rows = 0;
  std::vector<EstimateRecord> records;
  for (const EstimatorId id : ids) {
    const std::vector<int> levels = is_regression(id) ? std::vector<int>{0} : ks;
    for (const int k : levels) {
      try {
      EstimateRecord rec;
      switch (id) {
        case EstimatorId::hat_H: rec = hat_H(quad, k); break;
        case EstimatorId::tilde_H: rec = tilde_H(quad, k); break;
        case EstimatorId::tilde_H2: rec = tilde_H2(quad, k); break;
        case EstimatorId::hat_H2: rec = hat_H2(quad, k); break;
        case EstimatorId::hat_H4:
          rec = quartic_estimators(quart, k).first;
          break;
        case EstimatorId::tilde_H4:
          rec = quartic_estimators(quart, k).second;
          break;
        case EstimatorId::bar_H2:
          rec = regression_H(quad,
                             default_regression_config(VariationKind::quadratic));
          break;
        case EstimatorId::bar_H4:
          rec = regression_H(quart,
                             default_regression_config(VariationKind::quartic));
          break;
        case EstimatorId::tilde_a2:
          rec = tilde_a2(quad, k);
          break;
        case EstimatorId::tilde_b2:
          rec = scale_estimators_low(quad, k).second;
          break;
        case EstimatorId::hat_a2:
          rec = scale_estimators_high(quad, k).first;
          break;
        case EstimatorId::hat_b2:
          rec = hat_b2(quad, k);
          break;
        case EstimatorId::hat_H_a:
          rec = known_coefficient_estimator(quad, k, KnownCoefficient::a,
                                            known);
          break;
        case EstimatorId::tilde_H_b:
          rec = known_coefficient_estimator(quad, k, KnownCoefficient::b,
                                            known);
          break;
        case EstimatorId::hat_H_ab:
          rec = known_coefficient_estimator(quad, k,
                                            KnownCoefficient::a_and_b, known);
          break;
      }
      attach_asymptotic_sd(rec, path.T,
                           have_a ? std::optional<double>(args.a)
                                  : std::nullopt,
                           have_b ? std::optional<double>(args.b)
                                  : std::nullopt);
      records.push_back(rec);
      } catch (const Error& e) {
        if (!battery) throw;
        failed.push_back({n_rows, id, k, e.what()});
      }
      ++n_rows;
    }
  }

  nlohmann::json config = {{"in", args.in},
                           {"format", args.format},
                           {"classify", args.classify}};
  std::string text;
  if (args.format == "csv") {
    text = estimates_to_csv(records);
    // splice stub rows (empty estimate/sd columns) for failed estimators
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t pos = text.find('\n'); pos != std::string::npos;
         pos = text.find('\n', start)) {
      lines.push_back(text.substr(start, pos - start));
      start = pos + 1;
    }
    text = lines[0];
    std::size_t next_ok = 1, next_failed = 0;
    for (std::size_t row = 0; row < n_rows; ++row) {
      text += '\n';
      if (next_failed < failed.size() && failed[next_failed].position == row) {
        const FailedRow& f = failed[next_failed++];
        text += std::string(estimator_name(f.id)) + ',' +
                std::to_string(f.k) + ",,,";
      } else {
        text += lines[next_ok++];
      }
    }
  } else if (args.format == "json") {
    nlohmann::json ok = nlohmann::json::parse(estimates_to_json(records));
    nlohmann::json body = nlohmann::json::array();
    std::size_t next_ok = 0, next_failed = 0;
    for (std::size_t row = 0; row < n_rows; ++row) {
      if (next_failed < failed.size() && failed[next_failed].position == row) {
        const FailedRow& f = failed[next_failed++];
        body.push_back({{"estimator", std::string(estimator_name(f.id))},
                        {"k", f.k},
                        {"estimate", nullptr},
                        {"sd", nullptr},
                        {"degenerate", nullptr},
                        {"error", f.message}});
      } else {
        body.push_back(ok[next_ok++]);
      }
    }
    nlohmann::json root = {{"records", body}};
    if (args.classify) {
      const int k_hi = args.k_hi >= 0 ? args.k_hi : top - 1;
      const RegimeVerdict v = classify_regime(quad, args.k_lo, k_hi);
      const char* name = v.verdict == Regime::H_below_3_4   ? "H_below_3_4"
                         : v.verdict == Regime::H_above_3_4 ? "H_above_3_4"
                                                            : "inconclusive";
      root["regime"] = {{"verdict", name},
                        {"negative_fraction", v.evidence},
                        {"k_lo", v.k_lo},
                        {"k_hi", v.k_hi},
                        {"z_mean", v.z_mean}};
    }
    text = root.dump(2);
  } else {
    throw ParameterError("estimate: format must be json or csv");
  }
  emit(text, args.out, command, 0, config);
  return 0;
}

// --- table --------------------------------------------------------------------

struct TableArgs {
  std::string preset;
  std::uint64_t seed = 1;
  int reps = 0;
  std::size_t n = 0;
  int workers = 0;
  std::string out;
};

int run_table_cmd(const TableArgs& args, const std::string& command) {
  const nlohmann::json config = {{"preset", args.preset}, {"seed", args.seed},
                                 {"reps", args.reps},     {"n", args.n},
                                 {"workers", args.workers}};
  ManifestScope scope(command, args.seed, config);
  const std::string json_path = args.out + ".json";
  const std::string csv_path = args.out + ".csv";
  if (args.preset == "table3") {
    const std::size_t n = args.n ? args.n : (std::size_t{1} << 20);
    const UTableReport report =
        u_ladder_table({0.7, 0.8}, n, args.seed, 10, 19);
    write_text_file(json_path, u_table_to_json(report) + "\n");
    std::string csv = "H";
    for (int k = report.k_lo; k <= report.k_hi; ++k)
      csv += ",k=" + std::to_string(k);
    csv += '\n';
    for (std::size_t i = 0; i < report.H_list.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%g", report.H_list[i]);
      csv += buf;
      for (const double u : report.scaled_u[i]) {
        std::snprintf(buf, sizeof buf, ",%.17g", u);
        csv += buf;
      }
      csv += '\n';
    }
    write_text_file(csv_path, csv);
  } else {
    ExperimentConfig cfg = table_preset(args.preset, args.seed, args.workers);
    if (args.reps > 0) cfg.replications = args.reps;
    if (args.n > 0) cfg.n = args.n;
    const McSummary summary = run_table(cfg);
    write_text_file(json_path, summary_to_json(summary) + "\n");
    write_text_file(csv_path, summary_to_csv(summary));
  }
  scope.manifest.outputs.push_back(json_path);
  scope.manifest.outputs.push_back(csv_path);
  scope.finish(args.out);
  std::cout << "wrote " << json_path << " and " << csv_path << '\n';
  return 0;
}

// --- clt ----------------------------------------------------------------------

struct CltArgs {
  double H = 0.5;
  int p = 0, r = 2;
  std::size_t n = std::size_t{1} << 14;
  int reps = 2000;
  std::uint64_t seed = 1;
  int workers = 0;
  bool scaling = false;
  std::string out;
};

int run_clt(const CltArgs& args, const std::string& command) {
  const CltReport report =
      args.scaling
          ? rosenblatt_scaling_check(args.H, args.p, args.r, args.n,
                                     args.reps, args.seed, args.workers)
          : clt_check(args.H, args.p, args.r, args.n, args.reps, args.seed,
                      args.workers);
  const nlohmann::json config = {{"H", args.H},       {"p", args.p},
                                 {"r", args.r},       {"n", args.n},
                                 {"reps", args.reps}, {"seed", args.seed},
                                 {"scaling", args.scaling}};
  emit(clt_report_to_json(report), args.out, command, args.seed, config);
  return 0;
}

// --- rate ---------------------------------------------------------------------

struct RateArgs {
  double H = 0.5;
  int p = 0, r = 2;
  double gamma = 0.5, eps = 0.1;
  int levels = 6;
  std::uint64_t seed = 1;
  std::string out;
};

int run_rate(const RateArgs& args, const std::string& command) {
  const RateReport report = rate_check(args.H, args.p, args.r, args.gamma,
                                       args.eps, args.levels, args.seed);
  const nlohmann::json config = {
      {"H", args.H},         {"p", args.p},   {"r", args.r},
      {"gamma", args.gamma}, {"eps", args.eps}, {"levels", args.levels},
      {"seed", args.seed}};
  emit(rate_report_to_json(report), args.out, command, args.seed, config);
  return 0;
}

// --- limits ---------------------------------------------------------------------

struct LimitsArgs {
  std::string quantity;
  double H = kNaN;
  int p = -1, r = -1, m = -1, q = -1, k = 0;
  double T = 1.0, a = 1.0, b = 1.0, tol = 1e-10;
  std::string out;
};

int run_limits(const LimitsArgs& args, const std::string& command) {
  auto need = [&](bool ok, const char* what) {
    if (!ok)
      throw ParameterError("limits --quantity " + args.quantity +
                           ": missing or invalid " + what);
  };
  SeriesEvaluation eval{0.0, 0, 0.0};
  double H_out = args.H;
  const std::string& quantity = args.quantity;
  if (quantity == "sigma2_Hr") {
    need(std::isfinite(args.H), "--H");
    need(args.r >= 0, "--r");
    eval = sigma2_Hr(args.H, args.r, args.tol);
  } else if (quantity == "sigma2_pr") {
    need(args.p >= 0 && args.r >= 0, "--p/--r");
    eval.value = sigma2_pr(args.p, args.r);
    H_out = kNaN;
  } else if (quantity == "sigma_34_r") {
    need(args.r >= 0, "--r");
    eval.value = sigma_34_r(args.r);
    H_out = 0.75;
  } else if (quantity == "critical_limit_variance") {
    need(args.p >= 0 && args.r >= 0, "--p/--r");
    eval.value = critical_limit_variance(args.p, args.r);
    H_out = 0.75;
  } else if (quantity == "sigma_prime_H") {
    need(std::isfinite(args.H), "--H");
    eval = sigma_prime_H(args.H, args.tol);
  } else if (quantity == "sigma_double_prime_H") {
    need(std::isfinite(args.H), "--H");
    eval = sigma_double_prime_H(args.H, args.T, args.tol, args.a, args.b);
  } else if (quantity == "rho_prime") {
    need(std::isfinite(args.H), "--H");
    need(args.m >= 0, "--m");
    eval.value = rho_prime(args.H, args.m);
  } else if (quantity == "rho_double_prime") {
    need(std::isfinite(args.H), "--H");
    need(args.m >= 0, "--m");
    eval.value = rho_double_prime(args.H, args.m);
  } else if (quantity == "fgn_power_series") {
    need(std::isfinite(args.H), "--H");
    need(args.q >= 2, "--q");
    eval = fgn_power_series_sum(args.H, args.q, args.tol);
  } else if (quantity == "hermite_moment") {
    need(args.m >= 0, "--m");
    eval.value = hermite_moment(args.m);
    H_out = kNaN;
  } else if (quantity == "tilde_H_bias") {
    need(std::isfinite(args.H), "--H");
    eval.value = tilde_H_bias(args.H, args.a, args.b, args.T, args.k);
  } else if (quantity == "high_regime_variance_alt") {
    need(std::isfinite(args.H), "--H");
    eval.value = high_regime_variance_alt(args.H, args.T);
  } else {
    throw ParameterError("unknown quantity: " + quantity);
  }
  const nlohmann::json j = {{"quantity", quantity},
                            {"H", H_out},
                            {"value", eval.value},
                            {"truncation_lag", eval.truncation_lag},
                            {"tail_bound", eval.tail_bound}};
  const nlohmann::json config = {{"quantity", quantity}};
  emit(j.dump(2), args.out, command, 0, config);
  return 0;
}

// --- classify --------------------------------------------------------------------

struct ClassifyArgs {
  std::string in;
  std::vector<double> H;
  double a = 1.0, b = 1.0, T = 3.0;
  std::size_t n = std::size_t{1} << 20;
  std::uint64_t seed = 1;
  int reps = 1;
  int k_lo = 10, k_hi = 19;
  int workers = 0;
  std::string out;
};

nlohmann::json verdict_json(const RegimeVerdict& v) {
  const char* name = v.verdict == Regime::H_below_3_4   ? "H_below_3_4"
                     : v.verdict == Regime::H_above_3_4 ? "H_above_3_4"
                                                        : "inconclusive";
  return {{"verdict", name},
          {"negative_fraction", v.evidence},
          {"k_lo", v.k_lo},
          {"k_hi", v.k_hi},
          {"z_mean", v.z_mean}};
}

int run_classify(const ClassifyArgs& args, const std::string& command) {
  const nlohmann::json config = {
      {"in", args.in}, {"H", args.H},         {"n", args.n},
      {"reps", args.reps}, {"seed", args.seed}, {"k_lo", args.k_lo},
      {"k_hi", args.k_hi}};
  std::string text;
  if (!args.in.empty()) {
    const GridPath path = read_path_csv(args.in);
    const VariationLadder ladder = power_variation_ladder(
        path, VariationKind::quadratic, std::min(args.k_lo, 1),
        args.k_hi + 1);
    text = verdict_json(classify_regime(ladder, args.k_lo, args.k_hi)).dump(2);
  } else if (args.H.empty()) {
    throw ParameterError("classify: provide --in or --H");
  } else if (args.reps == 1 && args.H.size() == 1) {
    const ModelParams params{args.H[0], args.a, args.b, args.T};
    params.validate();
    const MixedPaths paths = sample_mixed_path(params, args.n, args.seed);
    const VariationLadder ladder = power_variation_ladder(
        paths.mixed, VariationKind::quadratic, std::min(args.k_lo, 1),
        args.k_hi + 1);
    text = verdict_json(classify_regime(ladder, args.k_lo, args.k_hi)).dump(2);
  } else {
    const ClassifierReport report =
        classifier_validation(args.H, args.n, args.reps, args.seed,
                              args.k_lo, args.k_hi, args.workers);
    text = classifier_report_to_json(report);
  }
  emit(text, args.out, command, args.seed, config);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mixedvar: simulation, estimation, and limit-theorem checks for the "
      "mixed model a*B^H + b*W"};
  app.set_version_flag("--version", mixedvar::kVersion);
  app.require_subcommand(1);
  const std::string command = join_args(argc, argv);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "sample a mixed path to CSV");
  c_sim->add_option("--H", sim.H, "Hurst index in (0,1)")->required();
  c_sim->add_option("--a", sim.a, "fBm coefficient (>= 0)");
  c_sim->add_option("--b", sim.b, "Wiener coefficient (>= 0)");
  c_sim->add_option("--T", sim.T, "horizon");
  c_sim->add_option("--n", sim.n, "number of grid steps")->required();
  c_sim->add_option("--seed", sim.seed, "master seed");
  c_sim->add_option("--out", sim.out, "output CSV path")->required();
  c_sim->add_flag("--components", sim.components,
                  "also write the fBm and Wiener components");

  EstimateArgs est;
  auto* c_est =
      app.add_subcommand("estimate", "run estimators on a path CSV");
  c_est->add_option("--in", est.in, "input path CSV")->required();
  c_est->add_option("--estimator", est.estimators,
                    "estimator names (repeatable; default: every estimator "
                    "that needs no unknown coefficients)");
  c_est->add_option("--k", est.k, "dyadic level (default: log2(n) - 2)");
  c_est->add_option("--k-min", est.k_min, "sweep start level");
  c_est->add_option("--k-max", est.k_max, "sweep end level");
  c_est->add_option("--a", est.a, "known fBm coefficient");
  c_est->add_option("--b", est.b, "known Wiener coefficient");
  c_est->add_flag("--classify", est.classify,
                  "include the regime verdict (json format only)");
  c_est->add_option("--k-lo", est.k_lo, "classifier window start");
  c_est->add_option("--k-hi", est.k_hi,
                    "classifier window end (default: log2(n) - 1)");
  c_est->add_option("--format", est.format, "json or csv");
  c_est->add_option("--out", est.out, "output file (default: stdout)");

  TableArgs tab;
  auto* c_tab = app.add_subcommand(
      "table", "replication table presets (table1..table6)");
  c_tab->add_option("--preset", tab.preset, "table1..table6")->required();
  c_tab->add_option("--seed", tab.seed, "master seed");
  c_tab->add_option("--reps", tab.reps, "override replication count");
  c_tab->add_option("--n", tab.n, "override path length");
  c_tab->add_option("--workers", tab.workers,
                    "worker threads (0: MIXEDVAR_WORKERS or hardware)");
  c_tab->add_option("--out", tab.out, "output base path")->required();

  CltArgs clt;
  auto* c_clt = app.add_subcommand(
      "clt", "sample a normalized mixed-variation statistic and compare "
             "against its Gaussian limit");
  c_clt->add_option("--H", clt.H, "Hurst index")->required();
  c_clt->add_option("--p", clt.p, "Wiener exponent")->required();
  c_clt->add_option("--r", clt.r, "fBm exponent")->required();
  c_clt->add_option("--n", clt.n, "terms per replication");
  c_clt->add_option("--reps", clt.reps, "replications");
  c_clt->add_option("--seed", clt.seed, "master seed");
  c_clt->add_option("--workers", clt.workers, "worker threads");
  c_clt->add_flag("--scaling", clt.scaling,
                  "variance-scaling mode for the non-Gaussian regime "
                  "(even p, r with H > 3/4)");
  c_clt->add_option("--out", clt.out, "output file (default: stdout)");

  RateArgs rate;
  auto* c_rate = app.add_subcommand(
      "rate", "fit the dyadic decay exponent of the centered sum");
  c_rate->add_option("--H", rate.H, "Hurst index")->required();
  c_rate->add_option("--p", rate.p, "Wiener exponent")->required();
  c_rate->add_option("--r", rate.r, "fBm exponent")->required();
  c_rate->add_option("--gamma", rate.gamma, "claimed exponent bound")
      ->required();
  c_rate->add_option("--eps", rate.eps, "slack added to gamma");
  c_rate->add_option("--levels", rate.levels, "number of dyadic levels");
  c_rate->add_option("--seed", rate.seed, "master seed");
  c_rate->add_option("--out", rate.out, "output file (default: stdout)");

  LimitsArgs lim;
  auto* c_lim = app.add_subcommand(
      "limits", "evaluate limit-theorem constants and series");
  c_lim->add_option("--quantity", lim.quantity,
                    "sigma2_Hr | sigma2_pr | sigma_34_r | "
                    "critical_limit_variance | sigma_prime_H | "
                    "sigma_double_prime_H | rho_prime | rho_double_prime | "
                    "fgn_power_series | hermite_moment | tilde_H_bias | "
                    "high_regime_variance_alt")
      ->required();
  c_lim->add_option("--H", lim.H, "Hurst index");
  c_lim->add_option("--p", lim.p, "Wiener exponent");
  c_lim->add_option("--r", lim.r, "fBm exponent");
  c_lim->add_option("--m", lim.m, "lag / moment order");
  c_lim->add_option("--q", lim.q, "series power");
  c_lim->add_option("--k", lim.k, "dyadic level (tilde_H_bias)");
  c_lim->add_option("--T", lim.T, "horizon");
  c_lim->add_option("--a", lim.a, "fBm coefficient");
  c_lim->add_option("--b", lim.b, "Wiener coefficient");
  c_lim->add_option("--tol", lim.tol, "series tail tolerance");
  c_lim->add_option("--out", lim.out, "output file (default: stdout)");

  ClassifyArgs cls;
  auto* c_cls = app.add_subcommand(
      "classify", "decide H < 3/4 vs H > 3/4 from the dyadic sign ladder");
  c_cls->add_option("--in", cls.in, "path CSV to classify");
  c_cls->add_option("--H", cls.H,
                    "simulate at these H values instead of reading --in "
                    "(repeatable)");
  c_cls->add_option("--a", cls.a, "fBm coefficient");
  c_cls->add_option("--b", cls.b, "Wiener coefficient");
  c_cls->add_option("--T", cls.T, "horizon");
  c_cls->add_option("--n", cls.n, "path length");
  c_cls->add_option("--seed", cls.seed, "master seed");
  c_cls->add_option("--reps", cls.reps,
                    "replications (> 1: per-H verdict counts)");
  c_cls->add_option("--k-lo", cls.k_lo, "window start");
  c_cls->add_option("--k-hi", cls.k_hi, "window end");
  c_cls->add_option("--workers", cls.workers, "worker threads");
  c_cls->add_option("--out", cls.out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(mixedvar::ExitCode::parameter_error);
  }

  try {
    if (*c_sim) return run_simulate(sim, command);
    if (*c_est) return run_estimate(est, command);
    if (*c_tab) return run_table_cmd(tab, command);
    if (*c_clt) return run_clt(clt, command);
    if (*c_rate) return run_rate(rate, command);
    if (*c_lim) return run_limits(lim, command);
    if (*c_cls) return run_classify(cls, command);
  } catch (const mixedvar::Error& e) {
    std::cerr << "mixedvar: error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mixedvar: error: " << e.what() << '\n';
    return static_cast<int>(mixedvar::ExitCode::failure);
  }
  return 0;
}
