#include "fts/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <thread>

#include "fts/brownian.hpp"
#include "fts/discretize.hpp"
#include "fts/monitor.hpp"
#include "fts/partial_sum.hpp"
#include "fts/prokhorov.hpp"
#include "fts/rng.hpp"
#include "fts/wasserstein.hpp"

namespace fts {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::size: return "size";
    case ExperimentKind::power: return "power";
    case ExperimentKind::decay: return "decay";
    case ExperimentKind::threshold: return "threshold";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "size") return ExperimentKind::size;
  if (s == "power") return ExperimentKind::power;
  if (s == "decay") return ExperimentKind::decay;
  if (s == "threshold") return ExperimentKind::threshold;
  throw std::invalid_argument("unknown experiment kind: " + s);
}

void ExperimentConfig::validate() const {
  generator.validate();
  if (reconstruction) reconstruction->validate();
  if (change) change->validate();
  if (N < 1) throw std::invalid_argument("ExperimentConfig: N >= 1");
  if (!(horizon_factor > 0.0))
    throw std::invalid_argument("ExperimentConfig: horizon_factor > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ExperimentConfig: alpha in (0,1)");
  if (n_rep < 1) throw std::invalid_argument("ExperimentConfig: n_rep >= 1");
  if (quantile_reps < 100)
    throw std::invalid_argument("ExperimentConfig: quantile_reps >= 100");
  if (lambda_resolution < 1)
    throw std::invalid_argument("ExperimentConfig: lambda_resolution >= 1");
  if (!(grid.rho > 0.0 && grid.rho < grid.sigma_mesh && grid.sigma_mesh < 1.0))
    throw std::invalid_argument("ExperimentConfig: need 0 < rho < sigma_mesh < 1");
  if (experiment == ExperimentKind::decay) {
    if (n_list.empty())
      throw std::invalid_argument("ExperimentConfig: decay needs n_list");
    for (size_t i = 0; i < n_list.size(); ++i) {
      if (n_list[i] < 8)
        throw std::invalid_argument("ExperimentConfig: decay N values >= 8");
      if (i > 0 && n_list[i] <= n_list[i - 1])
        throw std::invalid_argument("ExperimentConfig: n_list must increase");
    }
  }
  if (threads < 1) throw std::invalid_argument("ExperimentConfig: threads >= 1");
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"experiment", to_string(c.experiment)},
                     {"generator", c.generator},
                     {"N", c.N},
                     {"horizon_factor", c.horizon_factor},
                     {"alpha", c.alpha},
                     {"n_rep", c.n_rep},
                     {"quantile_reps", c.quantile_reps},
                     {"lambda_resolution", c.lambda_resolution},
                     {"grid", {{"rho", c.grid.rho}, {"sigma_mesh", c.grid.sigma_mesh}}},
                     {"master_seed", c.master_seed},
                     {"lrv_bandwidth", c.lrv_bandwidth},
                     {"oracle_kernel", c.oracle_kernel},
                     {"threads", c.threads}};
  if (c.reconstruction) {
    j["reconstruction"] = *c.reconstruction;
    j["nw_noise_sigma"] = c.nw_noise_sigma;
    j["nw_design"] =
        c.nw_design == DesignDensity::uniform ? "uniform" : "gaussian";
  }
  if (c.change) j["change"] = *c.change;
  if (!c.n_list.empty()) j["n_list"] = c.n_list;
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c.experiment =
      experiment_kind_from_string(j.value("experiment", std::string("size")));
  if (j.contains("generator")) j.at("generator").get_to(c.generator);
  if (j.contains("reconstruction")) {
    ReconstructionConfig r;
    j.at("reconstruction").get_to(r);
    c.reconstruction = r;
  }
  if (j.contains("change")) {
    ChangeSpec ch;
    j.at("change").get_to(ch);
    c.change = ch;
  }
  c.N = j.value("N", 200);
  c.horizon_factor = j.value("horizon_factor", 5.0);
  c.alpha = j.value("alpha", 0.1);
  c.n_rep = j.value("n_rep", 100);
  c.quantile_reps = j.value("quantile_reps", 20000);
  c.lambda_resolution = j.value("lambda_resolution", 512);
  if (j.contains("grid")) {
    c.grid.rho = j.at("grid").value("rho", 0.1);
    c.grid.sigma_mesh = j.at("grid").value("sigma_mesh", 0.4);
  }
  c.master_seed = j.value("master_seed", uint64_t{1});
  c.n_list = j.value("n_list", std::vector<int>{});
  c.nw_noise_sigma = j.value("nw_noise_sigma", 0.1);
  c.nw_design = j.value("nw_design", std::string("uniform")) == "gaussian"
                    ? DesignDensity::gaussian
                    : DesignDensity::uniform;
  c.lrv_bandwidth = j.value("lrv_bandwidth", -1);
  c.oracle_kernel = j.value("oracle_kernel", false);
  c.threads = j.value("threads", 1);
  c.validate();
}

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

/// Run body(i) for i in [0, n) on cfg.threads workers; results must be
/// written by index so assembly order never depends on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min(threads, n);
  pool.reserve(k);
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

/// Apply the configured reconstruction scheme to one observation.
GridFunction reconstruct_one(const GridFunction& latent, const ExperimentConfig& cfg,
                             uint64_t seed) {
  const ReconstructionConfig& rc = *cfg.reconstruction;
  switch (rc.scheme) {
    case Scheme::grid:
      return reconstruct_grid(latent, rc.M).first;
    case Scheme::nw:
      return reconstruct_nw(latent, rc, cfg.nw_design, cfg.nw_noise_sigma, seed).first;
    case Scheme::kde:
      return reconstruct_kde(latent, rc.M, rc.bandwidth, seed).first;
  }
  throw std::logic_error("reconstruct_one: unreachable");
}

std::vector<GridFunction> observe_series(std::vector<GridFunction> latent,
                                         const ExperimentConfig& cfg,
                                         const char* tag, uint64_t rep) {
  if (!cfg.reconstruction) return latent;
  std::vector<GridFunction> out;
  out.reserve(latent.size());
  for (size_t i = 0; i < latent.size(); ++i)
    out.push_back(reconstruct_one(
        latent[i], cfg, derive_seed(cfg.master_seed, tag, (rep << 24) ^ i)));
  return out;
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json j;
  to_json(j, cfg);
  return j;
}

struct MonitorRunSummary {
  double rate = 0.0, se = 0.0, mean_max_gamma = 0.0;
  double mean_delay = 0.0, delay_p50 = 0.0, delay_p90 = 0.0;
  int n_alarm = 0;
};

}  // namespace

std::pair<double, CovKernel> calibrate_threshold(const ExperimentConfig& cfg) {
  SeriesGenerator gen(cfg.generator);
  CovKernel kernel;
  if (cfg.oracle_kernel) {
    kernel = kernel_from_matrix(gen.grid_nodes(), cfg.generator.d,
                                gen.long_run_kernel_matrix(), true);
  } else {
    // Fresh series, independent of every monitoring replication.
    auto calib = gen.generate(cfg.N, derive_seed(cfg.master_seed, "calib", 0));
    calib = observe_series(std::move(calib), cfg, "calib_recon", 0);
    kernel = estimate_lrv(calib, cfg.lrv_bandwidth, /*assume_centered=*/false);
  }
  const double q = sup_quantile(kernel, cfg.alpha, cfg.quantile_reps,
                                cfg.lambda_resolution,
                                derive_seed(cfg.master_seed, "quantile", 0));
  return {q, std::move(kernel)};
}

namespace {

ExperimentReport run_monitoring_experiment(const ExperimentConfig& cfg, bool power) {
  const double t0 = now_ms();
  cfg.validate();
  if (power) {
    if (!cfg.change) throw std::invalid_argument("power experiment requires change");
    if (sup_norm(cfg.change->mu1 - cfg.change->mu2) == 0.0)
      throw std::invalid_argument("power experiment requires mu1 != mu2");
  } else if (cfg.change) {
    if (sup_norm(cfg.change->mu1 - cfg.change->mu2) != 0.0)
      throw std::invalid_argument("size experiment requires mu1 == mu2 (or no change)");
  }

  auto [q, kernel] = calibrate_threshold(cfg);
  SeriesGenerator gen(cfg.generator);
  const int horizon = static_cast<int>(std::llround(cfg.horizon_factor * cfg.N));

  ExperimentReport rep;
  rep.config_echo = config_echo(cfg);
  rep.columns = {"rep",       "alarmed",  "alarm_k",
                 "max_gamma", "steps_run", "truncated"};
  rep.rows.assign(cfg.n_rep, {});

  parallel_for(cfg.n_rep, cfg.threads, [&](int r) {
    auto latent = gen.generate(cfg.N + horizon,
                               derive_seed(cfg.master_seed, "rep", r));
    if (cfg.change) latent = apply_change(std::move(latent), *cfg.change, cfg.N);
    auto observed = observe_series(std::move(latent), cfg, "rep_recon", r);

    std::span<const GridFunction> all(observed);
    DetectorState state = init_monitor(all.subspan(0, cfg.N), q);
    MonitorResult res = run_monitor(state, all.subspan(cfg.N), horizon);
    rep.rows[r] = {static_cast<double>(r),
                   res.alarmed ? 1.0 : 0.0,
                   res.alarm_k ? static_cast<double>(*res.alarm_k) : -1.0,
                   res.max_gamma,
                   static_cast<double>(res.steps_run),
                   res.truncated ? 1.0 : 0.0};
  });

  MonitorRunSummary s;
  std::vector<double> delays;
  for (const auto& row : rep.rows) {
    s.rate += row[1];
    s.mean_max_gamma += row[3];
    if (row[1] > 0.5 && power)
      delays.push_back(row[2] - cfg.change->k_star);
  }
  s.n_alarm = static_cast<int>(std::llround(s.rate));
  s.rate /= cfg.n_rep;
  s.mean_max_gamma /= cfg.n_rep;
  s.se = std::sqrt(std::max(0.0, s.rate * (1.0 - s.rate) / cfg.n_rep));

  rep.summary = {{"experiment", power ? "power" : "size"},
                 {"q", q},
                 {"rejection_rate", s.rate},
                 {"mc_se", s.se},
                 {"n_alarm", s.n_alarm},
                 {"mean_max_gamma", s.mean_max_gamma},
                 {"horizon", horizon},
                 {"truncated_lower_bound", true}};
  if (power && !delays.empty()) {
    std::sort(delays.begin(), delays.end());
    double mean = 0.0;
    for (double d : delays) mean += d;
    mean /= delays.size();
    rep.summary["mean_delay"] = mean;
    rep.summary["delay_p50"] = delays[delays.size() / 2];
    rep.summary["delay_p90"] = delays[(delays.size() * 9) / 10];
  }
  rep.wall_ms = now_ms() - t0;
  return rep;
}

}  // namespace

ExperimentReport run_size_experiment(const ExperimentConfig& cfg) {
  return run_monitoring_experiment(cfg, false);
}

ExperimentReport run_power_experiment(const ExperimentConfig& cfg) {
  return run_monitoring_experiment(cfg, true);
}

ExperimentReport run_decay_experiment(const ExperimentConfig& cfg) {
  const double t0 = now_ms();
  cfg.validate();
  if (cfg.experiment != ExperimentKind::decay || cfg.n_list.empty())
    throw std::invalid_argument("run_decay_experiment: decay config required");

  SeriesGenerator gen(cfg.generator);
  ExperimentReport rep;
  rep.config_echo = config_echo(cfg);
  rep.columns = {"N", "total_points", "d_w2", "prokhorov", "n_rep"};

  for (int n : cfg.n_list) {
    DiscretizationGrid grid = make_grid(n, cfg.grid.rho, cfg.grid.sigma_mesh);
    if (grid.total_points() > 4096)
      throw std::invalid_argument("run_decay_experiment: grid too large (>4096)");
    if (grid.u_bound > std::max(std::abs(cfg.generator.interval.lower),
                                std::abs(cfg.generator.interval.upper)))
      throw std::invalid_argument(
          "run_decay_experiment: truncation window exceeds generator interval");

    // Limit covariance on exactly the grid points (generator truth).
    CovKernel c = kernel_from_matrix(
        grid.u_points, cfg.generator.d,
        gen.long_run_kernel_matrix(grid.u_points), true);
    CovMatrix target = spacetime_cov(c, grid.lambda_points, grid.u_points);

    std::vector<Eigen::VectorXd> vectors(cfg.n_rep);
    std::vector<GridFunction> zero_center{
        GridFunction(cfg.generator.interval, cfg.generator.n_nodes, cfg.generator.d)};
    parallel_for(cfg.n_rep, cfg.threads, [&](int r) {
      auto series = gen.generate(
          n, derive_seed(cfg.master_seed, "decay",
                         (static_cast<uint64_t>(n) << 32) ^ static_cast<uint64_t>(r)));
      PartialSumField field = build_partial_sum(series, zero_center);
      vectors[r] = vectorize(discretize(field, grid, FieldEval::step));
    });

    CovMatrix sigma_hat = empirical_cov(vectors);
    const double d_w2 = wasserstein2_gaussian(sigma_hat, target);

    // Prokhorov between the empirical vector cloud and an equal-size
    // Gaussian cloud from the limit covariance (512-atom subsample cap).
    const int n_atoms = std::min<int>(512, cfg.n_rep);
    std::vector<Eigen::VectorXd> cloud(vectors.begin(), vectors.begin() + n_atoms);
    Eigen::MatrixXd fac = psd_factor(target.m);
    Rng grng(derive_seed(cfg.master_seed, "decaygauss", static_cast<uint64_t>(n)));
    std::vector<Eigen::VectorXd> gauss_cloud(n_atoms);
    Eigen::VectorXd z(fac.cols());
    for (int i = 0; i < n_atoms; ++i) {
      for (int jj = 0; jj < fac.cols(); ++jj) z[jj] = grng.normal();
      gauss_cloud[i] = fac * z;
    }
    const double pi = prokhorov_discrete(EmpiricalMeasure::uniform(cloud),
                                         EmpiricalMeasure::uniform(gauss_cloud),
                                         GroundNorm::max);
    rep.rows.push_back({static_cast<double>(n),
                        static_cast<double>(grid.total_points()), d_w2, pi,
                        static_cast<double>(cfg.n_rep)});
  }

  int inversions = 0;
  for (size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i][2] > rep.rows[i - 1][2]) ++inversions;
  // Descriptive log-log slope of D(N).
  double slope = 0.0;
  if (rep.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : rep.rows) {
      const double x = std::log(row[0]), y = std::log(std::max(row[2], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(rep.rows.size());
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  rep.summary = {{"experiment", "decay"},
                 {"inversions", inversions},
                 {"loglog_slope", slope}};
  rep.wall_ms = now_ms() - t0;
  return rep;
}

ExperimentReport run_threshold_table(const ExperimentConfig& cfg) {
  const double t0 = now_ms();
  cfg.validate();
  auto [q, kernel] = calibrate_threshold(cfg);
  ExperimentReport rep;
  rep.config_echo = config_echo(cfg);
  rep.columns = {"alpha", "q", "n_rep", "resolution", "seed"};
  rep.rows.push_back({cfg.alpha, q, static_cast<double>(cfg.quantile_reps),
                      static_cast<double>(cfg.lambda_resolution),
                      static_cast<double>(cfg.master_seed)});
  rep.summary = {{"experiment", "threshold"},
                 {"q", q},
                 {"lag_bandwidth", kernel.lag_bandwidth}};
  rep.wall_ms = now_ms() - t0;
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::size: return run_size_experiment(cfg);
    case ExperimentKind::power: return run_power_experiment(cfg);
    case ExperimentKind::decay: return run_decay_experiment(cfg);
    case ExperimentKind::threshold: return run_threshold_table(cfg);
  }
  throw std::logic_error("run_experiment: unreachable");
}

std::string format_csv_value(double v) {
  char buf[64];
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.007199254740992e15)
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_report(const ExperimentReport& report, const std::string& out_dir,
                 const std::string& stem) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path base = fs::path(out_dir) / stem;

  {
    std::ofstream csv(base.string() + ".csv", std::ios::binary);
    if (!csv) throw std::runtime_error("emit_report: cannot write " + base.string() + ".csv");
    for (size_t i = 0; i < report.columns.size(); ++i)
      csv << (i ? "," : "") << report.columns[i];
    csv << '\n';
    for (const auto& row : report.rows) {
      for (size_t i = 0; i < row.size(); ++i)
        csv << (i ? "," : "") << format_csv_value(row[i]);
      csv << '\n';
    }
    if (!csv.good())
      throw std::runtime_error("emit_report: write failure at " + base.string() + ".csv");
  }
  {
    std::ofstream side(base.string() + ".config.json", std::ios::binary);
    if (!side)
      throw std::runtime_error("emit_report: cannot write sidecar at " + base.string());
    side << report.config_echo.dump(2) << '\n';
  }
  {
    nlohmann::json s = report.summary;
    s["wall_ms"] = report.wall_ms;
    std::ofstream sf(base.string() + ".summary.json", std::ios::binary);
    if (!sf)
      throw std::runtime_error("emit_report: cannot write summary at " + base.string());
    sf << s.dump(2) << '\n';
  }
}

}  // namespace fts
