#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fts/cov_kernel.hpp"
#include "fts/generator.hpp"
#include "fts/reconstruct.hpp"

namespace fts {

enum class ExperimentKind { size, power, decay, threshold };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct GridParams {
  double rho = 0.1;
  double sigma_mesh = 0.4;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::size;
  GeneratorConfig generator;
  std::optional<ReconstructionConfig> reconstruction;
  std::optional<ChangeSpec> change;
  int N = 200;
  double horizon_factor = 5.0;
  double alpha = 0.1;
  int n_rep = 100;
  int quantile_reps = 20000;
  int lambda_resolution = 512;
  GridParams grid;
  uint64_t master_seed = 1;

  // decay experiment
  std::vector<int> n_list;
  // nw reconstruction noise model
  double nw_noise_sigma = 0.1;
  DesignDensity nw_design = DesignDensity::uniform;
  // calibration
  int lrv_bandwidth = -1;     // auto
  bool oracle_kernel = false; // use the generator's true long-run kernel
  int threads = 1;

  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

struct ExperimentReport {
  nlohmann::json config_echo;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary;
  double wall_ms = 0.0;
};

ExperimentReport run_size_experiment(const ExperimentConfig& cfg);
ExperimentReport run_power_experiment(const ExperimentConfig& cfg);
ExperimentReport run_decay_experiment(const ExperimentConfig& cfg);
ExperimentReport run_threshold_table(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Writes <stem>.csv, <stem>.config.json (sidecar; rerunning from it
/// reproduces the CSV byte-for-byte) and <stem>.summary.json under out_dir.
void emit_report(const ExperimentReport& report, const std::string& out_dir,
                 const std::string& stem);

/// Deterministic number formatting used in all CSV output.
std::string format_csv_value(double v);

/// Calibrated threshold for a config: estimates the long-run kernel from an
/// independent calibration run (or takes the generator truth in oracle mode)
/// and simulates the sup quantile. Returns (q, kernel).
std::pair<double, CovKernel> calibrate_threshold(const ExperimentConfig& cfg);

}  // namespace fts
