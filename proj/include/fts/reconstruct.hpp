#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fts/grid_function.hpp"

namespace fts {

enum class Scheme { nw, grid, kde };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Bandwidth rule: fixed h, or h = c * M^(-b).
struct BandwidthRule {
  enum class Kind { fixed, power } kind = Kind::power;
  double h = 0.1;   // for fixed
  double c = 1.0;   // for power
  double b = 0.2;   // for power

  double bandwidth(int m) const;
  void validate(int m) const;
};

void to_json(nlohmann::json& j, const BandwidthRule& r);
void from_json(const nlohmann::json& j, BandwidthRule& r);

struct ReconstructionConfig {
  Scheme scheme = Scheme::grid;
  int M = 100;
  BandwidthRule bandwidth;
  Interval target{0.0, 1.0, false};

  void validate() const;
};

void to_json(nlohmann::json& j, const ReconstructionConfig& c);
void from_json(const nlohmann::json& j, ReconstructionConfig& c);

/// Audit record of the raw observations behind one sparse estimator.
struct ObservationRecord {
  Scheme scheme = Scheme::grid;
  // nw
  std::vector<double> design_points;
  std::vector<double> responses;
  double noise_sigma = 0.0;
  // grid
  std::vector<double> node_values;
  int M = 0;
  // kde
  std::vector<double> sample_points;
  int D = 0;

  nlohmann::json to_json() const;
};

enum class DesignDensity { uniform, gaussian };

/// Nadaraya-Watson estimate from M noisy point observations with a standard
/// Gaussian kernel. If the kernel weight sum at an evaluation point falls
/// below 1e-12 the estimate falls back to the nearest design point's response.
std::pair<GridFunction, ObservationRecord> reconstruct_nw(
    const GridFunction& latent, const ReconstructionConfig& cfg,
    DesignDensity density, double noise_sigma, uint64_t seed);

/// Linear interpolation of the M+1 grid samples {(m/M, X(m/M))}, resampled to
/// the latent function's own grid. Exact at the sample sites.
std::pair<GridFunction, ObservationRecord> reconstruct_grid(
    const GridFunction& latent, int M);

/// Kernel density estimate from D points drawn from the latent density by
/// inverse CDF on the trapezoid-integrated grid.
std::pair<GridFunction, ObservationRecord> reconstruct_kde(
    const GridFunction& latent_density, int D, const BandwidthRule& bandwidth,
    uint64_t seed);

}  // namespace fts
