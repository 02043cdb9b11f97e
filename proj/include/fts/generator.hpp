#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "fts/grid_function.hpp"

namespace fts {

enum class GeneratorKind { iid_gauss_basis, fma_q, far1 };

std::string to_string(GeneratorKind k);
GeneratorKind generator_kind_from_string(const std::string& s);

/// Configuration of the latent functional time series generator. All three
/// kinds expand over a sine basis e_j(u) = sqrt(2) sin(j pi t), t the
/// normalized position in the interval, with coefficient innovation standard
/// deviations j^(-decay). The basis vanishes at the interval endpoints, so
/// zero extension beyond a line-truncation interval stays continuous.
struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::iid_gauss_basis;
  int n_basis = 6;
  double decay = 2.0;
  int d = 1;
  Interval interval{0.0, 1.0, false};
  int n_nodes = 33;
  double q_or_rho = 0.0;  // MA order for fma_q, AR coefficient for far1
  double sigma_scale = 1.0;  // innovation sd is sigma_scale * j^(-decay)
  uint64_t seed = 1;

  void validate() const;
};

void to_json(nlohmann::json& j, const GeneratorConfig& c);
void from_json(const nlohmann::json& j, GeneratorConfig& c);

/// Stationary, weakly dependent latent series generator. Marginal mean is the
/// zero function; far1 starts from its stationary law so no burn-in is needed.
class SeriesGenerator {
 public:
  explicit SeriesGenerator(GeneratorConfig cfg);

  const GeneratorConfig& config() const { return cfg_; }

  std::vector<GridFunction> generate(int n) const { return generate(n, cfg_.seed); }
  std::vector<GridFunction> generate(int n, uint64_t seed) const;

  /// True long-run covariance kernel of the series, evaluated at the points
  /// `us` (defaults to the generator grid when empty). Closed form from the
  /// basis expansion: no estimation involved.
  Eigen::MatrixXd long_run_kernel_matrix(std::span<const double> us = {}) const;

  /// Lag-0 (marginal) covariance kernel at the generator grid nodes.
  Eigen::MatrixXd marginal_kernel_matrix(std::span<const double> us = {}) const;

  std::vector<double> grid_nodes() const;

 private:
  GeneratorConfig cfg_;
  Eigen::MatrixXd basis_;  // n_nodes x n_basis

  Eigen::MatrixXd basis_at(std::span<const double> us) const;
  GridFunction make_function(const Eigen::MatrixXd& coeffs) const;
};

/// Mean-change alternative: mu1 is added to entries with index <= N + k_star
/// (1-based), mu2 to later entries.
struct ChangeSpec {
  GridFunction mu1;
  GridFunction mu2;
  int k_star = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const ChangeSpec& c);
void from_json(const nlohmann::json& j, ChangeSpec& c);

std::vector<GridFunction> apply_change(std::vector<GridFunction> series,
                                       const ChangeSpec& spec, int n_train);

}  // namespace fts
