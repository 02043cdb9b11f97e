#include "fts/generator.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "fts/rng.hpp"

namespace fts {

std::string to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::iid_gauss_basis: return "iid_gauss_basis";
    case GeneratorKind::fma_q: return "fma_q";
    case GeneratorKind::far1: return "far1";
  }
  return "?";
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "iid_gauss_basis") return GeneratorKind::iid_gauss_basis;
  if (s == "fma_q") return GeneratorKind::fma_q;
  if (s == "far1") return GeneratorKind::far1;
  throw std::invalid_argument("unknown generator kind: " + s);
}

void GeneratorConfig::validate() const {
  interval.validate();
  if (n_basis < 1) throw std::invalid_argument("GeneratorConfig: n_basis >= 1");
  if (!(decay > 0.0)) throw std::invalid_argument("GeneratorConfig: decay > 0");
  if (d < 1) throw std::invalid_argument("GeneratorConfig: d >= 1");
  if (n_nodes < 2) throw std::invalid_argument("GeneratorConfig: n_nodes >= 2");
  if (kind == GeneratorKind::far1 && !(std::abs(q_or_rho) < 1.0))
    throw std::invalid_argument("GeneratorConfig: |rho| < 1 required for far1");
  if (kind == GeneratorKind::fma_q && q_or_rho < 0.0)
    throw std::invalid_argument("GeneratorConfig: q >= 0 required for fma_q");
  if (sigma_scale < 0.0)
    throw std::invalid_argument("GeneratorConfig: sigma_scale >= 0");
}

void to_json(nlohmann::json& j, const GeneratorConfig& c) {
  j = nlohmann::json{{"kind", to_string(c.kind)}, {"n_basis", c.n_basis},
                     {"decay", c.decay},          {"d", c.d},
                     {"interval", c.interval},    {"n_nodes", c.n_nodes},
                     {"q_or_rho", c.q_or_rho},    {"sigma_scale", c.sigma_scale},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, GeneratorConfig& c) {
  c.kind = generator_kind_from_string(j.value("kind", std::string("iid_gauss_basis")));
  c.n_basis = j.value("n_basis", 6);
  c.decay = j.value("decay", 2.0);
  c.d = j.value("d", 1);
  if (j.contains("interval")) j.at("interval").get_to(c.interval);
  c.n_nodes = j.value("n_nodes", 33);
  c.q_or_rho = j.value("q_or_rho", 0.0);
  c.sigma_scale = j.value("sigma_scale", 1.0);
  c.seed = j.value("seed", uint64_t{1});
  c.validate();
}

SeriesGenerator::SeriesGenerator(GeneratorConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  std::vector<double> us(cfg_.n_nodes);
  for (int i = 0; i < cfg_.n_nodes; ++i)
    us[i] = cfg_.interval.lower + i * cfg_.interval.length() / (cfg_.n_nodes - 1);
  basis_ = basis_at(us);
}

Eigen::MatrixXd SeriesGenerator::basis_at(std::span<const double> us) const {
  Eigen::MatrixXd b(us.size(), cfg_.n_basis);
  for (size_t i = 0; i < us.size(); ++i) {
    const double t = (us[i] - cfg_.interval.lower) / cfg_.interval.length();
    for (int j = 0; j < cfg_.n_basis; ++j)
      b(i, j) = std::numbers::sqrt2 * std::sin((j + 1) * std::numbers::pi * t);
  }
  return b;
}

std::vector<double> SeriesGenerator::grid_nodes() const {
  std::vector<double> us(cfg_.n_nodes);
  for (int i = 0; i < cfg_.n_nodes; ++i)
    us[i] = cfg_.interval.lower + i * cfg_.interval.length() / (cfg_.n_nodes - 1);
  return us;
}

GridFunction SeriesGenerator::make_function(const Eigen::MatrixXd& coeffs) const {
  // coeffs: n_basis x d
  GridFunction f(cfg_.interval, cfg_.n_nodes, cfg_.d);
  Eigen::MatrixXd vals = basis_ * coeffs;  // n_nodes x d
  for (int i = 0; i < cfg_.n_nodes; ++i)
    for (int l = 0; l < cfg_.d; ++l) f.value(i, l) = vals(i, l);
  return f;
}

std::vector<GridFunction> SeriesGenerator::generate(int n, uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("generate: n >= 1");
  Rng rng(derive_seed(seed, "synth", 0));
  std::vector<double> sigma(cfg_.n_basis);
  for (int j = 0; j < cfg_.n_basis; ++j)
    sigma[j] = cfg_.sigma_scale * std::pow(j + 1.0, -cfg_.decay);

  std::vector<GridFunction> out;
  out.reserve(n);
  Eigen::MatrixXd coeffs(cfg_.n_basis, cfg_.d);

  auto draw_innovation = [&](Eigen::MatrixXd& c) {
    for (int j = 0; j < cfg_.n_basis; ++j)
      for (int l = 0; l < cfg_.d; ++l) c(j, l) = sigma[j] * rng.normal();
  };

  switch (cfg_.kind) {
    case GeneratorKind::iid_gauss_basis: {
      for (int i = 0; i < n; ++i) {
        draw_innovation(coeffs);
        out.push_back(make_function(coeffs));
      }
      break;
    }
    case GeneratorKind::fma_q: {
      const int q = static_cast<int>(std::llround(cfg_.q_or_rho));
      const double w = 1.0 / std::sqrt(q + 1.0);
      std::deque<Eigen::MatrixXd> window;
      for (int i = 0; i < q; ++i) {  // warm-up innovations
        Eigen::MatrixXd e(cfg_.n_basis, cfg_.d);
        draw_innovation(e);
        window.push_back(std::move(e));
      }
      for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd e(cfg_.n_basis, cfg_.d);
        draw_innovation(e);
        window.push_back(std::move(e));
        coeffs.setZero();
        for (const auto& past : window) coeffs += past;
        coeffs *= w;
        out.push_back(make_function(coeffs));
        window.pop_front();
      }
      break;
    }
    case GeneratorKind::far1: {
      const double rho = cfg_.q_or_rho;
      // Start from the stationary law so the series is stationary from i = 1.
      const double s0 = 1.0 / std::sqrt(1.0 - rho * rho);
      Eigen::MatrixXd state(cfg_.n_basis, cfg_.d);
      for (int j = 0; j < cfg_.n_basis; ++j)
        for (int l = 0; l < cfg_.d; ++l) state(j, l) = s0 * sigma[j] * rng.normal();
      for (int i = 0; i < n; ++i) {
        if (i > 0) {
          Eigen::MatrixXd e(cfg_.n_basis, cfg_.d);
          draw_innovation(e);
          state = rho * state + e;
        }
        out.push_back(make_function(state));
      }
      break;
    }
  }
  return out;
}

Eigen::MatrixXd SeriesGenerator::marginal_kernel_matrix(std::span<const double> us) const {
  std::vector<double> grid;
  if (us.empty()) {
    grid = grid_nodes();
    us = grid;
  }
  Eigen::MatrixXd b = basis_at(us);
  Eigen::VectorXd var(cfg_.n_basis);
  const double scale2 = cfg_.sigma_scale * cfg_.sigma_scale;
  for (int j = 0; j < cfg_.n_basis; ++j) {
    const double s2 = scale2 * std::pow(j + 1.0, -2.0 * cfg_.decay);
    double v = s2;
    if (cfg_.kind == GeneratorKind::far1)
      v = s2 / (1.0 - cfg_.q_or_rho * cfg_.q_or_rho);
    var[j] = v;  // fma_q is normalized to innovation variance
  }
  Eigen::MatrixXd k1 = b * var.asDiagonal() * b.transpose();
  if (cfg_.d == 1) return k1;
  // Components are independent: block-diagonal over d.
  const int n = static_cast<int>(us.size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * cfg_.d, n * cfg_.d);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int l = 0; l < cfg_.d; ++l) k(g * cfg_.d + l, h * cfg_.d + l) = k1(g, h);
  return k;
}

Eigen::MatrixXd SeriesGenerator::long_run_kernel_matrix(std::span<const double> us) const {
  std::vector<double> grid;
  if (us.empty()) {
    grid = grid_nodes();
    us = grid;
  }
  Eigen::MatrixXd b = basis_at(us);
  Eigen::VectorXd var(cfg_.n_basis);
  const double scale2 = cfg_.sigma_scale * cfg_.sigma_scale;
  for (int j = 0; j < cfg_.n_basis; ++j) {
    const double s2 = scale2 * std::pow(j + 1.0, -2.0 * cfg_.decay);
    double v = s2;
    switch (cfg_.kind) {
      case GeneratorKind::iid_gauss_basis:
        v = s2;
        break;
      case GeneratorKind::fma_q: {
        // X_n = (q+1)^{-1/2} sum of q+1 innovations: long-run factor q+1.
        const int q = static_cast<int>(std::llround(cfg_.q_or_rho));
        v = s2 * (q + 1.0);
        break;
      }
      case GeneratorKind::far1: {
        const double rho = cfg_.q_or_rho;
        v = s2 / ((1.0 - rho) * (1.0 - rho));
        break;
      }
    }
    var[j] = v;
  }
  Eigen::MatrixXd k1 = b * var.asDiagonal() * b.transpose();
  if (cfg_.d == 1) return k1;
  const int n = static_cast<int>(us.size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * cfg_.d, n * cfg_.d);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int l = 0; l < cfg_.d; ++l) k(g * cfg_.d + l, h * cfg_.d + l) = k1(g, h);
  return k;
}

void ChangeSpec::validate() const {
  if (!mu1.same_grid(mu2))
    throw std::invalid_argument("ChangeSpec: mu1 and mu2 must share a grid");
  if (k_star < 0) throw std::invalid_argument("ChangeSpec: k_star >= 0");
}

void to_json(nlohmann::json& j, const ChangeSpec& c) {
  j = nlohmann::json{{"mu1", c.mu1.to_json()}, {"mu2", c.mu2.to_json()},
                     {"k_star", c.k_star}};
}

void from_json(const nlohmann::json& j, ChangeSpec& c) {
  c.mu1 = GridFunction::from_json(j.at("mu1"));
  c.mu2 = GridFunction::from_json(j.at("mu2"));
  c.k_star = j.value("k_star", 0);
  c.validate();
}

std::vector<GridFunction> apply_change(std::vector<GridFunction> series,
                                       const ChangeSpec& spec, int n_train) {
  spec.validate();
  for (size_t i = 0; i < series.size(); ++i) {
    const int idx = static_cast<int>(i) + 1;  // 1-based
    if (!series[i].same_grid(spec.mu1))
      throw std::invalid_argument("apply_change: grid mismatch");
    series[i] += (idx <= n_train + spec.k_star) ? spec.mu1 : spec.mu2;
  }
  return series;
}

}  // namespace fts
