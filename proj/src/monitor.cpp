#include "fts/monitor.hpp"

#include <cmath>
#include <stdexcept>

namespace fts {

DetectorState::DetectorState(std::span<const GridFunction> training, double q,
                             bool strict)
    : n_(static_cast<int>(training.size())), q_(q), strict_(strict) {
  if (training.empty())
    throw std::invalid_argument("init_monitor: empty training set");
  if (!(q >= 0.0)) throw std::invalid_argument("init_monitor: q >= 0");
  train_sum_ = training[0];
  for (size_t i = 1; i < training.size(); ++i) {
    if (!train_sum_.same_grid(training[i]))
      throw std::invalid_argument("init_monitor: grid mismatch in training set");
    train_sum_ += training[i];
  }
  monitor_sum_ = GridFunction(train_sum_.interval(), train_sum_.n_nodes(),
                              train_sum_.dim());
}

DetectorState init_monitor(std::span<const GridFunction> training, double q,
                           bool strict) {
  return DetectorState(training, q, strict);
}

double gamma(const DetectorState& s) {
  if (s.k_ < 1) throw std::logic_error("gamma: requires k >= 1");
  const double kn = static_cast<double>(s.k_) / s.n_;
  GridFunction diff = kn * s.train_sum_ - s.monitor_sum_;
  return sup_norm(diff) / (std::sqrt(static_cast<double>(s.n_)) * (1.0 + kn));
}

Decision step(DetectorState& s, const GridFunction& x) {
  if (s.alarmed_) {
    if (s.strict_)
      throw std::logic_error("step: post-alarm ingestion in strict mode");
    return Decision::alarm;  // audit mode: no-op
  }
  if (!s.monitor_sum_.same_grid(x))
    throw std::invalid_argument("step: grid mismatch");
  s.k_ += 1;
  s.monitor_sum_ += x;
  const double g = gamma(s);
  if (s.gamma_history_.size() < DetectorState::kHistoryCap)
    s.gamma_history_.push_back(g);
  if (g > s.q_) {  // strict inequality: ties do not alarm
    s.alarmed_ = true;
    s.alarm_k_ = s.k_;
    return Decision::alarm;
  }
  return Decision::keep_monitoring;
}

MonitorResult run_monitor(DetectorState& s, std::span<const GridFunction> stream,
                          int horizon) {
  if (horizon < 1) throw std::invalid_argument("run_monitor: horizon >= 1");
  MonitorResult res;
  for (const auto& x : stream) {
    if (res.steps_run >= horizon) break;
    const Decision d = step(s, x);
    res.steps_run += 1;
    res.max_gamma = std::max(res.max_gamma, s.gamma_history().back());
    if (d == Decision::alarm) {
      res.alarmed = true;
      res.alarm_k = s.alarm_k();
      return res;
    }
  }
  res.truncated = true;
  return res;
}

}  // namespace fts
