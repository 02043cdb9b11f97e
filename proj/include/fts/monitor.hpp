#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fts/grid_function.hpp"

namespace fts {

struct MonitorResult {
  bool alarmed = false;
  std::optional<int> alarm_k;
  double max_gamma = 0.0;
  int steps_run = 0;
  bool truncated = false;
};

enum class Decision { keep_monitoring, alarm };

/// Running state of the open-ended CUSUM monitoring scheme. The detector at
/// monitoring lag k is
///   gamma(k) = || (k/N) train_sum - monitor_sum || / (sqrt(N) (1 + k/N))
/// and the alarm fires on the strict inequality gamma(k) > q.
class DetectorState {
 public:
  DetectorState(std::span<const GridFunction> training, double q, bool strict = true);

  int n_train() const { return n_; }
  int k() const { return k_; }
  double q() const { return q_; }
  bool alarmed() const { return alarmed_; }
  std::optional<int> alarm_k() const { return alarm_k_; }
  bool strict() const { return strict_; }
  const GridFunction& train_sum() const { return train_sum_; }
  const GridFunction& monitor_sum() const { return monitor_sum_; }
  const std::vector<double>& gamma_history() const { return gamma_history_; }

  friend double gamma(const DetectorState& s);
  friend Decision step(DetectorState& s, const GridFunction& x);

 private:
  int n_;
  GridFunction train_sum_;
  int k_ = 0;
  GridFunction monitor_sum_;
  double q_;
  bool alarmed_ = false;
  std::optional<int> alarm_k_;
  bool strict_;
  std::vector<double> gamma_history_;

  static constexpr size_t kHistoryCap = 1'000'000;
};

DetectorState init_monitor(std::span<const GridFunction> training, double q,
                           bool strict = true);

/// CUSUM detector value at the current lag; requires k >= 1.
double gamma(const DetectorState& s);

/// Ingest one observation; k increments, alarm iff gamma > q. Ingesting
/// after an alarm throws in strict mode and is a no-op in audit mode.
Decision step(DetectorState& s, const GridFunction& x);

/// Feed a stream until alarm or horizon; `truncated` is set when no alarm
/// fired within the horizon (or the stream ran out first).
MonitorResult run_monitor(DetectorState& s, std::span<const GridFunction> stream,
                          int horizon);

}  // namespace fts
