#pragma once

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace fts {

/// Compact real interval [lower, upper]. When `truncation_of_line` is set the
/// interval stands in for the whole real line: functions on it are extended
/// by zero outside.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  bool truncation_of_line = false;

  double length() const { return upper - lower; }

  bool contains(double u) const { return u >= lower && u <= upper; }

  bool contains(const Interval& sub) const {
    return sub.lower >= lower && sub.upper <= upper;
  }

  void validate() const {
    if (!std::isfinite(lower) || !std::isfinite(upper))
      throw std::invalid_argument("Interval: endpoints must be finite");
    if (!(lower < upper))
      throw std::invalid_argument("Interval: lower must be < upper");
  }

  bool operator==(const Interval& o) const {
    return lower == o.lower && upper == o.upper &&
           truncation_of_line == o.truncation_of_line;
  }
};

inline void to_json(nlohmann::json& j, const Interval& iv) {
  j = nlohmann::json{{"lower", iv.lower},
                     {"upper", iv.upper},
                     {"line_truncation", iv.truncation_of_line}};
}

inline void from_json(const nlohmann::json& j, Interval& iv) {
  j.at("lower").get_to(iv.lower);
  j.at("upper").get_to(iv.upper);
  iv.truncation_of_line = j.value("line_truncation", false);
  iv.validate();
}

/// Regularity diagnostics parameters: Hölder exponent `xi` in (1/2, 1] and
/// tail-decay exponent `kappa` > 0.
struct DiagnosticsConfig {
  double xi = 0.75;
  double kappa = 1.0;

  void validate() const {
    if (!(xi > 0.5) || !(xi <= 1.0))
      throw std::invalid_argument("DiagnosticsConfig: xi must be in (1/2, 1]");
    if (!(kappa > 0.0))
      throw std::invalid_argument("DiagnosticsConfig: kappa must be > 0");
  }
};

inline void to_json(nlohmann::json& j, const DiagnosticsConfig& c) {
  j = nlohmann::json{{"xi", c.xi}, {"kappa", c.kappa}};
}

inline void from_json(const nlohmann::json& j, DiagnosticsConfig& c) {
  c.xi = j.value("xi", 0.75);
  c.kappa = j.value("kappa", 1.0);
  c.validate();
}

}  // namespace fts
