#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace fts {

/// Finitely supported probability measure: weighted atoms in R^q.
struct EmpiricalMeasure {
  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> weights;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms[0].size()); }
  int size() const { return static_cast<int>(atoms.size()); }

  void validate() const {
    if (atoms.empty()) throw std::invalid_argument("EmpiricalMeasure: no atoms");
    if (atoms.size() != weights.size())
      throw std::invalid_argument("EmpiricalMeasure: atom/weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw std::invalid_argument("EmpiricalMeasure: weights > 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("EmpiricalMeasure: weights must sum to 1");
    for (const auto& a : atoms) {
      if (a.size() != atoms[0].size())
        throw std::invalid_argument("EmpiricalMeasure: atom dimension mismatch");
      if (!a.allFinite())
        throw std::invalid_argument("EmpiricalMeasure: atoms must be finite");
    }
  }

  /// Uniform weights over the given atoms.
  static EmpiricalMeasure uniform(std::vector<Eigen::VectorXd> atoms) {
    EmpiricalMeasure m;
    const double w = 1.0 / static_cast<double>(atoms.size());
    m.weights.assign(atoms.size(), w);
    m.atoms = std::move(atoms);
    m.validate();
    return m;
  }

  nlohmann::json to_json() const {
    nlohmann::json as = nlohmann::json::array();
    for (const auto& a : atoms) {
      nlohmann::json row = nlohmann::json::array();
      for (int i = 0; i < a.size(); ++i) row.push_back(a[i]);
      as.push_back(std::move(row));
    }
    return nlohmann::json{{"atoms", std::move(as)}, {"weights", weights}};
  }

  static EmpiricalMeasure from_json(const nlohmann::json& j) {
    EmpiricalMeasure m;
    for (const auto& row : j.at("atoms")) {
      Eigen::VectorXd a(row.size());
      for (size_t i = 0; i < row.size(); ++i) a[i] = row[i].get<double>();
      m.atoms.push_back(std::move(a));
    }
    j.at("weights").get_to(m.weights);
    m.validate();
    return m;
  }
};

enum class GroundNorm { max, euclidean };

inline double ground_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              GroundNorm norm) {
  return norm == GroundNorm::max ? (a - b).cwiseAbs().maxCoeff() : (a - b).norm();
}

}  // namespace fts
