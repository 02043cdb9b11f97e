#pragma once

#include <Eigen/Core>
#include <json.hpp>

#include <stdexcept>

namespace fts {

/// Symmetric covariance matrix wrapper.
struct CovMatrix {
  Eigen::MatrixXd m;

  CovMatrix() = default;
  explicit CovMatrix(Eigen::MatrixXd mat) : m(std::move(mat)) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("CovMatrix: matrix must be square");
  }

  int dim() const { return static_cast<int>(m.rows()); }

  double max_asymmetry() const { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::json r = nlohmann::json::array();
      for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
      rows.push_back(std::move(r));
    }
    return nlohmann::json{{"dim", dim()}, {"entries", std::move(rows)}};
  }

  static CovMatrix from_json(const nlohmann::json& j) {
    const auto& rows = j.at("entries");
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw std::invalid_argument("CovMatrix: ragged entries");
      for (int jj = 0; jj < n; ++jj) m(i, jj) = rows[i][jj].get<double>();
    }
    return CovMatrix(std::move(m));
  }
};

}  // namespace fts
