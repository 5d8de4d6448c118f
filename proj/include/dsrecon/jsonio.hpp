#pragma once

#include <Eigen/Dense>

#include <json.hpp>

namespace dsr {

inline nlohmann::ordered_json to_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (long r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json to_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::ordered_json& j) {
  const long rows = static_cast<long>(j.size());
  const long cols = rows > 0 ? static_cast<long>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::ordered_json& j) {
  Eigen::VectorXd v(static_cast<long>(j.size()));
  for (long i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

}  // namespace dsr
