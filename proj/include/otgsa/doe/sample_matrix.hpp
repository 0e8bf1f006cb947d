#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace otgsa::doe {

// Realized input draws with their quantile-space twin. Rows are runs,
// columns follow the input-space declaration order.
struct SampleMatrix {
  Eigen::MatrixXd values;
  Eigen::MatrixXd quantiles;  // in [0,1], same shape as values
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  Eigen::Index column(const std::string& name) const {
    for (std::size_t j = 0; j < column_names.size(); ++j)
      if (column_names[j] == name) return static_cast<Eigen::Index>(j);
    throw std::out_of_range("sample matrix: no column named " + name);
  }

  void validate() const {
    if (values.rows() != quantiles.rows() || values.cols() != quantiles.cols())
      throw std::invalid_argument("sample matrix: value/quantile shape mismatch");
    if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
      throw std::invalid_argument("sample matrix: column name count mismatch");
    if ((quantiles.array() < 0.0).any() || (quantiles.array() > 1.0).any())
      throw std::invalid_argument("sample matrix: quantiles outside [0,1]");
  }
};

}  // namespace otgsa::doe
