#include "otgsa/ot/measure.hpp"

#include <stdexcept>

namespace otgsa::ot {

Eigen::MatrixXd squared_distance_matrix_serial(
    const Eigen::MatrixXd& source_points,
    const Eigen::MatrixXd& target_points) {
  if (source_points.cols() != target_points.cols())
    throw std::invalid_argument("squared_distance_matrix: dimension mismatch");
  const Eigen::Index n = source_points.rows();
  const Eigen::Index m = target_points.rows();
  Eigen::MatrixXd cost(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      cost(i, j) =
          (source_points.row(i) - target_points.row(j)).squaredNorm();
  return cost;
}

Eigen::MatrixXd squared_distance_matrix(const Eigen::MatrixXd& source_points,
                                        const Eigen::MatrixXd& target_points) {
  if (source_points.cols() != target_points.cols())
    throw std::invalid_argument("squared_distance_matrix: dimension mismatch");
  const Eigen::Index n = source_points.rows();
  const Eigen::Index m = target_points.rows();
  Eigen::MatrixXd cost(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      cost(i, j) =
          (source_points.row(i) - target_points.row(j)).squaredNorm();
  return cost;
}

}  // namespace otgsa::ot
