#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace otgsa::ot {

// Weighted point cloud in R^m. Rows of `points` are atoms.
struct DiscreteMeasure {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  // Uniform measure on the given atoms.
  static DiscreteMeasure uniform(Eigen::MatrixXd atoms) {
    const Eigen::Index n = atoms.rows();
    if (n == 0) throw std::invalid_argument("measure must have at least one atom");
    return {std::move(atoms),
            Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n))};
  }

  void validate() const {
    if (points.rows() == 0 || points.cols() == 0)
      throw std::invalid_argument("measure must have at least one atom of dimension >= 1");
    if (weights.size() != points.rows())
      throw std::invalid_argument("weight count does not match atom count");
    if ((weights.array() < 0.0).any())
      throw std::invalid_argument("measure weights must be non-negative");
    if (std::abs(weights.sum() - 1.0) > 1e-12)
      throw std::invalid_argument("measure weights must sum to 1");
  }
};

// Coupling between two discrete measures together with its transport cost.
struct TransportPlan {
  Eigen::MatrixXd coupling;  // rows = source atoms, cols = target atoms
  double cost = 0.0;

  Eigen::VectorXd row_marginal() const { return coupling.rowwise().sum(); }
  Eigen::VectorXd col_marginal() const { return coupling.colwise().sum(); }
};

// First two moments of a measure; the closed-form half of the transport cost.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Weighted mean and population covariance (normalized by total weight).
inline GaussianSummary empirical_summary(const DiscreteMeasure& measure) {
  if (measure.size() == 0)
    throw std::invalid_argument("empirical_summary: empty measure");
  const Eigen::VectorXd w = measure.weights / measure.weights.sum();
  const Eigen::VectorXd mean = measure.points.transpose() * w;
  Eigen::MatrixXd centered = measure.points.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      centered.transpose() * w.asDiagonal() * centered;
  cov = 0.5 * (cov + cov.transpose()).eval();  // symmetrize
  return {mean, cov};
}

// Dense pairwise squared-Euclidean costs; kernels below share this layout.
Eigen::MatrixXd squared_distance_matrix(const Eigen::MatrixXd& source_points,
                                        const Eigen::MatrixXd& target_points);

// Serial reference for the OpenMP kernel above; kept for equivalence tests.
Eigen::MatrixXd squared_distance_matrix_serial(
    const Eigen::MatrixXd& source_points, const Eigen::MatrixXd& target_points);

}  // namespace otgsa::ot
