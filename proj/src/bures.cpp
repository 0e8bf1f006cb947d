#include "otgsa/ot/bures.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace otgsa::ot {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("psd_sqrt: matrix not square");
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(sym);
  if (eigen.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  Eigen::VectorXd values = eigen.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -tol * scale)
      throw std::runtime_error("psd_sqrt: matrix is not positive semidefinite");
    values[i] = std::sqrt(std::max(values[i], 0.0));
  }
  return eigen.eigenvectors() * values.asDiagonal() *
         eigen.eigenvectors().transpose();
}

BuresTerms wasserstein_bures(const GaussianSummary& a,
                             const GaussianSummary& b) {
  if (a.mean.size() != b.mean.size())
    throw std::invalid_argument("wasserstein_bures: dimension mismatch");
  BuresTerms terms;
  terms.mean_term = (a.mean - b.mean).squaredNorm();

  const Eigen::MatrixXd root_b = psd_sqrt(b.covariance);
  const Eigen::MatrixXd cross = psd_sqrt(root_b * a.covariance * root_b);
  double cov_term =
      a.covariance.trace() + b.covariance.trace() - 2.0 * cross.trace();
  if (cov_term < -1e-9)
    throw std::runtime_error("wasserstein_bures: negative covariance term");
  terms.cov_term = std::max(cov_term, 0.0);
  return terms;
}

}  // namespace otgsa::ot
