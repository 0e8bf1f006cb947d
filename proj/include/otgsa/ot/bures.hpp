#pragma once

#include "otgsa/ot/measure.hpp"

namespace otgsa::ot {

struct BuresTerms {
  double mean_term = 0.0;  // ||m - m'||^2
  double cov_term = 0.0;   // Tr(S + S' - 2 (S'^1/2 S S'^1/2)^1/2)

  double total() const { return mean_term + cov_term; }
};

// Symmetric PSD square root via eigendecomposition. Eigenvalues below zero
// are clamped; values below -tol are rejected as non-PSD input.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& matrix, double tol = 1e-8);

// Closed-form (mean, covariance) part of the squared transport cost between
// two distributions known only through their first two moments.
BuresTerms wasserstein_bures(const GaussianSummary& a, const GaussianSummary& b);

}  // namespace otgsa::ot
