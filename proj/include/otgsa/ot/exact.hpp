#pragma once

#include <vector>

#include "otgsa/ot/measure.hpp"

namespace otgsa::ot {

struct ExactOptions {
  // Skip the sorted-coupling shortcut for 1-d inputs and always run the
  // network simplex (the shortcut is exact for squared-Euclidean cost; the
  // full solver is kept reachable for cross-checks and benchmarks).
  bool force_simplex = false;
  bool with_plan = true;  // materialize the dense coupling
};

// Globally optimal coupling under squared-Euclidean ground cost.
TransportPlan solve_exact(const DiscreteMeasure& source,
                          const DiscreteMeasure& target,
                          const ExactOptions& options = {});

// Cost-only variant used in estimation loops (never builds the dense plan).
double exact_cost(const DiscreteMeasure& source, const DiscreteMeasure& target,
                  const ExactOptions& options = {});

// Assign |points| = capacity * |centroids| points to centroids so that every
// centroid receives exactly `capacity` points at minimum total squared
// distance. Returns the centroid index per point.
std::vector<int> solve_balanced_assignment(
    const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
    int capacity);

}  // namespace otgsa::ot
