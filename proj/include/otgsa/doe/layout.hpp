#pragma once

#include <cstdint>
#include <json.hpp>

#include "otgsa/doe/sample_matrix.hpp"

namespace otgsa::doe {

// Equal-size clusters of run indices, each internally ordered for
// sequential execution, plus the space-filling centroids they were
// assigned to.
struct ExperimentLayout {
  std::vector<std::vector<int>> clusters;  // ordered run ids
  Eigen::MatrixXd centroids;               // n_clusters x p, in [0,1]^p
  std::uint64_t seed = 0;

  void validate(int n_runs) const;
};

// Greedy nearest-neighbour order: start at the row closest to `anchor`,
// then repeatedly hop to the nearest unvisited row (squared Euclidean,
// ties to the lowest original index). Returns positions into `rows`.
std::vector<int> order_cluster(const Eigen::MatrixXd& rows,
                               const Eigen::VectorXd& anchor);

// Partition the sample into `n_clusters` equal clusters by balanced
// transport of the quantile-space rows onto Sobol centroids, each cluster
// ordered greedily from the all-0.5 anchor.
ExperimentLayout cluster_balanced(const SampleMatrix& samples, int n_clusters,
                                  std::uint64_t seed);

nlohmann::json to_json(const ExperimentLayout& layout);
ExperimentLayout layout_from_json(const nlohmann::json& node);

}  // namespace otgsa::doe
