#include "otgsa/doe/layout.hpp"

#include <limits>
#include <stdexcept>

#include "otgsa/dist/sobol.hpp"
#include "otgsa/ot/exact.hpp"

namespace otgsa::doe {

void ExperimentLayout::validate(int n_runs) const {
  std::vector<char> seen(n_runs, 0);
  std::size_t total = 0;
  const std::size_t size = clusters.empty() ? 0 : clusters.front().size();
  for (const auto& cluster : clusters) {
    if (cluster.size() != size)
      throw std::invalid_argument("layout: clusters are not equally sized");
    for (const int run : cluster) {
      if (run < 0 || run >= n_runs || seen[run]++)
        throw std::invalid_argument("layout: clusters do not partition runs");
      ++total;
    }
  }
  if (total != static_cast<std::size_t>(n_runs))
    throw std::invalid_argument("layout: clusters do not cover all runs");
}

std::vector<int> order_cluster(const Eigen::MatrixXd& rows,
                               const Eigen::VectorXd& anchor) {
  const auto k = static_cast<int>(rows.rows());
  if (k == 0) throw std::invalid_argument("order_cluster: empty cluster");
  std::vector<char> visited(k, 0);
  std::vector<int> order;
  order.reserve(k);

  Eigen::VectorXd reference = anchor;
  for (int step = 0; step < k; ++step) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      if (visited[i]) continue;
      const double dist = (rows.row(i).transpose() - reference).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    visited[best] = 1;
    order.push_back(best);
    reference = rows.row(best);
  }
  return order;
}

ExperimentLayout cluster_balanced(const SampleMatrix& samples, int n_clusters,
                                  std::uint64_t seed) {
  samples.validate();
  const auto n = static_cast<int>(samples.rows());
  if (n_clusters < 1 || n % n_clusters != 0)
    throw std::invalid_argument(
        "cluster_balanced: sample count must be divisible by cluster count");
  const int capacity = n / n_clusters;
  const auto p = static_cast<int>(samples.cols());

  ExperimentLayout layout;
  layout.seed = seed;
  layout.centroids = dist::sobol_points(n_clusters, p);
  const std::vector<int> assignment = ot::solve_balanced_assignment(
      samples.quantiles, layout.centroids, capacity);

  std::vector<std::vector<int>> members(n_clusters);
  for (auto& cluster : members) cluster.reserve(capacity);
  for (int run = 0; run < n; ++run) members[assignment[run]].push_back(run);

  const Eigen::VectorXd anchor = Eigen::VectorXd::Constant(p, 0.5);
  layout.clusters.resize(n_clusters);
  for (int c = 0; c < n_clusters; ++c) {
    Eigen::MatrixXd rows(capacity, p);
    for (int i = 0; i < capacity; ++i)
      rows.row(i) = samples.quantiles.row(members[c][i]);
    for (const int position : order_cluster(rows, anchor))
      layout.clusters[c].push_back(members[c][position]);
  }
  layout.validate(n);
  return layout;
}

nlohmann::json to_json(const ExperimentLayout& layout) {
  nlohmann::json node;
  node["schema_version"] = 1;
  node["seed"] = layout.seed;
  nlohmann::json clusters = nlohmann::json::array();
  for (std::size_t c = 0; c < layout.clusters.size(); ++c) {
    nlohmann::json item;
    item["cluster_id"] = c;
    std::vector<double> centroid(layout.centroids.cols());
    for (Eigen::Index j = 0; j < layout.centroids.cols(); ++j)
      centroid[static_cast<std::size_t>(j)] =
          layout.centroids(static_cast<Eigen::Index>(c), j);
    item["centroid"] = centroid;
    item["runs"] = layout.clusters[c];
    clusters.push_back(std::move(item));
  }
  node["clusters"] = clusters;
  return node;
}

ExperimentLayout layout_from_json(const nlohmann::json& node) {
  ExperimentLayout layout;
  layout.seed = node.value("seed", std::uint64_t{0});
  const auto& clusters = node.at("clusters");
  const auto k = clusters.size();
  if (k == 0) throw std::invalid_argument("layout: no clusters");
  const auto p = clusters.front().at("centroid").size();
  layout.centroids.resize(static_cast<Eigen::Index>(k),
                          static_cast<Eigen::Index>(p));
  layout.clusters.resize(k);
  for (const auto& item : clusters) {
    const auto c = item.at("cluster_id").get<std::size_t>();
    const auto centroid = item.at("centroid").get<std::vector<double>>();
    for (std::size_t j = 0; j < centroid.size(); ++j)
      layout.centroids(static_cast<Eigen::Index>(c),
                       static_cast<Eigen::Index>(j)) = centroid[j];
    layout.clusters.at(c) = item.at("runs").get<std::vector<int>>();
  }
  return layout;
}

}  // namespace otgsa::doe
