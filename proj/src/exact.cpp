#include "otgsa/ot/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "otgsa/ot/network_simplex.hpp"

namespace otgsa::ot {

namespace {

void check_pair(const DiscreteMeasure& source, const DiscreteMeasure& target) {
  source.validate();
  target.validate();
  if (source.dim() != target.dim())
    throw std::invalid_argument("transport: measures have different dimension");
}

// Monotone coupling of sorted atoms; optimal on the line for squared cost.
TransportPlan solve_line(const DiscreteMeasure& source,
                         const DiscreteMeasure& target, bool with_plan) {
  const Eigen::Index n = source.size();
  const Eigen::Index m = target.size();
  std::vector<int> src_order(n), dst_order(m);
  std::iota(src_order.begin(), src_order.end(), 0);
  std::iota(dst_order.begin(), dst_order.end(), 0);
  std::sort(src_order.begin(), src_order.end(), [&](int a, int b) {
    return source.points(a, 0) < source.points(b, 0);
  });
  std::sort(dst_order.begin(), dst_order.end(), [&](int a, int b) {
    return target.points(a, 0) < target.points(b, 0);
  });

  TransportPlan plan;
  if (with_plan) plan.coupling = Eigen::MatrixXd::Zero(n, m);
  const double total = source.weights.sum();
  Eigen::Index si = 0, ti = 0;
  double src_left = source.weights[src_order[0]];
  double dst_left = target.weights[dst_order[0]] * total / target.weights.sum();
  double cost = 0.0;
  while (si < n && ti < m) {
    const int i = src_order[si];
    const int j = dst_order[ti];
    const double mass = std::min(src_left, dst_left);
    if (mass > 0) {
      const double gap = source.points(i, 0) - target.points(j, 0);
      cost += mass * gap * gap;
      if (with_plan) plan.coupling(i, j) += mass;
    }
    src_left -= mass;
    dst_left -= mass;
    if (src_left <= dst_left) {
      if (++si < n) src_left = source.weights[src_order[si]];
    } else {
      if (++ti < m) dst_left = target.weights[dst_order[ti]] * total /
                               target.weights.sum();
    }
  }
  plan.cost = cost;
  return plan;
}

TransportPlan solve_general(const DiscreteMeasure& source,
                            const DiscreteMeasure& target, bool with_plan) {
  const Eigen::MatrixXd cost =
      squared_distance_matrix(source.points, target.points);
  const auto solution =
      TransportSimplex::solve(source.weights, target.weights, cost);
  TransportPlan plan;
  plan.cost = solution.cost;
  if (with_plan) {
    plan.coupling = Eigen::MatrixXd::Zero(source.size(), target.size());
    for (const auto& entry : solution.flows)
      plan.coupling(entry.source, entry.target) = entry.mass;
  }
  return plan;
}

}  // namespace

TransportPlan solve_exact(const DiscreteMeasure& source,
                          const DiscreteMeasure& target,
                          const ExactOptions& options) {
  check_pair(source, target);
  if (source.dim() == 1 && !options.force_simplex)
    return solve_line(source, target, options.with_plan);
  return solve_general(source, target, options.with_plan);
}

double exact_cost(const DiscreteMeasure& source, const DiscreteMeasure& target,
                  const ExactOptions& options) {
  ExactOptions opts = options;
  opts.with_plan = false;
  return solve_exact(source, target, opts).cost;
}

std::vector<int> solve_balanced_assignment(const Eigen::MatrixXd& points,
                                           const Eigen::MatrixXd& centroids,
                                           int capacity) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centroids.rows();
  if (capacity < 1 || n != k * capacity)
    throw std::invalid_argument(
        "balanced assignment: |points| must equal capacity * |centroids|");
  if (points.cols() != centroids.cols())
    throw std::invalid_argument("balanced assignment: dimension mismatch");

  const Eigen::MatrixXd cost = squared_distance_matrix(points, centroids);
  const Eigen::VectorXd supplies =
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::VectorXd demands = Eigen::VectorXd::Constant(
      k, static_cast<double>(capacity) / static_cast<double>(n));
  const auto solution = TransportSimplex::solve(supplies, demands, cost);

  // The marginals are integral once scaled by n, so the optimal vertex is a
  // pure assignment: each point carries its whole atom to one centroid.
  std::vector<int> assignment(n, -1);
  const double atom = 1.0 / static_cast<double>(n);
  for (const auto& entry : solution.flows) {
    if (entry.mass > 0.5 * atom) {
      if (assignment[entry.source] != -1)
        throw std::runtime_error("balanced assignment: fractional vertex");
      assignment[entry.source] = entry.target;
    }
  }
  for (const int a : assignment)
    if (a < 0)
      throw std::runtime_error("balanced assignment: unassigned point");
  return assignment;
}

}  // namespace otgsa::ot
