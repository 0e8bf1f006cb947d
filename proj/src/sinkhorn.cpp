#include "otgsa/ot/sinkhorn.hpp"

#include <cmath>
#include <limits>

namespace otgsa::ot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_inputs(const DiscreteMeasure& source,
                     const DiscreteMeasure& target,
                     const SinkhornOptions& options) {
  source.validate();
  target.validate();
  if (source.dim() != target.dim())
    throw std::invalid_argument("sinkhorn: measures have different dimension");
  if (!(options.epsilon > 0))
    throw std::invalid_argument("sinkhorn: epsilon must be positive");
  if (options.max_iter < 1)
    throw std::invalid_argument("sinkhorn: max_iter must be positive");
}

template <bool Parallel>
TransportPlan run_sinkhorn(const DiscreteMeasure& source,
                           const DiscreteMeasure& target,
                           const SinkhornOptions& options,
                           SinkhornDiagnostics* diagnostics) {
  validate_inputs(source, target, options);
  const Eigen::Index n = source.size();
  const Eigen::Index m = target.size();
  const Eigen::MatrixXd cost =
      Parallel ? squared_distance_matrix(source.points, target.points)
               : squared_distance_matrix_serial(source.points, target.points);
  const Eigen::MatrixXd log_kernel = -cost / options.epsilon;
  const Eigen::VectorXd log_a = source.weights.array().log();
  const Eigen::VectorXd log_b = target.weights.array().log();

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd row_sums(n), col_sums(m);
  Eigen::VectorXd row_gap(n), col_gap(m);

  int iterations = 0;
  double violation = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iter; ++it) {
    // Row scaling: after this, exact row marginals in exact arithmetic.
#pragma omp parallel for schedule(static) if (Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
      double max_val = kNegInf;
      for (Eigen::Index j = 0; j < m; ++j)
        max_val = std::max(max_val, log_kernel(i, j) + g[j]);
      if (max_val == kNegInf) {
        f[i] = log_a[i] == kNegInf ? kNegInf : log_a[i];
        continue;
      }
      double acc = 0.0;
      for (Eigen::Index j = 0; j < m; ++j)
        acc += std::exp(log_kernel(i, j) + g[j] - max_val);
      f[i] = log_a[i] - (max_val + std::log(acc));
    }
    // Column scaling.
#pragma omp parallel for schedule(static) if (Parallel)
    for (Eigen::Index j = 0; j < m; ++j) {
      double max_val = kNegInf;
      for (Eigen::Index i = 0; i < n; ++i)
        max_val = std::max(max_val, log_kernel(i, j) + f[i]);
      if (max_val == kNegInf) {
        g[j] = log_b[j] == kNegInf ? kNegInf : log_b[j];
        continue;
      }
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        acc += std::exp(log_kernel(i, j) + f[i] - max_val);
      g[j] = log_b[j] - (max_val + std::log(acc));
    }
    // Marginal violation of the implied plan; per-row/column partial sums
    // keep the reduction order fixed so threading cannot change results.
#pragma omp parallel for schedule(static) if (Parallel)
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < m; ++j)
        acc += std::exp(f[i] + log_kernel(i, j) + g[j]);
      row_sums[i] = acc;
    }
#pragma omp parallel for schedule(static) if (Parallel)
    for (Eigen::Index j = 0; j < m; ++j) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        acc += std::exp(f[i] + log_kernel(i, j) + g[j]);
      col_sums[j] = acc;
    }
    iterations = it + 1;
    violation = (row_sums - source.weights).cwiseAbs().sum() +
                (col_sums - target.weights).cwiseAbs().sum();
    if (violation <= options.tol) break;
  }

  if (diagnostics) {
    diagnostics->iterations = iterations;
    diagnostics->marginal_violation = violation;
  }
  if (violation > options.tol)
    throw SinkhornError("sinkhorn: no convergence within max_iter (violation " +
                        std::to_string(violation) + ")");

  TransportPlan plan;
  plan.coupling.resize(n, m);
  double total_cost = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mass = std::exp(f[i] + log_kernel(i, j) + g[j]);
      plan.coupling(i, j) = mass;
      total_cost += mass * cost(i, j);
    }
  }
  plan.cost = total_cost;
  return plan;
}

}  // namespace

TransportPlan solve_sinkhorn(const DiscreteMeasure& source,
                             const DiscreteMeasure& target,
                             const SinkhornOptions& options,
                             SinkhornDiagnostics* diagnostics) {
  return run_sinkhorn<true>(source, target, options, diagnostics);
}

TransportPlan solve_sinkhorn_serial(const DiscreteMeasure& source,
                                    const DiscreteMeasure& target,
                                    const SinkhornOptions& options,
                                    SinkhornDiagnostics* diagnostics) {
  return run_sinkhorn<false>(source, target, options, diagnostics);
}

}  // namespace otgsa::ot
