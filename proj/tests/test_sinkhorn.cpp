#include <doctest.h>

#include <cmath>

#include "otgsa/ot/exact.hpp"
#include "otgsa/ot/sinkhorn.hpp"
#include "otgsa/rng.hpp"

using namespace otgsa;
using ot::DiscreteMeasure;

namespace {

Eigen::MatrixXd column(std::initializer_list<double> values) {
  Eigen::MatrixXd points(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (const double v : values) points(i++, 0) = v;
  return points;
}

}  // namespace

TEST_CASE("identity instance costs next to nothing") {
  const auto m = DiscreteMeasure::uniform(column({0.0, 1.0, 2.5}));
  ot::SinkhornOptions options;
  options.epsilon = 0.01;
  const auto plan = ot::solve_sinkhorn(m, m, options);
  CHECK(plan.cost <= 1e-3);
}

TEST_CASE("small epsilon approaches the exact cost") {
  const auto a = DiscreteMeasure::uniform(column({0.0, 1.0}));
  const auto b = DiscreteMeasure::uniform(column({1.0, 2.0}));
  ot::SinkhornOptions options;
  options.epsilon = 1e-3;
  options.tol = 1e-4;
  options.max_iter = 20000;
  const auto plan = ot::solve_sinkhorn(a, b, options);
  CHECK(plan.cost == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("large epsilon still satisfies the marginals") {
  const auto a = DiscreteMeasure::uniform(column({0.0, 1.0}));
  const auto b = DiscreteMeasure::uniform(column({1.0, 2.0}));
  ot::SinkhornOptions options;
  options.epsilon = 10.0;
  const auto plan = ot::solve_sinkhorn(a, b, options);
  CHECK((plan.row_marginal() - a.weights).cwiseAbs().sum() < 1e-8);
  CHECK((plan.col_marginal() - b.weights).cwiseAbs().sum() < 1e-8);
  CHECK((plan.coupling.array() >= 0.0).all());
}

TEST_CASE("non-convergence is reported, not swallowed") {
  const auto a = DiscreteMeasure::uniform(column({0.0, 1.0}));
  const auto b = DiscreteMeasure::uniform(column({100.0, 200.0}));
  ot::SinkhornOptions options;
  options.epsilon = 1e-4;
  options.max_iter = 2;
  options.tol = 1e-14;
  CHECK_THROWS_AS(ot::solve_sinkhorn(a, b, options), ot::SinkhornError);
}

TEST_CASE("epsilon must be positive") {
  const auto a = DiscreteMeasure::uniform(column({0.0}));
  ot::SinkhornOptions options;
  options.epsilon = 0.0;
  CHECK_THROWS_AS(ot::solve_sinkhorn(a, a, options), std::invalid_argument);
}

TEST_CASE("marginal violation decreases sweep over sweep") {
  Philox rng = substream(201, "sinkhorn-monotone");
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(10));
    const int m = 3 + static_cast<int>(rng.next_below(10));
    Eigen::MatrixXd xs(n, 2), xt(m, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) xs(i, j) = rng.next_double();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 2; ++j) xt(i, j) = rng.next_double();
    const auto a = DiscreteMeasure::uniform(xs);
    const auto b = DiscreteMeasure::uniform(xt);

    ot::SinkhornOptions options;
    options.epsilon = 0.05;
    options.tol = 0.0;  // never converges; watch the trace instead
    double previous = std::numeric_limits<double>::infinity();
    for (int sweeps = 1; sweeps <= 12; ++sweeps) {
      options.max_iter = sweeps;
      ot::SinkhornDiagnostics diag;
      try {
        ot::solve_sinkhorn(a, b, options, &diag);
      } catch (const ot::SinkhornError&) {
        // expected with tol = 0
      }
      CHECK(diag.marginal_violation <= previous + 1e-12);
      previous = diag.marginal_violation;
    }
  }
}

TEST_CASE("parallel kernel reproduces the serial reference bit for bit") {
  Philox rng = substream(202, "sinkhorn-parity");
  const int n = 40, m = 35;
  Eigen::MatrixXd xs(n, 3), xt(m, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) xs(i, j) = rng.next_double();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 3; ++j) xt(i, j) = rng.next_double();
  const auto a = DiscreteMeasure::uniform(xs);
  const auto b = DiscreteMeasure::uniform(xt);

  ot::SinkhornOptions options;
  options.epsilon = 0.02;
  options.tol = 1e-10;
  const auto parallel = ot::solve_sinkhorn(a, b, options);
  const auto serial = ot::solve_sinkhorn_serial(a, b, options);
  CHECK(parallel.cost == serial.cost);
  CHECK((parallel.coupling - serial.coupling).cwiseAbs().maxCoeff() == 0.0);

  const auto dist_parallel = ot::squared_distance_matrix(xs, xt);
  const auto dist_serial = ot::squared_distance_matrix_serial(xs, xt);
  CHECK((dist_parallel - dist_serial).cwiseAbs().maxCoeff() == 0.0);
}
