// Timing comparison of the OpenMP kernels against their serial reference
// implementations, plus the exact-solver baselines they feed.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "otgsa/ot/exact.hpp"
#include "otgsa/ot/sinkhorn.hpp"
#include "otgsa/rng.hpp"

using namespace otgsa;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

Eigen::MatrixXd gaussian_cloud(int n, int dim, std::uint64_t seed,
                               double shift) {
  Philox rng = substream(seed, "bench-cloud");
  Eigen::MatrixXd points(n, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j) {
      // Box-Muller is plenty here.
      const double u1 = rng.next_double();
      const double u2 = rng.next_double();
      points(i, j) =
          std::sqrt(-2.0 * std::log(u1 + 1e-300)) *
              std::cos(6.283185307179586 * u2) +
          shift;
    }
  return points;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif

  {
    const auto a = gaussian_cloud(1500, 3, 1, 0.0);
    const auto b = gaussian_cloud(1500, 3, 2, 1.0);
    auto start = std::chrono::steady_clock::now();
    const auto serial = ot::squared_distance_matrix_serial(a, b);
    const double t_serial = seconds_since(start);
    start = std::chrono::steady_clock::now();
    const auto parallel = ot::squared_distance_matrix(a, b);
    const double t_parallel = seconds_since(start);
    std::printf("cost matrix 1500x1500x3: serial %.3f s, openmp %.3f s, "
                "max |diff| %.3e\n",
                t_serial, t_parallel,
                (serial - parallel).cwiseAbs().maxCoeff());
  }

  {
    const auto source =
        ot::DiscreteMeasure::uniform(gaussian_cloud(400, 2, 3, 0.0));
    const auto target =
        ot::DiscreteMeasure::uniform(gaussian_cloud(400, 2, 4, 0.5));
    ot::SinkhornOptions options;
    options.epsilon = 0.1;
    options.tol = 1e-5;
    options.max_iter = 50000;
    auto start = std::chrono::steady_clock::now();
    const auto serial = ot::solve_sinkhorn_serial(source, target, options);
    const double t_serial = seconds_since(start);
    start = std::chrono::steady_clock::now();
    const auto parallel = ot::solve_sinkhorn(source, target, options);
    const double t_parallel = seconds_since(start);
    std::printf("sinkhorn 400x400: serial %.3f s, openmp %.3f s, "
                "cost gap %.3e\n",
                t_serial, t_parallel, std::abs(serial.cost - parallel.cost));
  }

  {
    const auto source =
        ot::DiscreteMeasure::uniform(gaussian_cloud(1000, 2, 5, 0.0));
    const auto target =
        ot::DiscreteMeasure::uniform(gaussian_cloud(1000, 2, 6, 1.0));
    auto start = std::chrono::steady_clock::now();
    const double cost =
        ot::exact_cost(source, target, {.force_simplex = true});
    std::printf("network simplex 1000x1000 (2-d): %.3f s, cost %.4f\n",
                seconds_since(start), cost);
  }
  return 0;
}
