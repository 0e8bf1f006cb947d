#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace otgsa::ot {

// Primal network simplex specialized to the dense bipartite transportation
// problem: n sources with supplies a, m targets with demands b, uncapacitated
// arcs (i, j) with cost c(i, j). Entering arcs are picked by cyclic block
// search on reduced costs; leaving arcs follow the strongly-feasible-tree
// rule, so degenerate pivots cannot cycle.
class TransportSimplex {
 public:
  struct FlowEntry {
    int source = 0;
    int target = 0;
    double mass = 0.0;
  };

  struct Solution {
    double cost = 0.0;
    // Basic arcs with positive flow (at most n + m - 1 of them).
    std::vector<FlowEntry> flows;
    // Dual potentials: pi[0..n) on sources, pi[n..n+m) on targets.
    // c(i,j) + pi[i] - pi[n+j] >= -tol for every arc certifies optimality.
    std::vector<double> potentials;
    std::int64_t pivots = 0;
  };

  // `cost` is row-major n x m. Supplies and demands must balance; a relative
  // imbalance above 1e-9 is rejected, smaller ones are absorbed.
  static Solution solve(const Eigen::VectorXd& supplies,
                        const Eigen::VectorXd& demands,
                        const Eigen::MatrixXd& cost);
};

}  // namespace otgsa::ot
