#include "otgsa/ot/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otgsa::ot {

namespace {

struct Tree {
  // Per-node basis data; node order: sources, targets, root last.
  std::vector<int> parent;
  std::vector<std::uint8_t> up;     // pred arc oriented node -> parent
  std::vector<double> flow;         // flow on the pred arc
  std::vector<double> cost;         // cost of the pred arc
  std::vector<int> arc;             // real arc id, -1 for artificial
  std::vector<double> pi;           // potentials
  // Scratch for LCA stamping and child traversal.
  std::vector<int> stamp;
  std::vector<int> head, next_sibling, stack;
  int epoch = 0;

  explicit Tree(int nodes)
      : parent(nodes, -1),
        up(nodes, 1),
        flow(nodes, 0.0),
        cost(nodes, 0.0),
        arc(nodes, -1),
        pi(nodes, 0.0),
        stamp(nodes, 0),
        head(nodes, -1),
        next_sibling(nodes, -1),
        stack(nodes, 0) {}

  int lca(int u, int v) {
    ++epoch;
    while (true) {
      if (u >= 0) {
        if (stamp[u] == epoch) return u;
        stamp[u] = epoch;
        u = parent[u];
      }
      if (v >= 0) {
        if (stamp[v] == epoch) return v;
        stamp[v] = epoch;
        v = parent[v];
      }
    }
  }

  void rebuild_children(int root) {
    std::fill(head.begin(), head.end(), -1);
    for (int node = 0; node < static_cast<int>(parent.size()); ++node) {
      if (node == root) continue;
      next_sibling[node] = head[parent[node]];
      head[parent[node]] = node;
    }
  }

  // Shift potentials over the subtree rooted at `node` (children lists must
  // be current).
  void shift_potentials(int node, double sigma) {
    int top = 0;
    stack[top++] = node;
    while (top > 0) {
      const int x = stack[--top];
      pi[x] += sigma;
      for (int c = head[x]; c >= 0; c = next_sibling[c]) stack[top++] = c;
    }
  }
};

}  // namespace

TransportSimplex::Solution TransportSimplex::solve(
    const Eigen::VectorXd& supplies, const Eigen::VectorXd& demands,
    const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(supplies.size());
  const int m = static_cast<int>(demands.size());
  if (n == 0 || m == 0)
    throw std::invalid_argument("transport: empty marginal");
  if (cost.rows() != n || cost.cols() != m)
    throw std::invalid_argument("transport: cost matrix shape mismatch");
  if ((supplies.array() < 0).any() || (demands.array() < 0).any())
    throw std::invalid_argument("transport: negative marginal weight");
  if (!cost.allFinite())
    throw std::invalid_argument("transport: non-finite ground cost entry");

  const double total_supply = supplies.sum();
  const double total_demand = demands.sum();
  if (total_supply <= 0 || total_demand <= 0)
    throw std::invalid_argument("transport: zero total mass");
  if (std::abs(total_supply - total_demand) >
      1e-9 * std::max(total_supply, total_demand))
    throw std::invalid_argument("transport: unbalanced marginals");

  // Absorb rounding-level imbalance into the demands.
  Eigen::VectorXd b = demands * (total_supply / total_demand);

  const int root = n + m;
  const int num_arcs = n * m;
  const double max_cost = cost.cwiseAbs().maxCoeff();
  const double art_cost = (max_cost + 1.0) * (n + m + 1);
  const double enter_eps = 1e-11 * std::max(1.0, max_cost);

  Tree tree(n + m + 1);

  // Initial basis: star of artificial arcs. Supply nodes send to the root,
  // demand nodes receive from it; zero-mass nodes point up so the tree
  // starts strongly feasible.
  for (int i = 0; i < n; ++i) {
    tree.parent[i] = root;
    tree.up[i] = 1;
    tree.flow[i] = supplies[i];
    tree.cost[i] = art_cost;
    tree.pi[i] = -art_cost;
  }
  for (int j = 0; j < m; ++j) {
    const int node = n + j;
    tree.parent[node] = root;
    tree.up[node] = b[j] > 0 ? 0 : 1;
    tree.flow[node] = b[j];
    tree.cost[node] = art_cost;
    tree.pi[node] = b[j] > 0 ? art_cost : -art_cost;
  }
  tree.pi[root] = 0.0;

  std::vector<std::uint8_t> in_tree(num_arcs, 0);
  const double* c = cost.data();  // Eigen default is column-major
  const auto arc_cost = [&](int a) { return c[(a % m) * n + (a / m)]; };

  const int block =
      std::max(64, static_cast<int>(std::sqrt(static_cast<double>(num_arcs))));
  int next_arc = 0;
  std::int64_t pivots = 0;
  const std::int64_t pivot_limit =
      64LL * (static_cast<std::int64_t>(n) + m + 2) *
      (static_cast<std::int64_t>(n) + m + 2);

  while (true) {
    // Entering arc: most negative reduced cost within a scan window.
    int entering = -1;
    double best = -enter_eps;
    int scanned = 0;
    while (scanned < num_arcs) {
      const int stop = std::min(num_arcs - scanned, block);
      for (int s = 0; s < stop; ++s) {
        const int a = next_arc;
        if (++next_arc == num_arcs) next_arc = 0;
        if (in_tree[a]) continue;
        const int i = a / m;
        const int j = a % m;
        const double rc = arc_cost(a) + tree.pi[i] - tree.pi[n + j];
        if (rc < best) {
          best = rc;
          entering = a;
        }
      }
      scanned += stop;
      if (entering >= 0) break;
    }
    if (entering < 0) break;  // dual feasible: optimal

    if (++pivots > pivot_limit)
      throw std::runtime_error("transport: pivot limit exceeded");

    const int src = entering / m;
    const int dst = n + entering % m;
    const int join = tree.lca(src, dst);

    // Leaving arc: minimum residual around the cycle. Strict comparison on
    // the source side, non-strict on the target side keeps the tree
    // strongly feasible.
    double theta = std::numeric_limits<double>::infinity();
    int out_node = -1;
    bool out_on_src_side = true;
    for (int x = src; x != join; x = tree.parent[x]) {
      if (tree.up[x] && tree.flow[x] < theta) {
        theta = tree.flow[x];
        out_node = x;
        out_on_src_side = true;
      }
    }
    for (int x = dst; x != join; x = tree.parent[x]) {
      if (!tree.up[x] && tree.flow[x] <= theta) {
        theta = tree.flow[x];
        out_node = x;
        out_on_src_side = false;
      }
    }
    if (out_node < 0)
      throw std::runtime_error("transport: unbounded pivot");

    // Push theta around the cycle.
    if (theta != 0.0) {
      for (int x = src; x != join; x = tree.parent[x])
        tree.flow[x] += tree.up[x] ? -theta : theta;
      for (int x = dst; x != join; x = tree.parent[x])
        tree.flow[x] += tree.up[x] ? theta : -theta;
    }

    const double reduced =
        arc_cost(entering) + tree.pi[src] - tree.pi[dst];
    if (tree.arc[out_node] >= 0) in_tree[tree.arc[out_node]] = 0;

    // Re-root the cut-off subtree at the entering arc's endpoint inside it,
    // reversing pred data along the path up to the leaving arc.
    const int new_child = out_on_src_side ? src : dst;
    const int new_parent = out_on_src_side ? dst : src;
    int node = new_child;
    int prev_parent = tree.parent[node];
    double carry_flow = theta;
    double carry_cost = arc_cost(entering);
    int carry_arc = entering;
    std::uint8_t carry_up = out_on_src_side ? 1 : 0;
    int attach = new_parent;
    while (true) {
      const int next = prev_parent;
      const double old_flow = tree.flow[node];
      const double old_cost = tree.cost[node];
      const int old_arc = tree.arc[node];
      const std::uint8_t old_up = tree.up[node];
      tree.parent[node] = attach;
      tree.flow[node] = carry_flow;
      tree.cost[node] = carry_cost;
      tree.arc[node] = carry_arc;
      tree.up[node] = carry_up;
      if (node == out_node) break;
      prev_parent = tree.parent[next];  // note: not yet overwritten
      attach = node;
      carry_flow = old_flow;
      carry_cost = old_cost;
      carry_arc = old_arc;
      carry_up = old_up ? 0 : 1;  // same physical arc seen from the old parent
      node = next;
    }
    in_tree[entering] = 1;

    // Potentials shift by a constant over the re-rooted subtree.
    const double sigma = out_on_src_side ? -reduced : reduced;
    tree.rebuild_children(root);
    tree.shift_potentials(new_child, sigma);
  }

  Solution result;
  result.pivots = pivots;
  result.potentials.assign(tree.pi.begin(), tree.pi.end() - 1);
  result.flows.reserve(n + m);
  double total_cost = 0.0;
  const double residual_tol = 1e-9 * total_supply;
  for (int node = 0; node < n + m; ++node) {
    const double f = tree.flow[node];
    if (tree.arc[node] < 0) {
      if (f > residual_tol)
        throw std::runtime_error("transport: residual artificial flow");
      continue;
    }
    if (f <= 0.0) continue;
    const int a = tree.arc[node];
    result.flows.push_back({a / m, a % m, f});
    total_cost += f * arc_cost(a);
  }
  result.cost = total_cost;
  return result;
}

}  // namespace otgsa::ot
