#include "otgsa/gsa/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "otgsa/ot/bures.hpp"
#include "otgsa/ot/exact.hpp"
#include "otgsa/ot/sinkhorn.hpp"
#include "otgsa/rng.hpp"

namespace otgsa::gsa {

namespace {

// Standardized valid-row outputs with the variance normalizer 2 V[Y].
struct Prepared {
  Eigen::MatrixXd outputs;            // V x m, standardized
  std::vector<Eigen::Index> rows;     // original row ids
  double two_v = 0.0;
  double median_cost = 0.0;           // cached for Sinkhorn epsilon scaling
  ot::DiscreteMeasure full;           // all standardized rows, uniform weights
  ot::GaussianSummary full_summary;   // shared across every conditioning cell
};

Prepared standardize_outputs(Eigen::MatrixXd raw,
                             const EstimateOptions& options) {
  Prepared prep;
  prep.outputs = std::move(raw);
  const Eigen::Index m = prep.outputs.cols();

  double trace = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mean = prep.outputs.col(j).mean();
    const double var =
        (prep.outputs.col(j).array() - mean).square().mean();
    if (var > 0.0 && options.standardize) {
      prep.outputs.col(j) =
          (prep.outputs.col(j).array() - mean) / std::sqrt(var);
      trace += 1.0;
    } else {
      trace += var;
    }
  }
  if (!(trace > 0.0))
    throw std::invalid_argument("gsa: outputs have zero variance");
  prep.two_v = 2.0 * trace;

  if (options.solver == Solver::Sinkhorn) {
    // Median pairwise cost over a fixed subsample; the regularization
    // scale must not depend on the conditioning input.
    const Eigen::Index probe = std::min<Eigen::Index>(prep.outputs.rows(), 256);
    std::vector<double> costs;
    costs.reserve(static_cast<std::size_t>(probe) * (probe - 1) / 2);
    for (Eigen::Index a = 0; a < probe; ++a)
      for (Eigen::Index b = a + 1; b < probe; ++b)
        costs.push_back(
            (prep.outputs.row(a) - prep.outputs.row(b)).squaredNorm());
    std::nth_element(costs.begin(), costs.begin() + costs.size() / 2,
                     costs.end());
    prep.median_cost = costs[costs.size() / 2];
  }
  prep.full = ot::DiscreteMeasure::uniform(prep.outputs);
  prep.full_summary = ot::empirical_summary(prep.full);
  return prep;
}

Prepared prepare(const IoSample& sample, const EstimateOptions& options) {
  sample.validate();
  const auto rows = sample.valid_rows();
  const auto v = static_cast<Eigen::Index>(rows.size());
  if (v < 2) throw std::invalid_argument("gsa: fewer than 2 valid rows");
  Eigen::MatrixXd raw(v, sample.output_dim());
  for (Eigen::Index r = 0; r < v; ++r)
    raw.row(r) = sample.outputs.row(rows[r]);
  Prepared prep = standardize_outputs(std::move(raw), options);
  prep.rows = rows;
  return prep;
}

struct CellCost {
  double gamma = 0.0, mean_part = 0.0, cov_part = 0.0, residual = 0.0;
};

CellCost cell_transport_cost(const Prepared& prep,
                             const std::vector<Eigen::Index>& cell_local,
                             const EstimateOptions& options) {
  const Eigen::Index m = prep.outputs.cols();
  Eigen::MatrixXd cell_points(static_cast<Eigen::Index>(cell_local.size()), m);
  for (std::size_t r = 0; r < cell_local.size(); ++r)
    cell_points.row(static_cast<Eigen::Index>(r)) =
        prep.outputs.row(cell_local[r]);

  const ot::DiscreteMeasure conditional =
      ot::DiscreteMeasure::uniform(std::move(cell_points));

  const ot::BuresTerms closed = ot::wasserstein_bures(
      ot::empirical_summary(conditional), prep.full_summary);

  CellCost cost;
  cost.mean_part = closed.mean_term;
  cost.cov_part = closed.cov_term;
  switch (options.solver) {
    case Solver::WbOnly:
      cost.gamma = closed.total();
      cost.residual = 0.0;
      break;
    case Solver::Exact:
      cost.gamma = ot::exact_cost(conditional, prep.full);
      cost.residual = cost.gamma - closed.total();
      break;
    case Solver::Sinkhorn: {
      ot::SinkhornOptions sink;
      sink.epsilon =
          std::max(options.sinkhorn_epsilon_scale * prep.median_cost, 1e-12);
      sink.max_iter = 20000;
      sink.tol = 1e-6;
      cost.gamma = ot::solve_sinkhorn(conditional, prep.full, sink).cost;
      cost.residual = cost.gamma - closed.total();
      break;
    }
  }
  return cost;
}

std::vector<std::vector<Eigen::Index>> cells_for_column(
    const Eigen::VectorXd& column, int partitions, int min_cell_size) {
  const auto v = column.size();
  if (partitions < 2)
    throw std::invalid_argument("gsa: need at least 2 partitions");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(v));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return column[a] < column[b];
                   });

  std::set<double> distinct(column.data(), column.data() + v);
  std::vector<std::vector<Eigen::Index>> cells;
  if (static_cast<int>(distinct.size()) <= partitions) {
    // Discrete-valued input: one cell per distinct value.
    for (std::size_t k = 0; k < order.size();) {
      std::vector<Eigen::Index> cell;
      const double value = column[order[k]];
      while (k < order.size() && column[order[k]] == value)
        cell.push_back(order[k++]);
      cells.push_back(std::move(cell));
    }
    if (cells.size() < 2)
      throw std::invalid_argument("gsa: input column is constant");
  } else {
    cells.resize(static_cast<std::size_t>(partitions));
    const auto base = v / partitions;
    const auto extra = v % partitions;
    std::size_t pos = 0;
    for (int c = 0; c < partitions; ++c) {
      const auto size = base + (c < extra ? 1 : 0);
      for (Eigen::Index k = 0; k < size; ++k)
        cells[static_cast<std::size_t>(c)].push_back(order[pos++]);
    }
  }
  for (const auto& cell : cells)
    if (static_cast<int>(cell.size()) < min_cell_size)
      throw std::invalid_argument(
          "gsa: conditioning cell below the minimum size");
  return cells;
}

bool is_constant(const Eigen::VectorXd& column) {
  return (column.array() == column[0]).all();
}

InputIndex estimate_from_prepared(const Prepared& prep,
                                  const Eigen::VectorXd& column,
                                  const std::string& name,
                                  const EstimateOptions& options) {
  InputIndex entry;
  entry.name = name;
  if (is_constant(column)) {
    entry.constant_input = true;
    entry.irrelevant = true;
    return entry;
  }

  const auto cells =
      cells_for_column(column, options.partitions, options.min_cell_size);
  const auto n_cells = cells.size();
  std::vector<CellCost> costs(n_cells);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < n_cells; ++c)
    costs[c] = cell_transport_cost(prep, cells[c], options);

  double gamma_sum = 0.0, mean_sum = 0.0, cov_sum = 0.0, residual_sum = 0.0;
  entry.separations.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    gamma_sum += costs[c].gamma;
    mean_sum += costs[c].mean_part;
    cov_sum += costs[c].cov_part;
    residual_sum += costs[c].residual;
    SeparationPoint point;
    double center = 0.0;
    for (const auto r : cells[c]) center += column[r];
    point.center = center / static_cast<double>(cells[c].size());
    point.gamma = costs[c].gamma;
    entry.separations.push_back(point);
  }
  const double scale = static_cast<double>(n_cells) * prep.two_v;
  entry.index = gamma_sum / scale;
  entry.mean_part = mean_sum / scale;
  entry.cov_part = cov_sum / scale;
  entry.residual_part = residual_sum / scale;
  return entry;
}

Eigen::VectorXd valid_column(const IoSample& sample, Eigen::Index input,
                             const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd column(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    column[static_cast<Eigen::Index>(r)] = sample.inputs.values(rows[r], input);
  return column;
}

}  // namespace

std::string to_string(Solver solver) {
  switch (solver) {
    case Solver::Exact: return "exact";
    case Solver::Sinkhorn: return "sinkhorn";
    case Solver::WbOnly: return "wb";
  }
  return "exact";
}

Solver solver_from_string(const std::string& s) {
  if (s == "exact") return Solver::Exact;
  if (s == "sinkhorn") return Solver::Sinkhorn;
  if (s == "wb" || s == "wb_only") return Solver::WbOnly;
  throw std::invalid_argument("unknown solver: " + s);
}

std::vector<Eigen::Index> IoSample::valid_rows() const {
  std::vector<Eigen::Index> rows;
  rows.reserve(static_cast<std::size_t>(outputs.rows()));
  for (Eigen::Index r = 0; r < outputs.rows(); ++r)
    if (valid.empty() || valid[static_cast<std::size_t>(r)]) rows.push_back(r);
  return rows;
}

void IoSample::validate() const {
  inputs.validate();
  if (inputs.rows() != outputs.rows())
    throw std::invalid_argument("io sample: input/output row mismatch");
  if (outputs.cols() < 1)
    throw std::invalid_argument("io sample: outputs need at least 1 column");
  if (!valid.empty() &&
      static_cast<Eigen::Index>(valid.size()) != outputs.rows())
    throw std::invalid_argument("io sample: mask length mismatch");
}

std::vector<std::vector<Eigen::Index>> partition_cells(const IoSample& sample,
                                                       Eigen::Index input,
                                                       int partitions,
                                                       int min_cell_size) {
  const auto rows = sample.valid_rows();
  const Eigen::VectorXd column = valid_column(sample, input, rows);
  auto cells = cells_for_column(column, partitions, min_cell_size);
  for (auto& cell : cells)
    for (auto& r : cell) r = rows[static_cast<std::size_t>(r)];
  return cells;
}

InputIndex estimate_index(const IoSample& sample, Eigen::Index input,
                          const EstimateOptions& options) {
  const Prepared prep = prepare(sample, options);
  return estimate_from_prepared(
      prep, valid_column(sample, input, prep.rows),
      sample.inputs.column_names[static_cast<std::size_t>(input)], options);
}

SensitivityReport estimate_all(const IoSample& sample,
                               const EstimateOptions& options) {
  const Prepared prep = prepare(sample, options);
  SensitivityReport report;
  report.partitions = options.partitions;
  report.solver = options.solver;
  report.entries.reserve(static_cast<std::size_t>(sample.inputs.cols()));
  for (Eigen::Index j = 0; j < sample.inputs.cols(); ++j)
    report.entries.push_back(estimate_from_prepared(
        prep, valid_column(sample, j, prep.rows),
        sample.inputs.column_names[static_cast<std::size_t>(j)], options));
  return report;
}

double dummy_threshold(const IoSample& sample, const EstimateOptions& options,
                       int replicates, std::uint64_t seed, double* spread) {
  if (replicates < 1)
    throw std::invalid_argument("dummy_threshold: need at least 1 replicate");
  const Prepared prep = prepare(sample, options);
  const auto v = static_cast<Eigen::Index>(prep.rows.size());
  std::vector<double> estimates(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    Philox rng = substream(seed, "gsa-dummy", static_cast<std::uint64_t>(r));
    Eigen::VectorXd dummy(v);
    for (Eigen::Index i = 0; i < v; ++i) dummy[i] = rng.next_double();
    estimates[static_cast<std::size_t>(r)] =
        estimate_from_prepared(prep, dummy, "dummy", options).index;
  }
  const double mean =
      std::accumulate(estimates.begin(), estimates.end(), 0.0) /
      static_cast<double>(replicates);
  if (spread) {
    double ss = 0.0;
    for (const double e : estimates) ss += (e - mean) * (e - mean);
    *spread = replicates > 1
                  ? std::sqrt(ss / static_cast<double>(replicates - 1))
                  : 0.0;
  }
  return mean;
}

std::pair<double, double> bootstrap_ci(const IoSample& sample,
                                       Eigen::Index input,
                                       const EstimateOptions& options,
                                       double level, int replicates,
                                       std::uint64_t seed) {
  if (replicates < 100)
    throw std::invalid_argument("bootstrap_ci: need at least 100 replicates");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("bootstrap_ci: level outside (0,1)");
  sample.validate();
  const auto rows = sample.valid_rows();
  const auto v = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd raw(v, sample.output_dim());
  for (Eigen::Index i = 0; i < v; ++i)
    raw.row(i) = sample.outputs.row(rows[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd column = valid_column(sample, input, rows);
  const std::string name =
      sample.inputs.column_names[static_cast<std::size_t>(input)];

  std::vector<double> estimates(static_cast<std::size_t>(replicates));
  Eigen::MatrixXd resampled_raw(v, raw.cols());
  Eigen::VectorXd resampled_column(v);
  for (int r = 0; r < replicates; ++r) {
    Philox rng =
        substream(seed, "gsa-bootstrap:" + name, static_cast<std::uint64_t>(r));
    for (Eigen::Index i = 0; i < v; ++i) {
      const auto pick = static_cast<Eigen::Index>(
          rng.next_below(static_cast<std::uint64_t>(v)));
      resampled_raw.row(i) = raw.row(pick);
      resampled_column[i] = column[pick];
    }
    const Prepared resampled = standardize_outputs(resampled_raw, options);
    estimates[static_cast<std::size_t>(r)] =
        estimate_from_prepared(resampled, resampled_column, name, options)
            .index;
  }
  std::sort(estimates.begin(), estimates.end());
  const auto quantile = [&](double p) {
    const double h = p * (static_cast<double>(replicates) - 1.0);
    const auto k = static_cast<std::size_t>(std::floor(h));
    const double frac = h - std::floor(h);
    const double lo = estimates[k];
    const double hi =
        estimates[std::min<std::size_t>(k + 1, estimates.size() - 1)];
    return lo + frac * (hi - lo);
  };
  const double alpha = 1.0 - level;
  return {quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0)};
}

std::vector<SeparationPoint> local_separations(const IoSample& sample,
                                               Eigen::Index input,
                                               const EstimateOptions& options,
                                               int ci_replicates,
                                               std::uint64_t seed) {
  const Prepared prep = prepare(sample, options);
  const Eigen::VectorXd column = valid_column(sample, input, prep.rows);
  InputIndex entry = estimate_from_prepared(
      prep, column, sample.inputs.column_names[static_cast<std::size_t>(input)],
      options);
  if (entry.constant_input)
    throw std::invalid_argument("local_separations: input column is constant");
  if (ci_replicates < 1) return entry.separations;

  const auto v = static_cast<Eigen::Index>(prep.rows.size());
  Eigen::MatrixXd raw(v, sample.output_dim());
  for (Eigen::Index i = 0; i < v; ++i)
    raw.row(i) = sample.outputs.row(prep.rows[static_cast<std::size_t>(i)]);
  const auto n_cells = entry.separations.size();
  std::vector<std::vector<double>> gammas(
      n_cells, std::vector<double>(static_cast<std::size_t>(ci_replicates)));
  Eigen::MatrixXd resampled_raw(v, raw.cols());
  Eigen::VectorXd resampled_column(v);
  for (int r = 0; r < ci_replicates; ++r) {
    Philox rng = substream(seed, "gsa-separation",
                           static_cast<std::uint64_t>(r));
    for (Eigen::Index i = 0; i < v; ++i) {
      const auto pick = static_cast<Eigen::Index>(
          rng.next_below(static_cast<std::uint64_t>(v)));
      resampled_raw.row(i) = raw.row(pick);
      resampled_column[i] = column[pick];
    }
    const Prepared resampled = standardize_outputs(resampled_raw, options);
    const InputIndex replicate =
        estimate_from_prepared(resampled, resampled_column, entry.name,
                               options);
    if (replicate.separations.size() != n_cells) continue;  // degenerate draw
    for (std::size_t c = 0; c < n_cells; ++c)
      gammas[c][static_cast<std::size_t>(r)] = replicate.separations[c].gamma;
  }
  for (std::size_t c = 0; c < n_cells; ++c) {
    auto& draws = gammas[c];
    std::sort(draws.begin(), draws.end());
    const auto lo_idx = static_cast<std::size_t>(
        0.025 * static_cast<double>(draws.size() - 1));
    const auto hi_idx = static_cast<std::size_t>(
        std::ceil(0.975 * static_cast<double>(draws.size() - 1)));
    entry.separations[c].ci_lo = draws[lo_idx];
    entry.separations[c].ci_hi = draws[hi_idx];
    entry.separations[c].has_ci = true;
  }
  return entry.separations;
}

}  // namespace otgsa::gsa
