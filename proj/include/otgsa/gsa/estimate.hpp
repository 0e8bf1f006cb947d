#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otgsa/doe/sample_matrix.hpp"

namespace otgsa::gsa {

enum class Solver { Exact, Sinkhorn, WbOnly };

std::string to_string(Solver solver);
Solver solver_from_string(const std::string& s);

// Joint input-output Monte Carlo sample with a validity mask; masked rows
// never enter any estimate.
struct IoSample {
  doe::SampleMatrix inputs;
  Eigen::MatrixXd outputs;     // N x m
  std::vector<char> valid;     // empty means all valid

  Eigen::Index rows() const { return outputs.rows(); }
  Eigen::Index output_dim() const { return outputs.cols(); }
  std::vector<Eigen::Index> valid_rows() const;
  void validate() const;
};

struct EstimateOptions {
  int partitions = 30;       // equal-mass rank cells for continuous inputs
  Solver solver = Solver::Exact;
  int min_cell_size = 5;
  // Sinkhorn regularization as a fraction of the median ground cost.
  double sinkhorn_epsilon_scale = 1e-2;
  // Standardize each output dimension to unit variance before transport.
  bool standardize = true;
};

struct SeparationPoint {
  double center = 0.0;  // mean input value of the cell
  double gamma = 0.0;   // transport cost, conditional vs. full output
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool has_ci = false;
};

struct InputIndex {
  std::string name;
  double index = 0.0;          // in [0, 1] up to estimator noise
  double mean_part = 0.0;      // first-moment share
  double cov_part = 0.0;       // second-moment share
  double residual_part = 0.0;  // higher-order share
  double ci_lo = 0.0, ci_hi = 0.0;
  bool has_ci = false;
  bool irrelevant = false;     // at or below the dummy threshold
  bool constant_input = false; // degenerate column, index pinned to 0
  std::vector<SeparationPoint> separations;
};

struct SensitivityReport {
  std::vector<InputIndex> entries;
  double dummy_threshold = 0.0;
  double dummy_spread = 0.0;  // sd over dummy replicates
  int partitions = 0;
  Solver solver = Solver::Exact;
};

// Rank-based equal-mass cells of one input column over the valid rows;
// inputs with at most `partitions` distinct values get one cell per value.
std::vector<std::vector<Eigen::Index>> partition_cells(
    const IoSample& sample, Eigen::Index input, int partitions,
    int min_cell_size);

// Single-input index with its decomposition and separation curve.
InputIndex estimate_index(const IoSample& sample, Eigen::Index input,
                          const EstimateOptions& options);

// All inputs (OpenMP-parallel across conditioning cells).
SensitivityReport estimate_all(const IoSample& sample,
                               const EstimateOptions& options);

// Mean index of a synthetic input independent of the outputs, used as the
// irrelevance threshold for finite-sample estimates.
double dummy_threshold(const IoSample& sample, const EstimateOptions& options,
                       int replicates, std::uint64_t seed,
                       double* spread = nullptr);

// Percentile bootstrap over jointly resampled rows.
std::pair<double, double> bootstrap_ci(const IoSample& sample,
                                       Eigen::Index input,
                                       const EstimateOptions& options,
                                       double level, int replicates,
                                       std::uint64_t seed);

// Separation curve with per-cell percentile bootstrap bands.
std::vector<SeparationPoint> local_separations(const IoSample& sample,
                                               Eigen::Index input,
                                               const EstimateOptions& options,
                                               int ci_replicates = 0,
                                               std::uint64_t seed = 0);

}  // namespace otgsa::gsa
