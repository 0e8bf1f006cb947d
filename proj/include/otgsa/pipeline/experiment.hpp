#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "otgsa/daccs/config.hpp"
#include "otgsa/doe/layout.hpp"
#include "otgsa/gsa/report.hpp"

namespace otgsa::pipeline {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr std::array<const char*, 4> kQoiNames{
    "emissions", "gains_gdp", "gains_consumption", "total_subsidies"};

struct ExperimentConfig {
  dist::InputSpace inputs;
  dac::WorldConfig world;
  std::string scenario_id = "ndc";
  int n = 600;
  int designs = 6;
  int n_clusters = 20;
  int partitions = 20;
  int bootstrap_replicates = 200;
  int dummy_replicates = 5;
  gsa::Solver solver = gsa::Solver::WbOnly;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;
  int jobs = 0;  // 0 = runtime default
  bool write_trajectories = true;
  double discount_rate = 0.03;
  std::vector<int> fail_run_ids;  // runs forced to `failed` (masking tests)

  // All problems at once, empty when the config is runnable.
  std::vector<std::string> validation_errors() const;
};

// Parse the config bundle (inputs + world + experiment defaults).
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunRecord {
  int run_id = -1;
  int cluster_id = -1;
  int order_in_cluster = -1;
  bool ok = true;
  std::string reason;
  std::array<double, 3> emissions{};        // E(2040), E(2045), E(2050), Gt/yr
  std::array<double, 6> gains_gdp{};        // 2025..2050 grid, USD
  std::array<double, 6> gains_consumption{};
  double npv_gdp = 0.0;
  double npv_consumption = 0.0;
  double total_subsidies = 0.0;  // USD, discounted
  double avg_subsidy = 0.0;      // mean rate over 2025..2050, USD/t
};

struct StageStats {
  int executed = 0;
  int skipped = 0;
  int failed = 0;
};

// Stages. Each reads its declared inputs from out_dir and (re)creates
// missing prerequisites deterministically from the config.
StageStats run_sample(const ExperimentConfig& config);
StageStats run_layout(const ExperimentConfig& config);
StageStats run_simulations(const ExperimentConfig& config);
void run_analyze(const ExperimentConfig& config, const std::string& qoi);
void run_plotdata(const ExperimentConfig& config);

// Persistence helpers (deterministic byte-for-byte output).
void write_sample_files(const ExperimentConfig& config,
                        const doe::SampleMatrix& samples);
doe::SampleMatrix read_sample_files(const ExperimentConfig& config);
void write_runs_csv(const std::filesystem::path& path,
                    const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path);

// Simulate one input row (schedule + zero-subsidy baseline twin).
RunRecord simulate_run(const ExperimentConfig& config,
                       const doe::SampleMatrix& samples, int run_id);

}  // namespace otgsa::pipeline
