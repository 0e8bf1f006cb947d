#include "otgsa/pipeline/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "otgsa/rng.hpp"

namespace otgsa::pipeline {

namespace fs = std::filesystem;

namespace {

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_text_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string matrix_csv(const Eigen::MatrixXd& matrix,
                       const std::vector<std::string>& columns) {
  std::string csv = "run_id";
  for (const auto& name : columns) csv += ',' + name;
  csv += '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    csv += std::to_string(i);
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
      csv += ',' + fmt(matrix(i, j));
    csv += '\n';
  }
  return csv;
}

Eigen::MatrixXd read_matrix_csv(const fs::path& path,
                                std::vector<std::string>* columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty csv: " + path.string());
  auto header = split_csv_line(line);
  if (header.empty() || header.front() != "run_id")
    throw std::runtime_error("bad csv header in " + path.string());
  if (columns) columns->assign(header.begin() + 1, header.end());

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("ragged csv row in " + path.string());
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j)
      row.push_back(std::stod(fields[j]));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(header.size() - 1));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return matrix;
}

nlohmann::json experiment_json(const ExperimentConfig& config) {
  nlohmann::json node;
  node["scenario"] = config.scenario_id;
  node["n"] = config.n;
  node["designs"] = config.designs;
  node["n_clusters"] = config.n_clusters;
  node["partitions"] = config.partitions;
  node["bootstrap_replicates"] = config.bootstrap_replicates;
  node["dummy_replicates"] = config.dummy_replicates;
  node["solver"] = gsa::to_string(config.solver);
  node["seed"] = config.seed;
  node["discount_rate"] = config.discount_rate;
  node["write_trajectories"] = config.write_trajectories;
  if (!config.fail_run_ids.empty()) node["fail_run_ids"] = config.fail_run_ids;
  return node;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  nlohmann::json bundle;
  bundle["experiment"] = experiment_json(config);
  bundle["inputs"] = dist::to_json(config.inputs);
  bundle["world"] = dac::to_json(config.world);
  return hash_label(bundle.dump());
}

fs::path samples_path(const ExperimentConfig& c) { return c.out_dir / "samples.csv"; }
fs::path quantiles_path(const ExperimentConfig& c) { return c.out_dir / "quantiles.csv"; }
fs::path inputs_used_path(const ExperimentConfig& c) { return c.out_dir / "inputs_used.json"; }
fs::path layout_path(const ExperimentConfig& c) { return c.out_dir / "layout.json"; }
fs::path runs_path(const ExperimentConfig& c) { return c.out_dir / "runs.csv"; }
fs::path trajectories_path(const ExperimentConfig& c) { return c.out_dir / "trajectories.csv"; }
fs::path manifest_path(const ExperimentConfig& c) { return c.out_dir / "manifest.json"; }

const std::vector<std::string>& run_csv_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h{"run_id", "cluster_id", "order_in_cluster",
                               "status", "reason"};
    h.insert(h.end(), {"e2040", "e2045", "e2050"});
    for (int year = 2025; year <= 2050; year += 5)
      h.push_back("gain_gdp_" + std::to_string(year));
    for (int year = 2025; year <= 2050; year += 5)
      h.push_back("gain_cons_" + std::to_string(year));
    h.insert(h.end(),
             {"npv_gdp", "npv_cons", "total_subsidies", "avg_subsidy"});
    return h;
  }();
  return header;
}

}  // namespace

std::vector<std::string> ExperimentConfig::validation_errors() const {
  std::vector<std::string> errors;
  if (n < 1) errors.push_back("n must be positive");
  if (designs < 1) errors.push_back("designs must be positive");
  if (designs >= 1 && n % std::max(designs, 1) != 0)
    errors.push_back("n must be divisible by designs");
  if (n_clusters < 1) errors.push_back("n_clusters must be positive");
  if (n_clusters >= 1 && n % std::max(n_clusters, 1) != 0)
    errors.push_back("n must be divisible by n_clusters");
  if (scenario_id != "ndc" && scenario_id != "lts")
    errors.push_back("scenario must be ndc or lts");
  if (partitions < 2) errors.push_back("partitions must be at least 2");
  if (bootstrap_replicates < 100)
    errors.push_back("bootstrap_replicates must be at least 100");
  if (dummy_replicates < 1)
    errors.push_back("dummy_replicates must be at least 1");
  if (out_dir.empty()) errors.push_back("output directory not set");
  try {
    inputs.validate();
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }
  try {
    world.validate();
    world.scenario(scenario_id);
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }
  for (const int id : fail_run_ids)
    if (id < 0 || id >= n)
      errors.push_back("fail_run_ids entry out of range");
  return errors;
}

ExperimentConfig load_config(const fs::path& path) {
  const nlohmann::json bundle = nlohmann::json::parse(read_text_file(path));
  ExperimentConfig config;
  config.inputs = dist::input_space_from_json(bundle.at("inputs"));
  config.world = dac::world_from_json(bundle.at("world"));
  if (bundle.contains("experiment")) {
    const auto& ex = bundle.at("experiment");
    config.scenario_id = ex.value("scenario", config.scenario_id);
    config.n = ex.value("n", config.n);
    config.designs = ex.value("designs", config.designs);
    config.n_clusters = ex.value("n_clusters", config.n_clusters);
    config.partitions = ex.value("partitions", config.partitions);
    config.bootstrap_replicates =
        ex.value("bootstrap_replicates", config.bootstrap_replicates);
    config.dummy_replicates =
        ex.value("dummy_replicates", config.dummy_replicates);
    if (ex.contains("solver"))
      config.solver = gsa::solver_from_string(ex.at("solver"));
    config.seed = ex.value("seed", config.seed);
    config.discount_rate = ex.value("discount_rate", config.discount_rate);
    config.write_trajectories =
        ex.value("write_trajectories", config.write_trajectories);
    if (ex.contains("fail_run_ids"))
      config.fail_run_ids = ex.at("fail_run_ids").get<std::vector<int>>();
    if (ex.contains("out_dir"))
      config.out_dir = ex.at("out_dir").get<std::string>();
  }
  return config;
}

void write_sample_files(const ExperimentConfig& config,
                        const doe::SampleMatrix& samples) {
  write_text_file(samples_path(config),
                  matrix_csv(samples.values, samples.column_names));
  write_text_file(quantiles_path(config),
                  matrix_csv(samples.quantiles, samples.column_names));
  nlohmann::json used;
  used["schema_version"] = kSchemaVersion;
  used["seed"] = config.seed;
  used["inputs"] = dist::to_json(config.inputs);
  write_text_file(inputs_used_path(config), used.dump(2) + "\n");
}

doe::SampleMatrix read_sample_files(const ExperimentConfig& config) {
  doe::SampleMatrix samples;
  samples.values = read_matrix_csv(samples_path(config), &samples.column_names);
  std::vector<std::string> names;
  samples.quantiles = read_matrix_csv(quantiles_path(config), &names);
  if (names != samples.column_names)
    throw std::runtime_error("samples/quantiles column mismatch");
  samples.validate();
  return samples;
}

StageStats run_sample(const ExperimentConfig& config) {
  StageStats stats;
  if (fs::exists(samples_path(config)) && fs::exists(quantiles_path(config))) {
    stats.skipped = config.n;
    return stats;
  }
  const doe::SampleMatrix samples =
      dist::lhs_sample(config.inputs, config.n, config.designs, config.seed);
  write_sample_files(config, samples);
  stats.executed = config.n;
  return stats;
}

StageStats run_layout(const ExperimentConfig& config) {
  StageStats stats;
  if (fs::exists(layout_path(config))) {
    stats.skipped = 1;
    return stats;
  }
  run_sample(config);
  const doe::SampleMatrix samples = read_sample_files(config);
  const doe::ExperimentLayout layout =
      doe::cluster_balanced(samples, config.n_clusters, config.seed);
  write_text_file(layout_path(config), doe::to_json(layout).dump(2) + "\n");
  stats.executed = 1;
  return stats;
}

RunRecord simulate_run(const ExperimentConfig& config,
                       const doe::SampleMatrix& samples, int run_id) {
  RunRecord record;
  record.run_id = run_id;
  dac::RunParams params = dac::bind_run_params(samples, run_id);
  const auto& scenario = config.world.scenario(config.scenario_id);

  const dac::DacWorld world =
      dac::Simulator(config.world, scenario, params).run();
  dac::RunParams baseline_params = params;
  baseline_params.subsidy.peak = 0.0;
  const dac::DacWorld baseline =
      dac::Simulator(config.world, scenario, baseline_params).run();

  const auto emissions = dac::qoi_emissions(world);
  record.emissions = emissions;
  const auto gdp = dac::qoi_policy_gains(world, baseline, dac::GainMetric::GDP,
                                         config.discount_rate);
  const auto cons = dac::qoi_policy_gains(
      world, baseline, dac::GainMetric::Consumption, config.discount_rate);
  for (std::size_t k = 0; k < gdp.per_year.size() && k < 6; ++k) {
    record.gains_gdp[k] = gdp.per_year[k];
    record.gains_consumption[k] = cons.per_year[k];
  }
  record.npv_gdp = gdp.npv;
  record.npv_consumption = cons.npv;
  record.total_subsidies =
      dac::qoi_total_subsidies(world, params.subsidy, config.discount_rate);
  double rate_sum = 0.0;
  int rate_count = 0;
  for (int year = dac::kStartYear; year <= dac::kSubsidyHorizon; ++year) {
    rate_sum += dac::subsidy_at(params.subsidy, year);
    ++rate_count;
  }
  record.avg_subsidy = rate_sum / rate_count;
  return record;
}

namespace {

std::string trajectory_csv_rows(const dac::DacWorld& world, int run_id) {
  std::string rows;
  for (std::size_t g = 0; g < world.grid.size(); ++g) {
    for (std::size_t n = 0; n < world.n_regions(); ++n) {
      for (std::size_t d = 0; d < world.n_techs(); ++d) {
        const std::string prefix = std::to_string(run_id) + ',' +
                                   world.region_ids[n] + ',' +
                                   world.tech_ids[d] + ',' +
                                   std::to_string(world.grid[g]) + ',';
        rows += prefix + "capacity," + fmt(world.cap(g, n, d)) + '\n';
        rows += prefix + "investment," +
                fmt(world.investment[(g * world.n_regions() + n) *
                                         world.n_techs() +
                                     d]) +
                '\n';
      }
    }
  }
  return rows;
}

}  // namespace

void write_runs_csv(const fs::path& path,
                    const std::vector<RunRecord>& records) {
  const auto& header = run_csv_header();
  std::string csv;
  for (std::size_t k = 0; k < header.size(); ++k)
    csv += (k ? "," : "") + header[k];
  csv += '\n';
  for (const auto& r : records) {
    csv += std::to_string(r.run_id) + ',' + std::to_string(r.cluster_id) +
           ',' + std::to_string(r.order_in_cluster) + ',';
    csv += r.ok ? "ok" : "failed";
    csv += ',' + r.reason;
    for (const double e : r.emissions) csv += ',' + fmt(e);
    for (const double g : r.gains_gdp) csv += ',' + fmt(g);
    for (const double g : r.gains_consumption) csv += ',' + fmt(g);
    csv += ',' + fmt(r.npv_gdp) + ',' + fmt(r.npv_consumption) + ',' +
           fmt(r.total_subsidies) + ',' + fmt(r.avg_subsidy) + '\n';
  }
  write_text_file(path, csv);
}

std::vector<RunRecord> read_runs_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty runs file: " + path.string());
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != run_csv_header().size())
      throw std::runtime_error("ragged runs.csv row");
    RunRecord r;
    std::size_t k = 0;
    r.run_id = std::stoi(f[k++]);
    r.cluster_id = std::stoi(f[k++]);
    r.order_in_cluster = std::stoi(f[k++]);
    r.ok = f[k++] == "ok";
    r.reason = f[k++];
    for (auto& e : r.emissions) e = std::stod(f[k++]);
    for (auto& g : r.gains_gdp) g = std::stod(f[k++]);
    for (auto& g : r.gains_consumption) g = std::stod(f[k++]);
    r.npv_gdp = std::stod(f[k++]);
    r.npv_consumption = std::stod(f[k++]);
    r.total_subsidies = std::stod(f[k++]);
    r.avg_subsidy = std::stod(f[k++]);
    records.push_back(std::move(r));
  }
  return records;
}

StageStats run_simulations(const ExperimentConfig& config) {
  run_layout(config);
  const doe::SampleMatrix samples = read_sample_files(config);
  const doe::ExperimentLayout layout = doe::layout_from_json(
      nlohmann::json::parse(read_text_file(layout_path(config))));
  layout.validate(config.n);

  // Resume: keep any records already on disk, simulate the rest.
  std::vector<std::optional<RunRecord>> slots(
      static_cast<std::size_t>(config.n));
  StageStats stats;
  if (fs::exists(manifest_path(config))) {
    // Refuse to resume into a directory built from a different config.
    const auto manifest =
        nlohmann::json::parse(read_text_file(manifest_path(config)));
    if (manifest.value("config_hash", std::uint64_t{0}) !=
        config_hash(config))
      throw std::runtime_error(
          "output directory was produced by a different configuration");
  }
  if (fs::exists(runs_path(config))) {
    for (auto& record : read_runs_csv(runs_path(config)))
      if (record.run_id >= 0 && record.run_id < config.n)
        slots[static_cast<std::size_t>(record.run_id)] = std::move(record);
    for (const auto& slot : slots)
      if (slot) ++stats.skipped;
  }

  const auto n_clusters = static_cast<int>(layout.clusters.size());
#ifdef _OPENMP
  if (config.jobs > 0) omp_set_num_threads(config.jobs);
#endif
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < n_clusters; ++c) {
    // Runs within a cluster execute in their stored order.
    for (std::size_t position = 0; position < layout.clusters[c].size();
         ++position) {
      const int run_id = layout.clusters[c][position];
      auto& slot = slots[static_cast<std::size_t>(run_id)];
      if (slot) continue;
      RunRecord record;
      const bool injected =
          std::find(config.fail_run_ids.begin(), config.fail_run_ids.end(),
                    run_id) != config.fail_run_ids.end();
      if (injected) {
        record.run_id = run_id;
        record.ok = false;
        record.reason = "injected";
        // Poisoned payload: must never reach any statistic.
        record.emissions = {1e12, 1e12, 1e12};
        record.npv_gdp = record.npv_consumption = 1e24;
        record.total_subsidies = 1e24;
        record.avg_subsidy = 1e12;
      } else {
        try {
          record = simulate_run(config, samples, run_id);
        } catch (const std::exception& e) {
          record.run_id = run_id;
          record.ok = false;
          record.reason = e.what();
        }
      }
      record.cluster_id = c;
      record.order_in_cluster = static_cast<int>(position);
      slot = std::move(record);
    }
  }

  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(config.n));
  for (int run_id = 0; run_id < config.n; ++run_id) {
    auto& slot = slots[static_cast<std::size_t>(run_id)];
    if (!slot) throw std::logic_error("runner: hole in run coverage");
    if (!slot->ok) ++stats.failed;
    records.push_back(*slot);
  }
  stats.executed = config.n - stats.skipped;
  write_runs_csv(runs_path(config), records);

  if (config.write_trajectories && !fs::exists(trajectories_path(config))) {
    // Re-simulated in run order; deterministic, so the bytes match any
    // earlier invocation (failed/injected runs are skipped).
    std::string trajectories = "run_id,region,tech,year,variable,value\n";
    for (int run_id = 0; run_id < config.n; ++run_id) {
      const auto& record = records[static_cast<std::size_t>(run_id)];
      if (!record.ok) continue;
      dac::RunParams params = dac::bind_run_params(samples, run_id);
      const dac::DacWorld world =
          dac::Simulator(config.world, config.world.scenario(config.scenario_id),
                         params)
              .run();
      trajectories += trajectory_csv_rows(world, run_id);
    }
    write_text_file(trajectories_path(config), trajectories);
  }

  nlohmann::json manifest;
  manifest["code_version"] = kCodeVersion;
  manifest["config_hash"] = config_hash(config);
  manifest["experiment"] = experiment_json(config);
  manifest["n_runs"] = config.n;
  manifest["n_failed"] = stats.failed;
  nlohmann::json schemas;
  for (const char* file :
       {"samples.csv", "quantiles.csv", "inputs_used.json", "layout.json",
        "runs.csv", "trajectories.csv", "manifest.json", "report_<qoi>.csv",
        "report_<qoi>.json", "ranking_<qoi>.csv", "summary_<qoi>.json",
        "plot_density.csv", "plot_partial_scatter.csv",
        "plot_partial_smooth.csv", "plot_separations.csv"})
    schemas[file] = kSchemaVersion;
  manifest["file_schemas"] = schemas;
  write_text_file(manifest_path(config), manifest.dump(2) + "\n");
  return stats;
}

namespace {

double sorted_quantile(std::vector<double> values, double p) {
  if (values.empty())
    throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * (static_cast<double>(values.size()) - 1.0);
  const auto k = static_cast<std::size_t>(std::floor(h));
  const double frac = h - std::floor(h);
  const double lo = values[k];
  const double hi = values[std::min(k + 1, values.size() - 1)];
  return lo + frac * (hi - lo);
}

Eigen::MatrixXd qoi_outputs(const std::vector<RunRecord>& records,
                            const std::string& qoi) {
  const auto n = static_cast<Eigen::Index>(records.size());
  if (qoi == "emissions") {
    Eigen::MatrixXd outputs(n, 3);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int k = 0; k < 3; ++k)
        outputs(i, k) = records[static_cast<std::size_t>(i)]
                            .emissions[static_cast<std::size_t>(k)];
    return outputs;
  }
  Eigen::MatrixXd outputs(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    if (qoi == "gains_gdp")
      outputs(i, 0) = r.npv_gdp;
    else if (qoi == "gains_consumption")
      outputs(i, 0) = r.npv_consumption;
    else if (qoi == "total_subsidies")
      outputs(i, 0) = r.total_subsidies;
    else
      throw std::invalid_argument("unknown qoi: " + qoi);
  }
  return outputs;
}

}  // namespace

void run_analyze(const ExperimentConfig& config, const std::string& qoi) {
  const doe::SampleMatrix samples = read_sample_files(config);
  const std::vector<RunRecord> records = read_runs_csv(runs_path(config));
  if (static_cast<int>(records.size()) != config.n)
    throw std::runtime_error("analyze: runs.csv does not cover the design");

  gsa::IoSample sample;
  sample.inputs = samples;
  sample.outputs = qoi_outputs(records, qoi);
  sample.valid.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    sample.valid[i] = records[i].ok ? 1 : 0;

  gsa::EstimateOptions options;
  options.partitions = config.partitions;
  options.solver = config.solver;

  gsa::SensitivityReport report = gsa::estimate_all(sample, options);
  report.dummy_threshold =
      gsa::dummy_threshold(sample, options, config.dummy_replicates,
                           config.seed, &report.dummy_spread);
  for (std::size_t j = 0; j < report.entries.size(); ++j) {
    auto& entry = report.entries[j];
    if (!entry.constant_input) {
      const auto ci = gsa::bootstrap_ci(
          sample, static_cast<Eigen::Index>(j), options, 0.95,
          config.bootstrap_replicates, config.seed);
      entry.ci_lo = ci.first;
      entry.ci_hi = ci.second;
      entry.has_ci = true;
    }
    entry.irrelevant =
        entry.constant_input || entry.index <= report.dummy_threshold;
  }

  write_text_file(config.out_dir / ("report_" + qoi + ".csv"),
                  gsa::report_to_csv(report));
  write_text_file(config.out_dir / ("report_" + qoi + ".json"),
                  gsa::report_to_json(report).dump(2) + "\n");
  write_text_file(
      config.out_dir / ("ranking_" + qoi + ".csv"),
      gsa::ranking_to_csv(gsa::rank_inputs(report, config.inputs, true)));

  // Distribution summaries over the valid runs.
  nlohmann::json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["qoi"] = qoi;
  summary["n_valid"] = static_cast<int>(sample.valid_rows().size());
  summary["n_failed"] =
      static_cast<int>(records.size() - sample.valid_rows().size());
  const std::array<std::string, 3> year_names{"e2040", "e2045", "e2050"};
  if (qoi == "emissions") {
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> values;
      for (const auto& r : records)
        if (r.ok) values.push_back(r.emissions[k]);
      nlohmann::json stats;
      stats["median"] = sorted_quantile(values, 0.5);
      stats["q05"] = sorted_quantile(values, 0.05);
      stats["q95"] = sorted_quantile(values, 0.95);
      summary[year_names[k]] = stats;
    }
    // Share of runs at gigaton scale by 2050 and the subsidy level needed
    // to get there (5th percentile of average subsidy among such runs).
    std::vector<double> gigaton_subsidies;
    int gigaton_count = 0, valid_count = 0;
    for (const auto& r : records) {
      if (!r.ok) continue;
      ++valid_count;
      if (r.emissions[2] >= 1.0) {
        ++gigaton_count;
        gigaton_subsidies.push_back(r.avg_subsidy);
      }
    }
    summary["gigaton_probability"] =
        valid_count ? static_cast<double>(gigaton_count) / valid_count : 0.0;
    if (gigaton_subsidies.empty()) {
      summary["min_subsidy_for_gigaton"] = nullptr;
    } else {
      nlohmann::json stat;
      stat["q05"] = sorted_quantile(gigaton_subsidies, 0.05);
      // Percentile bootstrap over the gigaton subset.
      std::vector<double> replicate_q05;
      Philox rng = substream(config.seed, "gigaton-bootstrap");
      const auto g = gigaton_subsidies.size();
      for (int b = 0; b < 1000; ++b) {
        std::vector<double> draw(g);
        for (auto& x : draw)
          x = gigaton_subsidies[rng.next_below(g)];
        replicate_q05.push_back(sorted_quantile(draw, 0.05));
      }
      stat["ci_lo"] = sorted_quantile(replicate_q05, 0.025);
      stat["ci_hi"] = sorted_quantile(replicate_q05, 0.975);
      stat["n_runs"] = static_cast<int>(g);
      summary["min_subsidy_for_gigaton"] = stat;
    }
  } else {
    std::vector<double> values;
    for (Eigen::Index i = 0; i < sample.outputs.rows(); ++i)
      if (sample.valid[static_cast<std::size_t>(i)])
        values.push_back(sample.outputs(i, 0));
    nlohmann::json stats;
    stats["median"] = sorted_quantile(values, 0.5);
    stats["q05"] = sorted_quantile(values, 0.05);
    stats["q95"] = sorted_quantile(values, 0.95);
    summary["npv"] = stats;
  }
  summary["dummy_threshold"] = report.dummy_threshold;
  write_text_file(config.out_dir / ("summary_" + qoi + ".json"),
                  summary.dump(2) + "\n");
}

void run_plotdata(const ExperimentConfig& config) {
  const doe::SampleMatrix samples = read_sample_files(config);
  const std::vector<RunRecord> records = read_runs_csv(runs_path(config));

  // Density data: one row per (run, year).
  std::string density = "run_id,year,removals_gt\n";
  const std::array<int, 3> years{2040, 2045, 2050};
  for (const auto& r : records) {
    if (!r.ok) continue;
    for (std::size_t k = 0; k < years.size(); ++k)
      density += std::to_string(r.run_id) + ',' + std::to_string(years[k]) +
                 ',' + fmt(r.emissions[k]) + '\n';
  }
  write_text_file(config.out_dir / "plot_density.csv", density);

  // Partial dependency scatter and rank-binned conditional means.
  std::string scatter = "input,run_id,value,e2050\n";
  std::string smooth = "input,bin_center,mean_e2050\n";
  constexpr int kBins = 50;
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const std::string& name = samples.column_names[static_cast<std::size_t>(j)];
    std::vector<std::pair<double, double>> points;  // (x, e2050)
    for (const auto& r : records) {
      if (!r.ok) continue;
      const double x = samples.values(r.run_id, j);
      points.emplace_back(x, r.emissions[2]);
      scatter += name + ',' + std::to_string(r.run_id) + ',' + fmt(x) + ',' +
                 fmt(r.emissions[2]) + '\n';
    }
    std::sort(points.begin(), points.end());
    if (points.front().first == points.back().first) continue;  // constant
    const auto per_bin = points.size() / kBins;
    if (per_bin == 0) continue;
    for (int b = 0; b < kBins; ++b) {
      const std::size_t begin = static_cast<std::size_t>(b) * per_bin;
      const std::size_t end =
          b == kBins - 1 ? points.size() : begin + per_bin;
      double x_acc = 0.0, y_acc = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        x_acc += points[k].first;
        y_acc += points[k].second;
      }
      const auto count = static_cast<double>(end - begin);
      smooth += name + ',' + fmt(x_acc / count) + ',' + fmt(y_acc / count) +
                '\n';
    }
  }
  write_text_file(config.out_dir / "plot_partial_scatter.csv", scatter);
  write_text_file(config.out_dir / "plot_partial_smooth.csv", smooth);

  // Separation curves (no bootstrap bands here; analyze emits those).
  gsa::IoSample sample;
  sample.inputs = samples;
  sample.outputs = qoi_outputs(records, "emissions");
  sample.valid.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    sample.valid[i] = records[i].ok ? 1 : 0;
  gsa::EstimateOptions options;
  options.partitions = config.partitions;
  options.solver = config.solver;
  const gsa::SensitivityReport report = gsa::estimate_all(sample, options);
  std::string separations = "input,center,gamma\n";
  for (const auto& entry : report.entries)
    for (const auto& point : entry.separations)
      separations += entry.name + ',' + fmt(point.center) + ',' +
                     fmt(point.gamma) + '\n';
  write_text_file(config.out_dir / "plot_separations.csv", separations);
}

}  // namespace otgsa::pipeline
