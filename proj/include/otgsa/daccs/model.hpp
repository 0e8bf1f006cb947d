#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace otgsa::dac {

inline constexpr int kStartYear = 2025;
inline constexpr int kEndYear = 2100;
inline constexpr int kGridStep = 5;
inline constexpr int kSubsidyHorizon = 2050;

// One capture technology with its drawn parameters. Capacities are in
// GtCO2/yr nameplate; capex in USD per (tCO2/yr), opex in USD per tCO2.
struct Technology {
  std::string id;
  double capex0 = 0.0;
  double opex0 = 0.0;
  double learn_capex = 0.0;
  double learn_opex = 0.0;
  double learn_fin = 0.0;
  double thermal = 0.0;   // GJ per tCO2
  double electric = 0.0;  // GJ per tCO2
  double capacity_factor = 1.0;
  int lifetime = 20;  // years
  double wacc0 = 0.07;
  double cost_floor = 0.0;  // lower bound on learned capex
  bool uses_gas = false;    // thermal demand met by gas instead of power

  void validate() const;
};

struct Region {
  std::string id;
  double saturation_share = 0.0;  // fraction of the global ceiling
  bool subsidizes = true;
  double gdp0 = 0.0;        // USD in the start year
  double gdp_growth = 0.0;  // per year
  double interest_rate = 0.03;
  double wacc_ratio = 1.0;  // regional multiplier on the drawn cost of capital
};

// Linear ramp to the peak, exponential phase-out after it.
struct SubsidySchedule {
  double peak = 0.0;       // USD per tCO2
  int timing = kStartYear; // peak year, on the 5-year grid
  double phase_out = 1.0;  // 1/yr decay after the peak
  double max_frac = 1.0;   // cap on outlays as a fraction of regional GDP

  void validate() const;
};

struct Scenario {
  std::string id;  // "ndc" or "lts"
  std::vector<int> grid;             // reporting years, 2025..2100 step 5
  std::vector<double> carbon_price;  // USD per tCO2 at grid years
  std::map<std::string, std::vector<double>> regional_price_overrides;
  double storage_cost = 0.0;  // USD per tCO2, constant

  // Linear interpolation between grid years, flat extrapolation outside.
  double price_at(int year, const std::string& region) const;
  void validate() const;
};

// Fixed (non-sampled) world data shared by every run.
struct WorldConfig {
  std::vector<Region> regions;
  std::map<std::string, Scenario> scenarios;
  double gas_price = 8.0;          // USD per GJ
  double electricity_price = 20.0; // USD per GJ
  double nameplate = 1e-3;         // GtCO2/yr counted as one experience unit
  double stimulus_share = 0.5;     // share of spending that nets out of GDP

  const Scenario& scenario(const std::string& id) const;
  void validate() const;
};

// Per-run sampled parameters.
struct RunParams {
  std::array<Technology, 3> technologies;
  double growth_rate = 0.1;         // per year
  double initial_capacity = 1e-3;   // GtCO2/yr seed
  double saturation_global = 26.62; // GtCO2/yr ceiling summed over regions
  SubsidySchedule subsidy;
};

// Grid-year snapshots of one simulated trajectory.
struct DacWorld {
  std::vector<int> grid;
  std::vector<std::string> region_ids;
  std::vector<std::string> tech_ids;
  std::vector<char> region_subsidizes;
  // Indexed [grid][region][tech], flattened.
  std::vector<double> capacity;    // GtCO2/yr
  std::vector<double> investment;  // USD spent in the snapshot year
  // Indexed [grid][region].
  std::vector<double> removal_rate;      // GtCO2/yr (capacity-factor weighted)
  std::vector<double> subsidized_removal_rate;  // same, subsidizing regions only
  std::vector<double> gdp_metric;        // USD
  std::vector<double> consumption_metric;  // USD

  std::size_t n_regions() const { return region_ids.size(); }
  std::size_t n_techs() const { return tech_ids.size(); }
  double& cap(std::size_t g, std::size_t n, std::size_t d) {
    return capacity[(g * n_regions() + n) * n_techs() + d];
  }
  double cap(std::size_t g, std::size_t n, std::size_t d) const {
    return capacity[(g * n_regions() + n) * n_techs() + d];
  }
  std::size_t grid_index(int year) const;
};

// Annuity-factor ratio between the interest rate and the cost of capital,
// summed over the asset lifetime (LT terms).
double adjusted_wacc(double interest_rate, double wacc, int lifetime);

// Per-period cap on capacity additions: k K (1 - K/L), clamped at zero,
// plus the seed term enabling entry at K = 0.
double growth_bound(double k_now, double growth_rate, double saturation,
                    double seed_capacity);

// Experience-curve unit cost: base * units^(-exponent), floored.
double learned_cost(double base_cost, double cumulative_units, double exponent,
                    double floor_cost = 0.0);

// Subsidy level at year t: linear ramp to the peak, exponential decay after.
double subsidy_at(const SubsidySchedule& schedule, int year);

// Capital recovery factor for annualizing capex.
double capital_recovery_factor(double rate, int lifetime);

// Discount factor of one 5-year reporting block starting at `year`.
double block_discount_factor(int year, double rho, int base_year = kStartYear);

// Forward simulator: annual steps with myopic profitability investment,
// snapshots recorded at the reporting grid.
class Simulator {
 public:
  Simulator(const WorldConfig& world, const Scenario& scenario,
            const RunParams& params);

  // Advance one year (state year -> year + 1). Exposed for stepwise tests.
  void step();
  int current_year() const { return year_; }

  // Run from the start year through the end of the grid and return the
  // recorded trajectory.
  DacWorld run();

  // State accessors (region, tech indices follow the config order).
  double capacity_state(std::size_t region, std::size_t tech) const;
  double capex_state(std::size_t region, std::size_t tech) const;

 private:
  struct Cell {  // per (region, technology)
    double capacity = 0.0;
    double experience = 1.0;  // cumulative units, seeded at 1
    double capex = 0.0;
    double opex = 0.0;
    double wacc = 0.0;
  };

  void record_snapshot(DacWorld& world, std::size_t g, int year) const;
  double region_gdp(std::size_t n, int year) const;

  const WorldConfig& world_;
  const Scenario& scenario_;
  RunParams params_;
  std::vector<Cell> cells_;              // [region][tech] flattened
  std::vector<double> last_investment_;  // USD spent in the latest step
  int year_ = kStartYear;
};

// Quantities of interest over a recorded trajectory.

// Net removal rates at 2040, 2045, 2050 in GtCO2/yr.
std::array<double, 3> qoi_emissions(const DacWorld& world);

enum class GainMetric { GDP, Consumption };

struct PolicyGains {
  std::vector<int> years;       // 2025..2050 grid years
  std::vector<double> per_year; // USD
  double npv = 0.0;             // USD, block-discounted
};

// Gains of `world` over `baseline` (same scenario, zero-subsidy twin).
PolicyGains qoi_policy_gains(const DacWorld& world, const DacWorld& baseline,
                             GainMetric metric, double rho);

// Block-discounted subsidy outlays 2025-2050 over subsidizing regions.
double qoi_total_subsidies(const DacWorld& world,
                           const SubsidySchedule& schedule, double rho);

}  // namespace otgsa::dac
