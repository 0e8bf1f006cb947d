#include "otgsa/daccs/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otgsa::dac {

namespace {
constexpr double kTonsPerGt = 1e9;
constexpr double kBoundSlack = 1e-9;
}  // namespace

void Technology::validate() const {
  if (!(capacity_factor > 0.0 && capacity_factor <= 1.0))
    throw std::invalid_argument(id + ": capacity factor outside (0,1]");
  if (lifetime < 1) throw std::invalid_argument(id + ": lifetime below 1");
  if (!(capex0 > 0.0) || !(opex0 > 0.0))
    throw std::invalid_argument(id + ": capex0 and opex0 must be positive");
  if (thermal < 0.0 || electric < 0.0)
    throw std::invalid_argument(id + ": energy intensities must be >= 0");
  if (cost_floor < 0.0)
    throw std::invalid_argument(id + ": cost floor must be >= 0");
}

void SubsidySchedule::validate() const {
  if (peak < 0.0) throw std::invalid_argument("subsidy: peak must be >= 0");
  if (!(phase_out > 0.0))
    throw std::invalid_argument("subsidy: phase-out rate must be positive");
  if (!(max_frac > 0.0 && max_frac <= 1.0))
    throw std::invalid_argument("subsidy: max_frac outside (0,1]");
  if (timing < kStartYear || timing > kSubsidyHorizon ||
      (timing - kStartYear) % kGridStep != 0)
    throw std::invalid_argument("subsidy: timing off the 5-year grid");
}

double Scenario::price_at(int year, const std::string& region) const {
  const std::vector<double>* path = &carbon_price;
  if (const auto it = regional_price_overrides.find(region);
      it != regional_price_overrides.end())
    path = &it->second;
  if (grid.empty() || path->size() != grid.size())
    throw std::logic_error("scenario: price path does not match grid");
  if (year <= grid.front()) return path->front();
  if (year >= grid.back()) return path->back();
  const auto upper = std::upper_bound(grid.begin(), grid.end(), year);
  const auto hi = static_cast<std::size_t>(upper - grid.begin());
  const auto lo = hi - 1;
  const double w = static_cast<double>(year - grid[lo]) /
                   static_cast<double>(grid[hi] - grid[lo]);
  return (1.0 - w) * (*path)[lo] + w * (*path)[hi];
}

void Scenario::validate() const {
  if (grid.empty()) throw std::invalid_argument("scenario: empty grid");
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (grid[g] != kStartYear + static_cast<int>(g) * kGridStep)
      throw std::invalid_argument("scenario: grid must be 2025.. step 5");
  if (carbon_price.size() != grid.size())
    throw std::invalid_argument("scenario: carbon price path length mismatch");
  for (const double price : carbon_price)
    if (price < 0.0)
      throw std::invalid_argument("scenario: negative carbon price");
  if (storage_cost < 0.0)
    throw std::invalid_argument("scenario: negative storage cost");
}

const Scenario& WorldConfig::scenario(const std::string& id) const {
  const auto it = scenarios.find(id);
  if (it == scenarios.end())
    throw std::invalid_argument("unknown scenario: " + id);
  return it->second;
}

void WorldConfig::validate() const {
  if (regions.empty()) throw std::invalid_argument("world: no regions");
  double share_sum = 0.0;
  for (const auto& region : regions) {
    if (region.saturation_share < 0.0)
      throw std::invalid_argument("world: negative saturation share");
    if (region.gdp0 <= 0.0)
      throw std::invalid_argument("world: GDP must be positive");
    share_sum += region.saturation_share;
  }
  if (std::abs(share_sum - 1.0) > 1e-9)
    throw std::invalid_argument("world: saturation shares must sum to 1");
  for (const auto& [id, scenario] : scenarios) {
    if (id != scenario.id)
      throw std::invalid_argument("world: scenario key/id mismatch");
    scenario.validate();
  }
  if (gas_price < 0.0 || electricity_price < 0.0)
    throw std::invalid_argument("world: negative energy price");
  if (!(nameplate > 0.0))
    throw std::invalid_argument("world: nameplate must be positive");
  if (stimulus_share < 0.0 || stimulus_share > 1.0)
    throw std::invalid_argument("world: stimulus share outside [0,1]");
}

double adjusted_wacc(double interest_rate, double wacc, int lifetime) {
  if (lifetime < 1)
    throw std::invalid_argument("adjusted_wacc: lifetime below 1");
  if (interest_rate <= -1.0 || wacc <= -1.0)
    throw std::invalid_argument("adjusted_wacc: negative discount base");
  double num = 0.0, den = 0.0;
  double df_ir = 1.0, df_w = 1.0;
  for (int tau = 0; tau < lifetime; ++tau) {
    num += df_ir;
    den += df_w;
    df_ir /= 1.0 + interest_rate;
    df_w /= 1.0 + wacc;
  }
  return num / den;
}

double growth_bound(double k_now, double growth_rate, double saturation,
                    double seed_capacity) {
  if (!(saturation > 0.0))
    throw std::invalid_argument("growth_bound: saturation must be positive");
  if (k_now < 0.0)
    throw std::invalid_argument("growth_bound: negative capacity");
  const double logistic = growth_rate * k_now * (1.0 - k_now / saturation);
  return std::max(logistic, 0.0) + seed_capacity;
}

double learned_cost(double base_cost, double cumulative_units, double exponent,
                    double floor_cost) {
  if (!(cumulative_units >= 1.0))
    throw std::invalid_argument("learned_cost: experience must be >= 1 unit");
  return std::max(base_cost * std::pow(cumulative_units, -exponent),
                  floor_cost);
}

double subsidy_at(const SubsidySchedule& schedule, int year) {
  if (year < kStartYear)
    throw std::invalid_argument("subsidy_at: year before schedule start");
  if (year <= schedule.timing) {
    if (schedule.timing == kStartYear) return schedule.peak;  // degenerate ramp
    return schedule.peak * static_cast<double>(year - kStartYear) /
           static_cast<double>(schedule.timing - kStartYear);
  }
  return schedule.peak *
         std::exp(-schedule.phase_out *
                  static_cast<double>(year - schedule.timing));
}

double capital_recovery_factor(double rate, int lifetime) {
  if (lifetime < 1)
    throw std::invalid_argument("capital_recovery_factor: lifetime below 1");
  if (rate == 0.0) return 1.0 / static_cast<double>(lifetime);
  return rate / (1.0 - std::pow(1.0 + rate, -lifetime));
}

double block_discount_factor(int year, double rho, int base_year) {
  double acc = 0.0;
  for (int tau = year; tau <= year + 4; ++tau)
    acc += std::pow(1.0 + rho, -(tau - base_year));
  return acc;
}

std::size_t DacWorld::grid_index(int year) const {
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (grid[g] == year) return g;
  throw std::out_of_range("trajectory: year off the reporting grid");
}

Simulator::Simulator(const WorldConfig& world, const Scenario& scenario,
                     const RunParams& params)
    : world_(world), scenario_(scenario), params_(params) {
  world_.validate();
  scenario_.validate();
  params_.subsidy.validate();
  if (!(params_.growth_rate > 0.0) || !(params_.initial_capacity >= 0.0) ||
      !(params_.saturation_global > 0.0))
    throw std::invalid_argument("run params: growth/seed/saturation invalid");
  cells_.resize(world_.regions.size() * params_.technologies.size());
  last_investment_.assign(cells_.size(), 0.0);
  for (std::size_t n = 0; n < world_.regions.size(); ++n) {
    for (std::size_t d = 0; d < params_.technologies.size(); ++d) {
      const auto& tech = params_.technologies[d];
      tech.validate();
      Cell& cell = cells_[n * params_.technologies.size() + d];
      cell.capex = tech.capex0;
      cell.opex = tech.opex0;
      cell.wacc = tech.wacc0 * world_.regions[n].wacc_ratio;
    }
  }
}

double Simulator::region_gdp(std::size_t n, int year) const {
  const auto& region = world_.regions[n];
  return region.gdp0 *
         std::pow(1.0 + region.gdp_growth, year - kStartYear);
}

double Simulator::capacity_state(std::size_t region, std::size_t tech) const {
  return cells_[region * params_.technologies.size() + tech].capacity;
}

double Simulator::capex_state(std::size_t region, std::size_t tech) const {
  return cells_[region * params_.technologies.size() + tech].capex;
}

void Simulator::step() {
  const int year = year_;
  const std::size_t n_tech = params_.technologies.size();
  const double subsidy_now = subsidy_at(params_.subsidy, year);
  const double subsidy_next = subsidy_at(params_.subsidy, year + 1);
  std::fill(last_investment_.begin(), last_investment_.end(), 0.0);

  for (std::size_t n = 0; n < world_.regions.size(); ++n) {
    const auto& region = world_.regions[n];
    const double carbon_price = scenario_.price_at(year, region.id);
    const double revenue =
        carbon_price + (region.subsidizes ? subsidy_now : 0.0);
    const double saturation =
        params_.saturation_global * region.saturation_share;
    if (saturation <= 0.0) continue;

    std::array<double, 3> additions{};  // gross additions, GtCO2/yr
    std::array<double, 3> wacc_adj{};
    std::array<double, 3> survived{};   // depreciated prior capacity

    for (std::size_t d = 0; d < n_tech; ++d) {
      const auto& tech = params_.technologies[d];
      Cell& cell = cells_[n * n_tech + d];
      wacc_adj[d] = adjusted_wacc(region.interest_rate, cell.wacc,
                                  tech.lifetime);
      const double energy_price_thermal =
          tech.uses_gas ? world_.gas_price : world_.electricity_price;
      const double energy_cost = (tech.thermal * energy_price_thermal +
                                  tech.electric * world_.electricity_price) /
                                 tech.capacity_factor;
      const double levelized_cost =
          cell.capex * wacc_adj[d] *
              capital_recovery_factor(region.interest_rate, tech.lifetime) +
          cell.opex + energy_cost + scenario_.storage_cost;

      const double bound =
          growth_bound(cell.capacity, params_.growth_rate, saturation,
                       params_.initial_capacity);
      additions[d] = revenue >= levelized_cost ? bound : 0.0;
      survived[d] =
          (1.0 - 1.0 / static_cast<double>(tech.lifetime)) * cell.capacity;
    }

    // Cap next year's subsidy outlay at a GDP fraction by scaling the
    // subsidized additions pro rata. Pre-existing capacity is not retired,
    // so the cap can stay exceeded when additions are already zero.
    if (region.subsidizes && subsidy_next > 0.0) {
      const double cap = params_.subsidy.max_frac * region_gdp(n, year + 1);
      double base_outlay = 0.0, addition_outlay = 0.0;
      for (std::size_t d = 0; d < n_tech; ++d) {
        const double factor = params_.technologies[d].capacity_factor *
                              subsidy_next * kTonsPerGt;
        base_outlay += factor * survived[d];
        addition_outlay += factor * additions[d];
      }
      if (base_outlay + addition_outlay > cap && addition_outlay > 0.0) {
        const double scale =
            std::clamp((cap - base_outlay) / addition_outlay, 0.0, 1.0);
        for (auto& a : additions) a *= scale;
      }
    }

    for (std::size_t d = 0; d < n_tech; ++d) {
      const auto& tech = params_.technologies[d];
      Cell& cell = cells_[n * n_tech + d];
      const double bound =
          growth_bound(cell.capacity, params_.growth_rate, saturation,
                       params_.initial_capacity);
      const double next_capacity = survived[d] + additions[d];
      if (next_capacity - cell.capacity > bound + kBoundSlack)
        throw std::logic_error("simulator: growth bound violated");
      if (next_capacity < 0.0)
        throw std::logic_error("simulator: negative capacity");

      last_investment_[n * n_tech + d] =
          additions[d] * kTonsPerGt * cell.capex * wacc_adj[d];
      cell.capacity = next_capacity;
      // Experience counts investment deflated by unit capex.
      cell.experience += additions[d] * wacc_adj[d] / world_.nameplate;
      cell.capex = learned_cost(tech.capex0, cell.experience, tech.learn_capex,
                                tech.cost_floor);
      cell.opex = learned_cost(tech.opex0, cell.experience, tech.learn_opex);
      cell.wacc = learned_cost(tech.wacc0 * region.wacc_ratio, cell.experience,
                               tech.learn_fin);
    }
  }
  ++year_;
}

void Simulator::record_snapshot(DacWorld& world, std::size_t g,
                                int year) const {
  const std::size_t n_tech = params_.technologies.size();
  for (std::size_t n = 0; n < world_.regions.size(); ++n) {
    const auto& region = world_.regions[n];
    double removal = 0.0, spend = 0.0;
    for (std::size_t d = 0; d < n_tech; ++d) {
      const auto& tech = params_.technologies[d];
      const Cell& cell = cells_[n * n_tech + d];
      world.cap(g, n, d) = cell.capacity;
      world.investment[(g * world.n_regions() + n) * n_tech + d] =
          last_investment_[n * n_tech + d];

      const double removed = tech.capacity_factor * cell.capacity;  // Gt/yr
      removal += removed;
      const double energy_price_thermal =
          tech.uses_gas ? world_.gas_price : world_.electricity_price;
      const double operating_cost_per_ton =
          cell.opex +
          (tech.thermal * energy_price_thermal +
           tech.electric * world_.electricity_price) /
              tech.capacity_factor +
          scenario_.storage_cost;
      spend += removed * kTonsPerGt * operating_cost_per_ton +
               last_investment_[n * n_tech + d];
    }
    const double carbon_price = scenario_.price_at(year, region.id);
    const double removal_value = carbon_price * removal * kTonsPerGt;
    const double gdp_path = region_gdp(n, year);
    const std::size_t idx = g * world.n_regions() + n;
    world.removal_rate[idx] = removal;
    world.subsidized_removal_rate[idx] = region.subsidizes ? removal : 0.0;
    // Spending is partly a stimulus: only (1 - stimulus_share) of it crowds
    // output out, while consumption bears the full resource cost.
    world.gdp_metric[idx] =
        gdp_path + removal_value - (1.0 - world_.stimulus_share) * spend;
    world.consumption_metric[idx] = gdp_path + removal_value - spend;
  }
}

DacWorld Simulator::run() {
  const auto& grid = scenario_.grid;
  const std::size_t n_regions = world_.regions.size();
  const std::size_t n_tech = params_.technologies.size();

  DacWorld world;
  world.grid = grid;
  for (const auto& region : world_.regions) {
    world.region_ids.push_back(region.id);
    world.region_subsidizes.push_back(region.subsidizes ? 1 : 0);
  }
  for (const auto& tech : params_.technologies)
    world.tech_ids.push_back(tech.id);
  world.capacity.assign(grid.size() * n_regions * n_tech, 0.0);
  world.investment.assign(grid.size() * n_regions * n_tech, 0.0);
  world.removal_rate.assign(grid.size() * n_regions, 0.0);
  world.subsidized_removal_rate.assign(grid.size() * n_regions, 0.0);
  world.gdp_metric.assign(grid.size() * n_regions, 0.0);
  world.consumption_metric.assign(grid.size() * n_regions, 0.0);

  std::size_t g = 0;
  for (int year = kStartYear; year <= grid.back(); ++year) {
    if (g < grid.size() && grid[g] == year) {
      record_snapshot(world, g, year);
      ++g;
    }
    if (year == grid.back()) break;
    step();
  }
  return world;
}

std::array<double, 3> qoi_emissions(const DacWorld& world) {
  std::array<double, 3> emissions{};
  const std::array<int, 3> years{2040, 2045, 2050};
  for (std::size_t k = 0; k < years.size(); ++k) {
    const std::size_t g = world.grid_index(years[k]);
    double total = 0.0;
    for (std::size_t n = 0; n < world.n_regions(); ++n)
      total += world.removal_rate[g * world.n_regions() + n];
    emissions[k] = total;
  }
  return emissions;
}

PolicyGains qoi_policy_gains(const DacWorld& world, const DacWorld& baseline,
                             GainMetric metric, double rho) {
  if (world.grid != baseline.grid || world.region_ids != baseline.region_ids)
    throw std::invalid_argument("policy gains: trajectories not comparable");
  PolicyGains gains;
  for (int year = kStartYear; year <= kSubsidyHorizon; year += kGridStep) {
    const std::size_t g = world.grid_index(year);
    double total = 0.0;
    for (std::size_t n = 0; n < world.n_regions(); ++n) {
      const std::size_t idx = g * world.n_regions() + n;
      const double q = metric == GainMetric::GDP
                           ? world.gdp_metric[idx]
                           : world.consumption_metric[idx];
      const double q_base = metric == GainMetric::GDP
                                ? baseline.gdp_metric[idx]
                                : baseline.consumption_metric[idx];
      total += q - q_base;
    }
    gains.years.push_back(year);
    gains.per_year.push_back(total);
    gains.npv += total * block_discount_factor(year, rho);
  }
  return gains;
}

double qoi_total_subsidies(const DacWorld& world,
                           const SubsidySchedule& schedule, double rho) {
  double total = 0.0;
  for (int year = kStartYear; year <= kSubsidyHorizon; year += kGridStep) {
    const std::size_t g = world.grid_index(year);
    double removal = 0.0;
    for (std::size_t n = 0; n < world.n_regions(); ++n)
      removal += world.subsidized_removal_rate[g * world.n_regions() + n];
    total += removal * kTonsPerGt * subsidy_at(schedule, year) *
             block_discount_factor(year, rho);
  }
  return total;
}

}  // namespace otgsa::dac
