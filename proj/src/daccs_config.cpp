#include "otgsa/daccs/config.hpp"

#include <cmath>
#include <stdexcept>

namespace otgsa::dac {

namespace {

double lookup(const std::map<std::string, double>& values,
              const std::string& name) {
  const auto it = values.find(name);
  if (it == values.end())
    throw std::invalid_argument("run binding: missing input " + name);
  return it->second;
}

Technology bind_technology(const std::map<std::string, double>& values,
                           const std::string& id, const std::string& suffix,
                           bool uses_gas) {
  Technology tech;
  tech.id = id;
  tech.capex0 = lookup(values, "initial_capex_" + suffix);
  tech.opex0 = lookup(values, "initial_opex_" + suffix);
  tech.learn_capex = lookup(values, "learning_capex_" + suffix);
  tech.learn_opex = lookup(values, "learning_opex_" + suffix);
  tech.learn_fin = lookup(values, "learning_finance");
  tech.thermal = lookup(values, "thermal_" + suffix);
  tech.electric = lookup(values, "electric_" + suffix);
  tech.capacity_factor = lookup(values, "capacity_factor_" + suffix);
  tech.lifetime =
      static_cast<int>(std::lround(lookup(values, "lifetime_" + suffix)));
  tech.wacc0 = lookup(values, "cost_of_capital_" + suffix);
  tech.cost_floor = lookup(values, "min_cost");
  tech.uses_gas = uses_gas;
  return tech;
}

}  // namespace

WorldConfig world_from_json(const nlohmann::json& node) {
  WorldConfig world;
  world.gas_price = node.value("gas_price", world.gas_price);
  world.electricity_price =
      node.value("electricity_price", world.electricity_price);
  world.nameplate = node.value("nameplate_gt", world.nameplate);
  world.stimulus_share = node.value("stimulus_share", world.stimulus_share);

  double weight_sum = 0.0;
  for (const auto& item : node.at("regions")) {
    Region region;
    region.id = item.at("id").get<std::string>();
    region.saturation_share = item.at("saturation_weight").get<double>();
    region.subsidizes = item.at("subsidizes").get<bool>();
    region.gdp0 = item.at("gdp_2025_busd").get<double>() * 1e9;
    region.gdp_growth = item.value("gdp_growth", 0.025);
    region.interest_rate = item.value("interest_rate", 0.03);
    region.wacc_ratio = item.value("wacc_ratio", 1.0);
    weight_sum += region.saturation_share;
    world.regions.push_back(std::move(region));
  }
  if (!(weight_sum > 0.0))
    throw std::invalid_argument("world: saturation weights sum to zero");
  for (auto& region : world.regions) region.saturation_share /= weight_sum;

  for (const auto& [id, item] : node.at("scenarios").items()) {
    Scenario scenario;
    scenario.id = id;
    scenario.grid = item.at("grid").get<std::vector<int>>();
    scenario.carbon_price = item.at("carbon_price").get<std::vector<double>>();
    scenario.storage_cost = item.at("storage_cost").get<double>();
    if (item.contains("regional_price_overrides"))
      for (const auto& [region, path] :
           item.at("regional_price_overrides").items())
        scenario.regional_price_overrides[region] =
            path.get<std::vector<double>>();
    world.scenarios.emplace(id, std::move(scenario));
  }
  world.validate();
  return world;
}

nlohmann::json to_json(const WorldConfig& world) {
  nlohmann::json node;
  node["gas_price"] = world.gas_price;
  node["electricity_price"] = world.electricity_price;
  node["nameplate_gt"] = world.nameplate;
  node["stimulus_share"] = world.stimulus_share;
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& region : world.regions) {
    nlohmann::json item;
    item["id"] = region.id;
    item["saturation_weight"] = region.saturation_share;
    item["subsidizes"] = region.subsidizes;
    item["gdp_2025_busd"] = region.gdp0 / 1e9;
    item["gdp_growth"] = region.gdp_growth;
    item["interest_rate"] = region.interest_rate;
    item["wacc_ratio"] = region.wacc_ratio;
    regions.push_back(std::move(item));
  }
  node["regions"] = regions;
  nlohmann::json scenarios;
  for (const auto& [id, scenario] : world.scenarios) {
    nlohmann::json item;
    item["grid"] = scenario.grid;
    item["carbon_price"] = scenario.carbon_price;
    item["storage_cost"] = scenario.storage_cost;
    if (!scenario.regional_price_overrides.empty()) {
      nlohmann::json overrides;
      for (const auto& [region, path] : scenario.regional_price_overrides)
        overrides[region] = path;
      item["regional_price_overrides"] = overrides;
    }
    scenarios[id] = std::move(item);
  }
  node["scenarios"] = scenarios;
  return node;
}

RunParams bind_run_params(const std::map<std::string, double>& values) {
  RunParams params;
  params.technologies[0] = bind_technology(values, "LS", "ls", true);
  params.technologies[1] = bind_technology(values, "SS", "ss", false);
  params.technologies[2] = bind_technology(values, "CaO", "cao", false);
  params.growth_rate = lookup(values, "max_growth_rate");
  params.initial_capacity = lookup(values, "initial_capacity") * 1e-3;  // Mt -> Gt
  params.saturation_global = lookup(values, "max_capacity");
  params.subsidy.peak = lookup(values, "subsidy_peak");
  params.subsidy.timing =
      static_cast<int>(std::lround(lookup(values, "subsidy_timing")));
  params.subsidy.phase_out = lookup(values, "subsidy_phaseout");
  params.subsidy.max_frac = lookup(values, "subsidy_max_frac");
  return params;
}

RunParams bind_run_params(const doe::SampleMatrix& samples, Eigen::Index row) {
  std::map<std::string, double> values;
  for (Eigen::Index j = 0; j < samples.cols(); ++j)
    values[samples.column_names[static_cast<std::size_t>(j)]] =
        samples.values(row, j);
  return bind_run_params(values);
}

}  // namespace otgsa::dac
