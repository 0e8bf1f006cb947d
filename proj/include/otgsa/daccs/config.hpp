#pragma once

#include <json.hpp>
#include <map>
#include <string>

#include "otgsa/daccs/model.hpp"
#include "otgsa/dist/input_space.hpp"

namespace otgsa::dac {

WorldConfig world_from_json(const nlohmann::json& node);
nlohmann::json to_json(const WorldConfig& world);

// Build the per-run parameter bundle from one sampled input row. Column
// names must follow the bundled input-space naming scheme
// (initial_capex_ls, max_growth_rate, subsidy_peak, ...).
RunParams bind_run_params(const std::map<std::string, double>& values);

RunParams bind_run_params(const doe::SampleMatrix& samples, Eigen::Index row);

}  // namespace otgsa::dac
