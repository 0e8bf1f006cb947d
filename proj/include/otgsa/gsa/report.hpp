#pragma once

#include <json.hpp>

#include "otgsa/dist/input_space.hpp"
#include "otgsa/gsa/estimate.hpp"

namespace otgsa::gsa {

struct RankedRow {
  std::string label;       // group name when grouping, input name otherwise
  std::string technology;  // arg-max technology for grouped rows
  std::string dimension;
  double index = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  bool has_ci = false;
  bool irrelevant = false;
};

// Descending by index; stable in declaration order on ties. With grouping,
// inputs sharing a group report the maximum index across technologies.
std::vector<RankedRow> rank_inputs(const SensitivityReport& report,
                                   const dist::InputSpace& space,
                                   bool group_by_technology);

// One row per input: index, decomposition, CI, irrelevance flag.
std::string report_to_csv(const SensitivityReport& report);

// CSV plus separation curves and estimation metadata.
nlohmann::json report_to_json(const SensitivityReport& report);

std::string ranking_to_csv(const std::vector<RankedRow>& rows);

}  // namespace otgsa::gsa
