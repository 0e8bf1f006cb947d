#include "otgsa/gsa/report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace otgsa::gsa {

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

std::vector<RankedRow> rank_inputs(const SensitivityReport& report,
                                   const dist::InputSpace& space,
                                   bool group_by_technology) {
  std::vector<RankedRow> rows;
  std::vector<std::string> order;  // group labels in declaration order

  for (const auto& entry : report.entries) {
    const auto& meta = space.at(entry.name);
    const std::string label = group_by_technology ? meta.group : entry.name;
    auto it = std::find(order.begin(), order.end(), label);
    if (it == order.end()) {
      order.push_back(label);
      RankedRow row;
      row.label = label;
      row.technology = to_string(meta.technology);
      row.dimension = to_string(meta.dimension);
      row.index = entry.index;
      row.ci_lo = entry.ci_lo;
      row.ci_hi = entry.ci_hi;
      row.has_ci = entry.has_ci;
      row.irrelevant = entry.irrelevant;
      rows.push_back(std::move(row));
    } else if (group_by_technology) {
      RankedRow& row = rows[static_cast<std::size_t>(it - order.begin())];
      if (entry.index > row.index) {
        row.index = entry.index;
        row.technology = to_string(meta.technology);
        row.ci_lo = entry.ci_lo;
        row.ci_hi = entry.ci_hi;
        row.has_ci = entry.has_ci;
        row.irrelevant = entry.irrelevant;
      }
    } else {
      throw std::logic_error("rank_inputs: duplicate input name");
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RankedRow& a, const RankedRow& b) {
                     return a.index > b.index;
                   });
  return rows;
}

std::string report_to_csv(const SensitivityReport& report) {
  std::string csv =
      "input,index,mean_part,cov_part,residual_part,ci_lo,ci_hi,irrelevant,"
      "constant\n";
  for (const auto& entry : report.entries) {
    csv += entry.name + ',' + format_double(entry.index) + ',' +
           format_double(entry.mean_part) + ',' +
           format_double(entry.cov_part) + ',' +
           format_double(entry.residual_part) + ',';
    csv += entry.has_ci ? format_double(entry.ci_lo) : std::string{};
    csv += ',';
    csv += entry.has_ci ? format_double(entry.ci_hi) : std::string{};
    csv += ',';
    csv += entry.irrelevant ? '1' : '0';
    csv += ',';
    csv += entry.constant_input ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

nlohmann::json report_to_json(const SensitivityReport& report) {
  nlohmann::json node;
  node["schema_version"] = 1;
  node["partitions"] = report.partitions;
  node["solver"] = to_string(report.solver);
  node["dummy_threshold"] = report.dummy_threshold;
  node["dummy_spread"] = report.dummy_spread;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : report.entries) {
    nlohmann::json item;
    item["input"] = entry.name;
    item["index"] = entry.index;
    item["mean_part"] = entry.mean_part;
    item["cov_part"] = entry.cov_part;
    item["residual_part"] = entry.residual_part;
    if (entry.has_ci) {
      item["ci_lo"] = entry.ci_lo;
      item["ci_hi"] = entry.ci_hi;
    }
    item["irrelevant"] = entry.irrelevant;
    item["constant"] = entry.constant_input;
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& point : entry.separations) {
      nlohmann::json p;
      p["center"] = point.center;
      p["gamma"] = point.gamma;
      if (point.has_ci) {
        p["ci_lo"] = point.ci_lo;
        p["ci_hi"] = point.ci_hi;
      }
      curve.push_back(std::move(p));
    }
    item["separations"] = std::move(curve);
    entries.push_back(std::move(item));
  }
  node["inputs"] = std::move(entries);
  return node;
}

std::string ranking_to_csv(const std::vector<RankedRow>& rows) {
  std::string csv = "rank,label,technology,dimension,index,ci_lo,ci_hi,irrelevant\n";
  int rank = 1;
  for (const auto& row : rows) {
    csv += std::to_string(rank++) + ',' + row.label + ',' + row.technology +
           ',' + row.dimension + ',' + format_double(row.index) + ',';
    csv += row.has_ci ? format_double(row.ci_lo) : std::string{};
    csv += ',';
    csv += row.has_ci ? format_double(row.ci_hi) : std::string{};
    csv += ',';
    csv += row.irrelevant ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

}  // namespace otgsa::gsa
