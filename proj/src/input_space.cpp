#include "otgsa/dist/input_space.hpp"

#include <set>
#include <stdexcept>

#include "otgsa/rng.hpp"

namespace otgsa::dist {

std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::Technical: return "technical";
    case Dimension::Market: return "market";
    case Dimension::Political: return "political";
    case Dimension::Finance: return "finance";
  }
  return "technical";
}

std::string to_string(Technology t) {
  switch (t) {
    case Technology::LS: return "LS";
    case Technology::SS: return "SS";
    case Technology::CaO: return "CaO";
    case Technology::Global: return "Global";
  }
  return "Global";
}

Dimension dimension_from_string(const std::string& s) {
  if (s == "technical") return Dimension::Technical;
  if (s == "market") return Dimension::Market;
  if (s == "political") return Dimension::Political;
  if (s == "finance") return Dimension::Finance;
  throw std::invalid_argument("unknown uncertainty dimension: " + s);
}

Technology technology_from_string(const std::string& s) {
  if (s == "LS") return Technology::LS;
  if (s == "SS") return Technology::SS;
  if (s == "CaO") return Technology::CaO;
  if (s == "Global") return Technology::Global;
  throw std::invalid_argument("unknown technology tag: " + s);
}

const InputEntry& InputSpace::at(const std::string& name) const {
  for (const auto& entry : entries)
    if (entry.name == name) return entry;
  throw std::out_of_range("input space: no entry named " + name);
}

void InputSpace::validate() const {
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (!seen.insert(entry.name).second)
      throw std::invalid_argument("input space: duplicate name " + entry.name);
    dist::validate(entry.spec);
  }
}

nlohmann::json to_json(const InputSpace& space) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& entry : space.entries) {
    nlohmann::json node;
    node["name"] = entry.name;
    node["group"] = entry.group;
    node["dimension"] = to_string(entry.dimension);
    node["technology"] = to_string(entry.technology);
    node["distribution"] = to_json(entry.spec);
    list.push_back(std::move(node));
  }
  return list;
}

InputSpace input_space_from_json(const nlohmann::json& node) {
  InputSpace space;
  for (const auto& item : node) {
    InputEntry entry;
    entry.name = item.at("name").get<std::string>();
    entry.group = item.value("group", entry.name);
    entry.dimension =
        dimension_from_string(item.value("dimension", std::string{"technical"}));
    entry.technology =
        technology_from_string(item.value("technology", std::string{"Global"}));
    entry.spec = spec_from_json(item.at("distribution"));
    space.entries.push_back(std::move(entry));
  }
  space.validate();
  return space;
}

doe::SampleMatrix lhs_sample(const InputSpace& space, int n, int designs,
                             std::uint64_t seed) {
  space.validate();
  if (n < 1 || designs < 1 || n % designs != 0)
    throw std::invalid_argument("lhs_sample: n must be divisible by designs");
  const int block = n / designs;
  const auto p = static_cast<Eigen::Index>(space.size());

  doe::SampleMatrix sample;
  sample.values.resize(n, p);
  sample.quantiles.resize(n, p);
  sample.column_names.reserve(space.size());
  for (const auto& entry : space.entries)
    sample.column_names.push_back(entry.name);

  std::vector<int> strata(block);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto& entry = space.entries[static_cast<std::size_t>(j)];
    for (int d = 0; d < designs; ++d) {
      Philox rng = substream(seed, "lhs:" + entry.name,
                             static_cast<std::uint64_t>(d));
      for (int i = 0; i < block; ++i) strata[i] = i;
      for (int i = block - 1; i > 0; --i) {
        const auto k = static_cast<int>(
            rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(strata[i], strata[k]);
      }
      for (int i = 0; i < block; ++i) {
        const double u =
            (static_cast<double>(strata[i]) + rng.next_double()) /
            static_cast<double>(block);
        const int row = d * block + i;
        sample.quantiles(row, j) = u;
        sample.values(row, j) = quantile(entry.spec, u);
      }
    }
  }
  return sample;
}

}  // namespace otgsa::dist
