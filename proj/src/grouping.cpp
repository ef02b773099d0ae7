#include "toperf/grouping.hpp"

#include "toperf/config.hpp"
#include "toperf/error.hpp"
#include "toperf/panel.hpp"

namespace toperf {

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Period: return "period";
    case Dimension::Discipline: return "discipline";
    case Dimension::Gender: return "gender";
    case Dimension::Affiliation: return "affiliation";
    case Dimension::AgeGroup: return "age_group";
  }
  return "period";
}

std::optional<Dimension> parse_dimension(std::string_view text) {
  for (Dimension d : {Dimension::Period, Dimension::Discipline, Dimension::Gender, Dimension::Affiliation,
                      Dimension::AgeGroup}) {
    if (to_string(d) == text) return d;
  }
  if (text == "institution") return Dimension::Affiliation;
  if (text == "age") return Dimension::AgeGroup;
  return std::nullopt;
}

std::vector<Dimension> parse_dimensions(std::string_view list) {
  std::vector<Dimension> out;
  for (const auto& item : split_list(list)) {
    auto d = parse_dimension(item);
    if (!d) throw ValidationError("unknown group-by dimension '" + item + "'");
    out.push_back(*d);
  }
  return out;
}

int group_code(const AuthorPeriodUnit& unit, Dimension d) {
  switch (d) {
    case Dimension::Period: return static_cast<int>(unit.period_index);
    case Dimension::Discipline: return static_cast<int>(unit.discipline);
    case Dimension::Gender: return static_cast<int>(unit.gender);
    case Dimension::Affiliation: return unit.research_intensive ? 0 : 1;
    case Dimension::AgeGroup: return static_cast<int>(unit.age_group);
  }
  return 0;
}

std::string group_label(const Panel& panel, Dimension d, int code) {
  switch (d) {
    case Dimension::Period: return panel.periods.at(static_cast<std::size_t>(code)).label();
    case Dimension::Discipline: return panel.discipline_labels.at(static_cast<std::size_t>(code));
    case Dimension::Gender: return std::string(to_string(static_cast<Gender>(code)));
    case Dimension::Affiliation: return code == 0 ? "research_intensive" : "rest";
    case Dimension::AgeGroup: return std::string(to_string(static_cast<AgeGroup>(code)));
  }
  return {};
}

std::optional<std::vector<int>> group_key(const AuthorPeriodUnit& unit, std::span<const Dimension> dims) {
  std::vector<int> key;
  key.reserve(dims.size());
  for (Dimension d : dims) {
    if (d == Dimension::Gender && unit.gender == Gender::Unknown) return std::nullopt;
    key.push_back(group_code(unit, d));
  }
  return key;
}

std::vector<std::string> group_labels(const Panel& panel, std::span<const Dimension> dims, const std::vector<int>& key) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dims.size(); ++i) out.push_back(group_label(panel, dims[i], key[i]));
  return out;
}

}  // namespace toperf
