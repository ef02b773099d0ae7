#pragma once

// Group-by keys over panel units, shared by the table-producing operations.
// Grouping on gender omits gender-U units; they still count in groupings
// that do not involve gender.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toperf {

struct Panel;
struct AuthorPeriodUnit;

enum class Dimension { Period, Discipline, Gender, Affiliation, AgeGroup };

std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view text);
/// "period,gender" -> dims. Throws ValidationError on unknown names.
std::vector<Dimension> parse_dimensions(std::string_view list);

/// Numeric key component; ordering of codes is the display order.
int group_code(const AuthorPeriodUnit& unit, Dimension d);
std::string group_label(const Panel& panel, Dimension d, int code);

/// Key of `unit` under `dims`, or nullopt when the unit is excluded from
/// this grouping (gender U under a gender split).
std::optional<std::vector<int>> group_key(const AuthorPeriodUnit& unit, std::span<const Dimension> dims);
std::vector<std::string> group_labels(const Panel& panel, std::span<const Dimension> dims, const std::vector<int>& key);

}  // namespace toperf
