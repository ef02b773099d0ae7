#pragma once

// Top-performer classes within discipline x period cohorts.
//
// For a cohort of N units and a class of the top p percent, the cutoff rank
// is k = max(1, floor(p * N / 100)); the cutoff value is the measure of the
// k-th unit in descending order, and every unit at or above it belongs to
// the class. Ties at the cutoff are therefore always included.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toperf/grouping.hpp"
#include "toperf/types.hpp"

namespace toperf {

struct Panel;

struct CohortRank {
  std::size_t rank = 0;         // 1 + number of strictly larger values
  std::uint32_t membership = 0;  // bit t set when in the class of thresholds[t]
};

/// k = max(1, floor(threshold * n / 100)).
std::size_t class_cutoff_count(double threshold_percent, std::size_t n);

/// Ranks one cohort. The result is aligned with `values` and does not
/// depend on their order beyond the values themselves.
std::vector<CohortRank> classify_cohort(std::span<const double> values, std::span<const double> thresholds);

struct TopClassAssignment {
  std::size_t unit = 0;  // index into Panel::units
  Measure measure = Measure::P1;
  std::size_t rank = 0;
  std::size_t cohort_size = 0;
  std::uint32_t membership = 0;

  bool in_class(std::size_t threshold_index) const { return (membership >> threshold_index) & 1U; }
};

struct Classification {
  std::vector<double> thresholds;  // ascending
  std::vector<Measure> measures;
  std::size_t unit_count = 0;
  std::vector<TopClassAssignment> assignments;  // measure-major, then unit order

  bool has(Measure m) const;
  const TopClassAssignment& at(Measure m, std::size_t unit) const;
  std::size_t threshold_index(double threshold) const;
};

/// Classifies every (discipline, period) cohort for each measure.
Classification classify_panel(const Panel& panel, std::span<const Measure> measures,
                              std::span<const double> thresholds, unsigned threads = 1);

struct ClassCountRow {
  std::vector<std::string> key;
  Measure measure = Measure::P1;
  double threshold = 0;
  std::size_t count = 0;          // class members in the group
  std::size_t group_units = 0;    // all units in the group
  double percent_of_class = 0;    // count / class members over all groups (same grouping)
  double percent_of_group = 0;    // count / group_units
};

std::vector<ClassCountRow> class_counts(const Panel& panel, const Classification& classes,
                                        std::span<const Dimension> dims);

}  // namespace toperf
