#include "toperf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "toperf/csv.hpp"
#include "toperf/error.hpp"
#include "toperf/panel.hpp"
#include "toperf/parallel.hpp"

namespace toperf {

std::size_t class_cutoff_count(double threshold_percent, std::size_t n) {
  // The epsilon absorbs representation error in non-integral thresholds.
  const double raw = std::floor(threshold_percent * static_cast<double>(n) / 100.0 + 1e-9);
  const auto k = static_cast<std::size_t>(std::max(0.0, raw));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

std::vector<CohortRank> classify_cohort(std::span<const double> values, std::span<const double> thresholds) {
  const std::size_t n = values.size();
  std::vector<CohortRank> out(n);
  if (n == 0) return out;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  std::vector<double> cutoff(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) cutoff[t] = sorted[class_cutoff_count(thresholds[t], n) - 1];

  for (std::size_t i = 0; i < n; ++i) {
    // First position holding values[i] in descending order.
    auto first = std::lower_bound(sorted.begin(), sorted.end(), values[i], std::greater<>());
    out[i].rank = static_cast<std::size_t>(first - sorted.begin()) + 1;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (values[i] >= cutoff[t]) out[i].membership |= (1U << t);
    }
  }
  return out;
}

bool Classification::has(Measure m) const { return std::find(measures.begin(), measures.end(), m) != measures.end(); }

const TopClassAssignment& Classification::at(Measure m, std::size_t unit) const {
  auto it = std::find(measures.begin(), measures.end(), m);
  if (it == measures.end()) throw ValidationError("measure " + std::string(to_string(m)) + " was not classified");
  return assignments[static_cast<std::size_t>(it - measures.begin()) * unit_count + unit];
}

std::size_t Classification::threshold_index(double threshold) const {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] == threshold) return i;
  }
  throw ValidationError("class " + csv::format_number(threshold) + " was not computed");
}

Classification classify_panel(const Panel& panel, std::span<const Measure> measures,
                              std::span<const double> thresholds, unsigned threads) {
  if (thresholds.size() > 32) throw ValidationError("at most 32 class thresholds are supported");
  Classification out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.measures.assign(measures.begin(), measures.end());
  out.unit_count = panel.units.size();
  out.assignments.resize(out.measures.size() * out.unit_count);

  // Cohorts in (period, discipline) order; members in unit order.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> cohort_map;
  for (std::size_t i = 0; i < panel.units.size(); ++i) {
    cohort_map[{panel.units[i].period_index, panel.units[i].discipline}].push_back(i);
  }
  std::vector<const std::vector<std::size_t>*> cohorts;
  for (const auto& [key, members] : cohort_map) cohorts.push_back(&members);

  const std::size_t jobs = cohorts.size() * out.measures.size();
  parallel_for(jobs, threads, [&](std::size_t job) {
    const std::size_t m = job / cohorts.size();
    const auto& members = *cohorts[job % cohorts.size()];
    const Measure measure = out.measures[m];
    std::vector<double> values;
    values.reserve(members.size());
    for (std::size_t u : members) values.push_back(panel.units[u].measure(measure));
    auto ranks = classify_cohort(values, thresholds);
    for (std::size_t j = 0; j < members.size(); ++j) {
      TopClassAssignment& a = out.assignments[m * out.unit_count + members[j]];
      a.unit = members[j];
      a.measure = measure;
      a.rank = ranks[j].rank;
      a.cohort_size = members.size();
      a.membership = ranks[j].membership;
    }
  });
  return out;
}

std::vector<ClassCountRow> class_counts(const Panel& panel, const Classification& classes,
                                        std::span<const Dimension> dims) {
  std::vector<ClassCountRow> rows;
  for (Measure m : classes.measures) {
    std::map<std::vector<int>, std::size_t> group_units;
    std::map<std::vector<int>, std::vector<std::size_t>> members;  // per threshold
    for (std::size_t u = 0; u < panel.units.size(); ++u) {
      auto key = group_key(panel.units[u], dims);
      if (!key) continue;
      ++group_units[*key];
      auto& counts = members[*key];
      counts.resize(classes.thresholds.size(), 0);
      const auto& a = classes.at(m, u);
      for (std::size_t t = 0; t < classes.thresholds.size(); ++t) counts[t] += a.in_class(t) ? 1 : 0;
    }
    for (std::size_t t = 0; t < classes.thresholds.size(); ++t) {
      std::size_t total = 0;
      for (const auto& [key, counts] : members) total += counts[t];
      for (const auto& [key, counts] : members) {
        ClassCountRow row;
        row.key = group_labels(panel, dims, key);
        row.measure = m;
        row.threshold = classes.thresholds[t];
        row.count = counts[t];
        row.group_units = group_units[key];
        row.percent_of_class = total ? 100.0 * static_cast<double>(row.count) / static_cast<double>(total) : 0.0;
        row.percent_of_group = 100.0 * static_cast<double>(row.count) / static_cast<double>(row.group_units);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace toperf
