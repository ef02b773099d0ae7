#include "toperf/metrics.hpp"

#include <map>
#include <set>

#include "toperf/classify.hpp"
#include "toperf/csv.hpp"
#include "toperf/panel.hpp"

namespace toperf {

ShareTable concentration_share(const Panel& panel, const Classification& classes, double threshold, Measure measure,
                               ShareBasis basis, std::span<const Dimension> dims) {
  ShareTable table;
  table.dims.assign(dims.begin(), dims.end());
  table.basis = basis;
  const std::size_t t = classes.threshold_index(threshold);

  struct Acc {
    double top = 0;
    double all = 0;
    std::set<std::size_t> top_pubs;
    std::set<std::size_t> all_pubs;
  };
  std::map<std::vector<int>, Acc> groups;
  for (std::size_t u = 0; u < panel.units.size(); ++u) {
    const AuthorPeriodUnit& unit = panel.units[u];
    auto key = group_key(unit, dims);
    if (!key) continue;
    Acc& acc = groups[*key];
    const bool member = classes.at(measure, u).in_class(t);
    if (basis == ShareBasis::PublicationCoverage) {
      acc.all_pubs.insert(unit.publications.begin(), unit.publications.end());
      if (member) acc.top_pubs.insert(unit.publications.begin(), unit.publications.end());
      continue;
    }
    const double value = basis == ShareBasis::MeasureConsistent ? unit.measure(measure) : unit.measures.p3;
    acc.all += value;
    if (member) acc.top += value;
  }

  for (auto& [key, acc] : groups) {
    if (basis == ShareBasis::PublicationCoverage) {
      acc.top = static_cast<double>(acc.top_pubs.size());
      acc.all = static_cast<double>(acc.all_pubs.size());
    }
    auto labels = group_labels(panel, dims, key);
    if (!(acc.all > 0)) {
      std::string where;
      for (const auto& l : labels) where += (where.empty() ? "" : "/") + l;
      table.warnings.push_back("zero denominator for group '" + (where.empty() ? std::string("all") : where) +
                               "'; row omitted");
      continue;
    }
    const double top_share = 100.0 * acc.top / acc.all;
    table.rows.push_back(ShareRow{labels, threshold, measure, Segment::Top, top_share, acc.top, acc.all});
    table.rows.push_back(
        ShareRow{labels, threshold, measure, Segment::Rest, 100.0 - top_share, acc.all - acc.top, acc.all});
  }
  return table;
}

std::pair<std::optional<double>, std::optional<double>> rpi_from_counts(const RpiCounts& c) {
  if (c.tp_men == 0 || c.all_men == 0 || c.tp_women == 0 || c.all_women == 0) return {std::nullopt, std::nullopt};
  // Cross-multiplied so that the pair is computed from the same integers.
  const double men_num = static_cast<double>(c.tp_men) * static_cast<double>(c.all_women);
  const double women_num = static_cast<double>(c.tp_women) * static_cast<double>(c.all_men);
  return {men_num / women_num, women_num / men_num};
}

std::vector<RpiValue> rpi(const Panel& panel, const Classification& classes, double threshold, Measure measure,
                          std::span<const Dimension> dims) {
  const std::size_t t = classes.threshold_index(threshold);
  std::map<std::vector<int>, RpiCounts> groups;
  for (std::size_t u = 0; u < panel.units.size(); ++u) {
    const AuthorPeriodUnit& unit = panel.units[u];
    if (unit.gender == Gender::Unknown) continue;
    auto key = group_key(unit, dims);
    if (!key) continue;
    RpiCounts& c = groups[*key];
    const bool member = classes.at(measure, u).in_class(t);
    if (unit.gender == Gender::Male) {
      ++c.all_men;
      c.tp_men += member;
    } else {
      ++c.all_women;
      c.tp_women += member;
    }
  }
  std::vector<RpiValue> out;
  for (const auto& [key, counts] : groups) {
    RpiValue v;
    v.key = group_labels(panel, dims, key);
    v.threshold = threshold;
    v.measure = measure;
    v.counts = counts;
    std::tie(v.rpi_men, v.rpi_women) = rpi_from_counts(counts);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<DistributionCell> distribution_table(const Panel& panel, std::span<const Dimension> row_dims,
                                                 std::optional<Dimension> column_dim,
                                                 std::optional<ClassFilter> filter) {
  std::optional<std::size_t> t;
  if (filter) t = filter->classes->threshold_index(filter->threshold);

  std::vector<Dimension> dims(row_dims.begin(), row_dims.end());
  if (column_dim) dims.push_back(*column_dim);

  std::map<int, std::map<std::vector<int>, std::size_t>> by_column;
  for (std::size_t u = 0; u < panel.units.size(); ++u) {
    if (filter && !filter->classes->at(filter->measure, u).in_class(*t)) continue;
    auto key = group_key(panel.units[u], dims);
    if (!key) continue;
    int column = 0;
    if (column_dim) {
      column = key->back();
      key->pop_back();
    }
    ++by_column[column][*key];
  }

  std::vector<DistributionCell> out;
  for (const auto& [column, cells] : by_column) {
    std::size_t total = 0;
    for (const auto& [key, count] : cells) total += count;
    const std::string column_label = column_dim ? group_label(panel, *column_dim, column) : std::string("all");
    for (const auto& [key, count] : cells) {
      out.push_back(DistributionCell{group_labels(panel, row_dims, key), column_label, count,
                                     100.0 * static_cast<double>(count) / static_cast<double>(total)});
    }
  }
  return out;
}

std::vector<CorrelationRow> measure_correlations(const Panel& panel, std::span<const Dimension> dims) {
  std::map<std::vector<int>, std::vector<std::size_t>> cells;
  for (std::size_t u = 0; u < panel.units.size(); ++u) {
    if (auto key = group_key(panel.units[u], dims)) cells[*key].push_back(u);
  }
  std::vector<CorrelationRow> out;
  for (const auto& [key, members] : cells) {
    if (members.size() < 3) continue;
    Eigen::ArrayXXd values(static_cast<Eigen::Index>(members.size()), 4);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& m = panel.units[members[i]].measures;
      values.row(static_cast<Eigen::Index>(i)) << m.p1, m.p2, m.p3, m.p4;
    }
    auto labels = group_labels(panel, dims, key);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        CorrelationRow row;
        row.key = labels;
        row.a = static_cast<Measure>(a);
        row.b = static_cast<Measure>(b);
        row.pearson_r = pearson(values.col(a), values.col(b));
        row.n = members.size();
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

}  // namespace toperf
