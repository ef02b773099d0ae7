#pragma once

// Concentration shares, the relative presence index, distribution tables
// and cross-measure correlations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toperf/grouping.hpp"
#include "toperf/types.hpp"

namespace toperf {

struct Panel;
struct Classification;

enum class Segment { Top, Rest };

struct ShareRow {
  std::vector<std::string> key;
  double threshold = 0;
  Measure measure = Measure::P1;
  Segment segment = Segment::Top;
  double share_percent = 0;
  double numerator = 0;
  double denominator = 0;
};

struct ShareTable {
  std::vector<Dimension> dims;
  ShareBasis basis = ShareBasis::MeasureConsistent;
  std::vector<ShareRow> rows;  // top row then rest row for each group
  std::vector<std::string> warnings;
};

/// Share of the basis held by members of the class `threshold` under
/// `measure`, per group. Measure-consistent sums the classing measure;
/// FullCount sums p3; PublicationCoverage counts distinct publications with
/// at least one class-member author in the group.
ShareTable concentration_share(const Panel& panel, const Classification& classes, double threshold, Measure measure,
                               ShareBasis basis, std::span<const Dimension> dims);

struct RpiCounts {
  std::size_t tp_men = 0;
  std::size_t all_men = 0;
  std::size_t tp_women = 0;
  std::size_t all_women = 0;
};

struct RpiValue {
  std::vector<std::string> key;
  double threshold = 0;
  Measure measure = Measure::P1;
  RpiCounts counts;
  std::optional<double> rpi_men;    // undefined when any count is zero
  std::optional<double> rpi_women;  // reciprocal of rpi_men
};

/// (tp_men / all_men) / (tp_women / all_women) and its reciprocal.
std::pair<std::optional<double>, std::optional<double>> rpi_from_counts(const RpiCounts& counts);

std::vector<RpiValue> rpi(const Panel& panel, const Classification& classes, double threshold, Measure measure,
                          std::span<const Dimension> dims);

struct ClassFilter {
  const Classification* classes = nullptr;
  double threshold = 0;
  Measure measure = Measure::P1;
};

struct DistributionCell {
  std::vector<std::string> row_key;
  std::string column;  // "all" when there is no column dimension
  std::size_t count = 0;
  double column_percent = 0;
};

/// Counts of units (or of class members when `filter` is set) cross-tabulated
/// by `row_dims` and an optional column dimension, with percentages that sum
/// to 100 within each column.
std::vector<DistributionCell> distribution_table(const Panel& panel, std::span<const Dimension> row_dims,
                                                 std::optional<Dimension> column_dim,
                                                 std::optional<ClassFilter> filter = std::nullopt);

/// Two-pass Pearson correlation; nullopt when either column has zero variance.
template <typename DerivedX, typename DerivedY>
std::optional<typename DerivedX::Scalar> pearson(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  const auto n = x.size();
  if (n < 2 || y.size() != n) return std::nullopt;
  const auto xc = (x.derived().array() - x.derived().mean()).eval();
  const auto yc = (y.derived().array() - y.derived().mean()).eval();
  const Scalar sxx = xc.square().sum();
  const Scalar syy = yc.square().sum();
  if (!(sxx > Scalar(0)) || !(syy > Scalar(0))) return std::nullopt;
  Scalar r = (xc * yc).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

struct CorrelationRow {
  std::vector<std::string> key;
  Measure a = Measure::P1;
  Measure b = Measure::P2;
  std::optional<double> pearson_r;  // nullopt when a column has zero variance
  std::size_t n = 0;
};

/// Pearson r for the six measure pairs within each group cell holding at
/// least three units; smaller cells are skipped.
std::vector<CorrelationRow> measure_correlations(const Panel& panel, std::span<const Dimension> dims);

}  // namespace toperf
