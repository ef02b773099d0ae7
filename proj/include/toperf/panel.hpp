#pragma once

// Author x period panel construction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toperf/productivity.hpp"
#include "toperf/types.hpp"

namespace toperf {

struct Corpus;
struct RunConfig;

/// One author in one period: the row of every downstream analysis.
struct AuthorPeriodUnit {
  std::string author_id;
  std::size_t period_index = 0;
  std::size_t discipline = 0;  // index into Panel::discipline_labels
  bool discipline_tie_broken = false;
  int academic_age = 0;
  AgeGroup age_group = AgeGroup::Age0to9;
  bool first_year_approximate = false;
  Gender gender = Gender::Unknown;
  bool research_intensive = false;
  std::vector<std::size_t> publications;  // indices into Corpus::publications, ascending
  ProductivityVector measures;
  CovariateSet covariates;

  double measure(Measure m) const { return measures[m]; }
};

struct DisciplineAssignment {
  std::string author_id;
  std::size_t period_index = 0;
  std::optional<std::size_t> discipline;  // empty when no whitelisted code was cited
  bool tie_broken = false;
  std::uint64_t seed_used = 0;
};

struct PanelReport {
  std::size_t dropped_no_discipline = 0;
  std::size_t dropped_no_first_year = 0;
  std::size_t dropped_gender_unknown = 0;
  std::size_t discipline_ties = 0;
  std::size_t affiliation_ties = 0;
};

struct Panel {
  std::vector<Period> periods;
  std::vector<std::string> discipline_labels;
  std::vector<AuthorPeriodUnit> units;  // ordered by (author_id, period)
  PanelReport report;

  std::size_t units_in_period(std::size_t period) const;
};

/// Throws ValidationError when the year lies outside every period.
std::size_t assign_period(int year, std::span<const Period> periods);

/// Modal whitelisted discipline of the pooled cited-reference codes. Ties are
/// broken uniformly at random from a stream keyed by (seed, author, period).
DisciplineAssignment dominant_discipline(std::span<const int> cited_asjc, const DisciplineWhitelist& whitelist,
                                         std::uint64_t seed, std::string_view author_id, std::size_t period_index);

/// period.end_year - first_pub_year; throws ValidationError if negative.
int academic_age(const Period& period, int first_pub_year);

/// Modal per-publication research-intensive flag; a tie resolves to true and
/// an empty list to false.
bool dominant_affiliation(std::span<const bool> per_publication_flags, bool* tie = nullptr);

Panel build_panel(const Corpus& corpus, const RunConfig& config);

}  // namespace toperf
