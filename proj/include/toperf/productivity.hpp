#pragma once

// Publishing productivity measurements and per-unit covariates.

#include <optional>
#include <span>
#include <string>
#include <unordered_map>

#include "toperf/types.hpp"

namespace toperf {

struct PublicationRecord;
struct Corpus;
struct Panel;
struct RunConfig;

struct ProductivityVector {
  double p1 = 0;  // prestige-normalized, full counting
  double p2 = 0;  // prestige-normalized, fractional counting
  double p3 = 0;  // non-normalized, full counting (article count)
  double p4 = 0;  // non-normalized, fractional counting

  double operator[](Measure m) const {
    switch (m) {
      case Measure::P1: return p1;
      case Measure::P2: return p2;
      case Measure::P3: return p3;
      case Measure::P4: return p4;
    }
    return p1;
  }
};

struct CovariateSet {
  double avg_team_size = 0;              // mean byline length
  double collaboration_rate = 0;         // percent of pubs with >= 2 authors
  double intl_collaboration_rate = 0;    // percent of pubs with a foreign byline country
  double median_journal_percentile = 0;  // unranked venues count as 10
};

using JournalIndex = std::unordered_map<std::string, int>;

/// max(percentile, 10) / 100; unranked venues get the 0.10 floor.
double prestige_weight(std::optional<int> citescore_percentile);

ProductivityVector compute_measures(std::span<const PublicationRecord* const> pubs, const JournalIndex& journals);

/// Empty country strings are treated as unknown, not foreign.
CovariateSet compute_covariates(std::span<const PublicationRecord* const> pubs, const std::string& home_country,
                                const JournalIndex& journals);

/// Fills measures and covariates of every unit in place.
void annotate_productivity(Panel& panel, const Corpus& corpus, const RunConfig& config);

}  // namespace toperf
