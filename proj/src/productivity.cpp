#include "toperf/productivity.hpp"

#include <algorithm>
#include <vector>

#include "toperf/config.hpp"
#include "toperf/ingest.hpp"
#include "toperf/panel.hpp"
#include "toperf/parallel.hpp"

namespace toperf {
namespace {

constexpr int kPercentileFloor = 10;

std::optional<int> lookup(const JournalIndex& journals, const std::string& id) {
  auto it = journals.find(id);
  if (it == journals.end()) return std::nullopt;
  return it->second;
}

}  // namespace

double prestige_weight(std::optional<int> citescore_percentile) {
  if (!citescore_percentile) return kPercentileFloor / 100.0;
  return std::max(*citescore_percentile, kPercentileFloor) / 100.0;
}

ProductivityVector compute_measures(std::span<const PublicationRecord* const> pubs, const JournalIndex& journals) {
  ProductivityVector v;
  for (const PublicationRecord* pub : pubs) {
    const double w = prestige_weight(lookup(journals, pub->journal_id));
    const double n = static_cast<double>(pub->authors.size());
    v.p1 += w;
    v.p2 += w / n;
    v.p3 += 1.0;
    v.p4 += 1.0 / n;
  }
  return v;
}

CovariateSet compute_covariates(std::span<const PublicationRecord* const> pubs, const std::string& home_country,
                                const JournalIndex& journals) {
  CovariateSet c;
  if (pubs.empty()) return c;
  std::size_t team_total = 0;
  std::size_t collaborative = 0;
  std::size_t international = 0;
  std::vector<double> percentiles;
  percentiles.reserve(pubs.size());
  for (const PublicationRecord* pub : pubs) {
    team_total += pub->authors.size();
    if (pub->authors.size() >= 2) ++collaborative;
    const bool foreign = std::any_of(pub->authors.begin(), pub->authors.end(), [&](const AuthorByline& b) {
      return !b.country.empty() && b.country != home_country;
    });
    if (foreign) ++international;
    percentiles.push_back(lookup(journals, pub->journal_id).value_or(kPercentileFloor));
  }
  const double n = static_cast<double>(pubs.size());
  c.avg_team_size = static_cast<double>(team_total) / n;
  c.collaboration_rate = 100.0 * static_cast<double>(collaborative) / n;
  c.intl_collaboration_rate = 100.0 * static_cast<double>(international) / n;
  std::sort(percentiles.begin(), percentiles.end());
  const std::size_t mid = percentiles.size() / 2;
  c.median_journal_percentile =
      percentiles.size() % 2 ? percentiles[mid] : 0.5 * (percentiles[mid - 1] + percentiles[mid]);
  return c;
}

void annotate_productivity(Panel& panel, const Corpus& corpus, const RunConfig& config) {
  parallel_for(panel.units.size(), config.threads, [&](std::size_t i) {
    AuthorPeriodUnit& unit = panel.units[i];
    std::vector<const PublicationRecord*> pubs;
    pubs.reserve(unit.publications.size());
    for (std::size_t idx : unit.publications) pubs.push_back(&corpus.publications[idx]);
    unit.measures = compute_measures(pubs, corpus.journal_percentiles);
    unit.covariates = compute_covariates(pubs, config.home_country, corpus.journal_percentiles);
  });
}

}  // namespace toperf
