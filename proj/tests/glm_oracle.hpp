#pragma once

// Full-dummy logit oracle over a panel: one dummy per observed period, one per
// observed discipline except the first, covariates read straight off the
// unit. Estimates are mapped onto the sum-to-zero parametrization so they can
// be compared with the library's fixed-effect output.

#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "reference_logit.hpp"
#include "toperf/panel.hpp"

namespace glm_oracle {

using namespace toperf;

inline double raw_covariate(const AuthorPeriodUnit& u, Covariate c) {
  switch (c) {
    case Covariate::AcademicAge: return u.academic_age;
    case Covariate::AvgTeamSize: return u.covariates.avg_team_size;
    case Covariate::IntlCollaborationRate: return u.covariates.intl_collaboration_rate;
    case Covariate::CollaborationRate: return u.covariates.collaboration_rate;
    case Covariate::GenderMale: return u.gender == Gender::Male ? 1.0 : 0.0;
    case Covariate::ResearchIntensityRest: return u.research_intensive ? 0.0 : 1.0;
    case Covariate::MedianJournalPercentile: return u.covariates.median_journal_percentile;
  }
  return 0;
}

struct OracleFit {
  std::vector<double> covariate_beta;
  std::map<std::string, double> period_shift;      // by period label
  std::map<std::string, double> discipline_shift;  // sum-to-zero, by label
  double loglik = 0;
  std::size_t n = 0;
};

inline OracleFit fit(const Panel& panel, std::span<const std::uint8_t> response, const std::vector<Covariate>& covs) {
  bool drop_u = false;
  for (auto c : covs) drop_u = drop_u || c == Covariate::GenderMale;
  std::vector<std::size_t> rows;
  std::map<std::size_t, std::size_t> periods, disciplines;
  for (std::size_t i = 0; i < panel.units.size(); ++i) {
    if (drop_u && panel.units[i].gender == Gender::Unknown) continue;
    rows.push_back(i);
    periods[panel.units[i].period_index] = 0;
    disciplines[panel.units[i].discipline] = 0;
  }
  std::size_t col = 0;
  for (auto& [p, c] : periods) c = col++;
  bool first = true;
  for (auto& [d, c] : disciplines) {
    c = first ? SIZE_MAX : col++;
    first = false;
  }
  const std::size_t cov0 = col;
  reference::Dense x(rows.size(), cov0 + covs.size());
  std::vector<reference::Real> y(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& u = panel.units[rows[r]];
    x(r, periods[u.period_index]) = 1;
    if (auto c = disciplines[u.discipline]; c != SIZE_MAX) x(r, c) = 1;
    for (std::size_t k = 0; k < covs.size(); ++k) x(r, cov0 + k) = raw_covariate(u, covs[k]);
    y[r] = response[rows[r]] ? 1 : 0;
  }
  const auto ref = reference::newton(x, y);

  OracleFit out;
  out.n = rows.size();
  out.loglik = static_cast<double>(ref.loglik);
  for (std::size_t k = 0; k < covs.size(); ++k) out.covariate_beta.push_back(static_cast<double>(ref.beta[cov0 + k]));
  reference::Real mean = 0;
  for (const auto& [d, c] : disciplines) mean += c == SIZE_MAX ? 0 : ref.beta[c];
  mean /= static_cast<reference::Real>(disciplines.size());
  for (const auto& [d, c] : disciplines) {
    const reference::Real r = c == SIZE_MAX ? 0 : ref.beta[c];
    out.discipline_shift[panel.discipline_labels[d]] = static_cast<double>(r - mean);
  }
  for (const auto& [p, c] : periods) out.period_shift[panel.periods[p].label()] = static_cast<double>(ref.beta[c] + mean);
  return out;
}

}  // namespace glm_oracle
