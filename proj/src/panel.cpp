#include "toperf/panel.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "toperf/config.hpp"
#include "toperf/error.hpp"
#include "toperf/ingest.hpp"
#include "toperf/parallel.hpp"
#include "toperf/rng.hpp"

namespace toperf {

std::size_t Panel::units_in_period(std::size_t period) const {
  return static_cast<std::size_t>(
      std::count_if(units.begin(), units.end(), [&](const AuthorPeriodUnit& u) { return u.period_index == period; }));
}

std::size_t assign_period(int year, std::span<const Period> periods) {
  for (const Period& p : periods) {
    if (p.contains(year)) return p.index;
  }
  throw ValidationError("year " + std::to_string(year) + " lies outside the study periods");
}

DisciplineAssignment dominant_discipline(std::span<const int> cited_asjc, const DisciplineWhitelist& whitelist,
                                         std::uint64_t seed, std::string_view author_id, std::size_t period_index) {
  DisciplineAssignment out;
  out.author_id = std::string(author_id);
  out.period_index = period_index;
  out.seed_used = stream_key(seed, {fnv1a64(author_id), period_index});

  std::vector<std::size_t> counts(whitelist.size(), 0);
  for (int code : cited_asjc) {
    if (auto d = whitelist.lookup(code)) ++counts[*d];
  }
  const std::size_t best = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  if (best == 0) return out;

  std::vector<std::size_t> tied;  // ascending label order
  for (std::size_t d = 0; d < counts.size(); ++d) {
    if (counts[d] == best) tied.push_back(d);
  }
  if (tied.size() == 1) {
    out.discipline = tied.front();
    return out;
  }
  Engine engine = make_engine(out.seed_used);
  out.discipline = tied[uniform_index(engine, tied.size())];
  out.tie_broken = true;
  return out;
}

int academic_age(const Period& period, int first_pub_year) {
  if (first_pub_year > period.end_year) {
    throw ValidationError("first publication year " + std::to_string(first_pub_year) + " is after period " +
                          period.label());
  }
  return period.end_year - first_pub_year;
}

bool dominant_affiliation(std::span<const bool> per_publication_flags, bool* tie) {
  const auto yes = std::count(per_publication_flags.begin(), per_publication_flags.end(), true);
  const auto no = static_cast<std::ptrdiff_t>(per_publication_flags.size()) - yes;
  if (tie) *tie = !per_publication_flags.empty() && yes == no;
  if (per_publication_flags.empty()) return false;
  return yes >= no;
}

namespace {

struct AuthorUnits {
  std::vector<AuthorPeriodUnit> units;
  PanelReport report;
};

// The author's own byline entry in a publication (first occurrence).
const AuthorByline* own_byline(const PublicationRecord& pub, const std::string& author_id) {
  for (const auto& b : pub.authors) {
    if (b.author_id == author_id) return &b;
  }
  return nullptr;
}

}  // namespace

Panel build_panel(const Corpus& corpus, const RunConfig& config) {
  Panel panel;
  panel.periods = config.periods;
  panel.discipline_labels = config.disciplines.labels();

  // Publications per author (profile order), ascending corpus index.
  std::vector<std::vector<std::size_t>> by_author(corpus.profiles.size());
  for (std::size_t i = 0; i < corpus.publications.size(); ++i) {
    const auto& pub = corpus.publications[i];
    for (std::size_t a = 0; a < pub.authors.size(); ++a) {
      const auto& id = pub.authors[a].author_id;
      bool repeated = false;
      for (std::size_t b = 0; b < a; ++b) repeated = repeated || pub.authors[b].author_id == id;
      if (!repeated) by_author[corpus.profile_index.at(id)].push_back(i);
    }
  }

  std::vector<AuthorUnits> per_author(corpus.profiles.size());
  parallel_for(corpus.profiles.size(), config.threads, [&](std::size_t a) {
    const AuthorProfile& profile = corpus.profiles[a];
    AuthorUnits& out = per_author[a];
    if (by_author[a].empty()) return;

    std::map<std::size_t, std::vector<std::size_t>> by_period;
    for (std::size_t pub : by_author[a]) {
      by_period[assign_period(corpus.publications[pub].year, panel.periods)].push_back(pub);
    }
    for (auto& [period_index, pubs] : by_period) {
      if (profile.gender == Gender::Unknown && config.gender_u == GenderUPolicy::Drop) {
        ++out.report.dropped_gender_unknown;
        continue;
      }
      if (!profile.first_pub_year) {
        ++out.report.dropped_no_first_year;
        continue;
      }
      std::vector<int> pooled;
      for (std::size_t pub : pubs) {
        const auto& codes = corpus.publications[pub].cited_asjc;
        pooled.insert(pooled.end(), codes.begin(), codes.end());
      }
      DisciplineAssignment d =
          dominant_discipline(pooled, config.disciplines, config.seed, profile.author_id, period_index);
      if (!d.discipline) {
        ++out.report.dropped_no_discipline;
        continue;
      }
      if (d.tie_broken) ++out.report.discipline_ties;

      auto flags = std::make_unique<bool[]>(pubs.size());
      for (std::size_t k = 0; k < pubs.size(); ++k) {
        const AuthorByline* b = own_byline(corpus.publications[pubs[k]], profile.author_id);
        for (const auto& aff : b->affiliation_ids) flags[k] = flags[k] || corpus.research_intensive(aff);
      }
      bool tie = false;
      const bool intensive = dominant_affiliation(std::span<const bool>(flags.get(), pubs.size()), &tie);
      if (tie) ++out.report.affiliation_ties;

      AuthorPeriodUnit unit;
      unit.author_id = profile.author_id;
      unit.period_index = period_index;
      unit.discipline = *d.discipline;
      unit.discipline_tie_broken = d.tie_broken;
      unit.academic_age = academic_age(panel.periods[period_index], *profile.first_pub_year);
      unit.age_group = age_group_for(unit.academic_age);
      unit.first_year_approximate = profile.first_pub_year_approximate;
      unit.gender = profile.gender;
      unit.research_intensive = intensive;
      unit.publications = std::move(pubs);
      out.units.push_back(std::move(unit));
    }
  });

  for (auto& a : per_author) {
    for (auto& u : a.units) panel.units.push_back(std::move(u));
    panel.report.dropped_no_discipline += a.report.dropped_no_discipline;
    panel.report.dropped_no_first_year += a.report.dropped_no_first_year;
    panel.report.dropped_gender_unknown += a.report.dropped_gender_unknown;
    panel.report.discipline_ties += a.report.discipline_ties;
    panel.report.affiliation_ties += a.report.affiliation_ties;
  }
  return panel;
}

}  // namespace toperf
