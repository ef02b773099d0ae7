#include "toperf/types.hpp"

#include <algorithm>

#include "toperf/error.hpp"

namespace toperf {

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Male: return "M";
    case Gender::Female: return "F";
    case Gender::Unknown: return "U";
  }
  return "U";
}

std::string_view to_string(DocType d) {
  switch (d) {
    case DocType::Article: return "article";
    case DocType::ConferencePaper: return "conference_paper";
    case DocType::Other: return "other";
  }
  return "other";
}

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::P1: return "p1";
    case Measure::P2: return "p2";
    case Measure::P3: return "p3";
    case Measure::P4: return "p4";
  }
  return "p1";
}

std::string_view to_string(AgeGroup a) {
  switch (a) {
    case AgeGroup::Age0to9: return "0-9";
    case AgeGroup::Age10to19: return "10-19";
    case AgeGroup::Age20to29: return "20-29";
    case AgeGroup::Age30Plus: return "30+";
  }
  return "30+";
}

std::string_view to_string(ShareBasis b) {
  switch (b) {
    case ShareBasis::MeasureConsistent: return "measure";
    case ShareBasis::FullCount: return "p3";
    case ShareBasis::PublicationCoverage: return "coverage";
  }
  return "measure";
}

std::string_view to_string(GenderUPolicy p) { return p == GenderUPolicy::Keep ? "keep" : "drop"; }

std::string_view to_string(Covariate c) {
  switch (c) {
    case Covariate::AcademicAge: return "academic_age";
    case Covariate::AvgTeamSize: return "avg_team_size";
    case Covariate::IntlCollaborationRate: return "intl_collaboration_rate";
    case Covariate::CollaborationRate: return "collaboration_rate";
    case Covariate::GenderMale: return "gender_male";
    case Covariate::ResearchIntensityRest: return "research_intensity_rest";
    case Covariate::MedianJournalPercentile: return "median_journal_percentile";
  }
  return "academic_age";
}

std::optional<Covariate> parse_covariate(std::string_view text) {
  for (Covariate c : kAllCovariates) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view text) {
  if (text == "M") return Gender::Male;
  if (text == "F") return Gender::Female;
  if (text == "U") return Gender::Unknown;
  return std::nullopt;
}

std::optional<DocType> parse_doc_type(std::string_view text) {
  if (text == "article") return DocType::Article;
  if (text == "conference_paper") return DocType::ConferencePaper;
  if (text == "other") return DocType::Other;
  return std::nullopt;
}

std::optional<Measure> parse_measure(std::string_view text) {
  if (text == "p1" || text == "P1" || text == "1") return Measure::P1;
  if (text == "p2" || text == "P2" || text == "2") return Measure::P2;
  if (text == "p3" || text == "P3" || text == "3") return Measure::P3;
  if (text == "p4" || text == "P4" || text == "4") return Measure::P4;
  return std::nullopt;
}

std::optional<ShareBasis> parse_share_basis(std::string_view text) {
  if (text == "measure") return ShareBasis::MeasureConsistent;
  if (text == "p3" || text == "full") return ShareBasis::FullCount;
  if (text == "coverage") return ShareBasis::PublicationCoverage;
  return std::nullopt;
}

std::optional<GenderUPolicy> parse_gender_u_policy(std::string_view text) {
  if (text == "keep") return GenderUPolicy::Keep;
  if (text == "drop") return GenderUPolicy::Drop;
  return std::nullopt;
}

AgeGroup age_group_for(int academic_age) {
  if (academic_age < 10) return AgeGroup::Age0to9;
  if (academic_age < 20) return AgeGroup::Age10to19;
  if (academic_age < 30) return AgeGroup::Age20to29;
  return AgeGroup::Age30Plus;
}

std::string Period::label() const { return std::to_string(start_year) + "-" + std::to_string(end_year); }

std::vector<Period> make_periods(int start, int end, int length) {
  if (length <= 0) throw ValidationError("period length must be positive");
  if (end < start) throw ValidationError("study window end precedes its start");
  std::vector<Period> out;
  for (int y = start; y <= end; y += length) {
    out.push_back(Period{out.size(), y, std::min(end, y + length - 1)});
  }
  return out;
}

void validate_periods(const std::vector<Period>& periods, int window_start, int window_end) {
  if (periods.empty()) throw ValidationError("no periods configured");
  int expected = window_start;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    const Period& p = periods[i];
    if (p.index != i) throw ValidationError("period indices must be 0..n-1 in order");
    if (p.start_year != expected || p.end_year < p.start_year) {
      throw ValidationError("periods must be contiguous and disjoint; period " + p.label() +
                            " does not start at " + std::to_string(expected));
    }
    expected = p.end_year + 1;
  }
  if (expected != window_end + 1) {
    throw ValidationError("periods do not cover the study window " + std::to_string(window_start) + "-" +
                          std::to_string(window_end));
  }
}

DisciplineWhitelist::DisciplineWhitelist(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) { return a.label < b.label; });
  std::vector<std::pair<std::pair<int, int>, std::string_view>> spans;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].label.empty()) throw ValidationError("discipline label must be non-empty");
    if (i > 0 && rules_[i].label == rules_[i - 1].label) {
      throw ValidationError("duplicate discipline label " + rules_[i].label);
    }
    labels_.push_back(rules_[i].label);
    for (auto r : rules_[i].code_ranges) {
      if (r.first > r.second) throw ValidationError("empty ASJC range for " + rules_[i].label);
      spans.push_back({r, rules_[i].label});
    }
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first.first <= spans[i - 1].first.second) {
      throw ValidationError("ASJC ranges of " + std::string(spans[i - 1].second) + " and " +
                            std::string(spans[i].second) + " overlap");
    }
  }
}

DisciplineWhitelist DisciplineWhitelist::stemm_default() {
  const std::pair<const char*, int> areas[] = {
      {"AGRI", 11},  {"BIO", 13},   {"CHEMENG", 15}, {"CHEM", 16}, {"COMP", 17},
      {"EARTH", 19}, {"ENER", 21},  {"ENG", 22},     {"ENVIR", 23}, {"MATER", 25},
      {"MATH", 26},  {"MED", 27},   {"NEURO", 28},   {"PHARM", 30}, {"PHYS", 31},
  };
  std::vector<Rule> rules;
  for (auto [label, area] : areas) rules.push_back(Rule{label, {{area * 100, area * 100 + 99}}});
  return DisciplineWhitelist(std::move(rules));
}

std::optional<std::size_t> DisciplineWhitelist::lookup(int asjc_code) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    for (auto [lo, hi] : rules_[i].code_ranges) {
      if (asjc_code >= lo && asjc_code <= hi) return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> DisciplineWhitelist::index_of(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

}  // namespace toperf
