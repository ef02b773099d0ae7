#pragma once

// Vocabulary shared by every stage of the pipeline.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace toperf {

enum class Gender { Male, Female, Unknown };
enum class DocType { Article, ConferencePaper, Other };

/// The four productivity measurements.
///   P1: prestige-normalized, full counting
///   P2: prestige-normalized, fractional counting
///   P3: non-normalized, full counting
///   P4: non-normalized, fractional counting
enum class Measure { P1 = 0, P2 = 1, P3 = 2, P4 = 3 };
inline constexpr std::array<Measure, 4> kAllMeasures{Measure::P1, Measure::P2, Measure::P3, Measure::P4};

enum class AgeGroup { Age0to9, Age10to19, Age20to29, Age30Plus };

/// Denominator/numerator basis for concentration shares.
enum class ShareBasis { MeasureConsistent, FullCount, PublicationCoverage };

enum class GenderUPolicy { Keep, Drop };

/// Unit-level regressors available to the logit model, in their natural
/// units (years, authors, percent, percentile, 0/1 indicators).
enum class Covariate {
  AcademicAge,
  AvgTeamSize,
  IntlCollaborationRate,
  CollaborationRate,
  GenderMale,
  ResearchIntensityRest,
  MedianJournalPercentile,
};
inline constexpr std::array<Covariate, 7> kAllCovariates{
    Covariate::AcademicAge,       Covariate::AvgTeamSize,           Covariate::IntlCollaborationRate,
    Covariate::CollaborationRate, Covariate::GenderMale,            Covariate::ResearchIntensityRest,
    Covariate::MedianJournalPercentile,
};

struct GlmOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  double loglik_tolerance = 1e-10;  // relative change
  double separation_bound = 30.0;   // |beta| or |linear predictor|
};

std::string_view to_string(Gender g);
std::string_view to_string(DocType d);
std::string_view to_string(Measure m);
std::string_view to_string(AgeGroup a);
std::string_view to_string(ShareBasis b);
std::string_view to_string(GenderUPolicy p);
std::string_view to_string(Covariate c);

std::optional<Gender> parse_gender(std::string_view text);
std::optional<DocType> parse_doc_type(std::string_view text);
std::optional<Measure> parse_measure(std::string_view text);
std::optional<ShareBasis> parse_share_basis(std::string_view text);
std::optional<GenderUPolicy> parse_gender_u_policy(std::string_view text);
std::optional<Covariate> parse_covariate(std::string_view text);

AgeGroup age_group_for(int academic_age);

struct Period {
  std::size_t index = 0;
  int start_year = 0;
  int end_year = 0;  // inclusive

  bool contains(int year) const { return year >= start_year && year <= end_year; }
  std::string label() const;
  friend bool operator==(const Period&, const Period&) = default;
};

/// Contiguous periods of `length` years covering [start, end]; the final
/// period is shortened if the window is not a multiple of the length.
std::vector<Period> make_periods(int start, int end, int length);

/// Throws ValidationError unless the periods are disjoint, contiguous,
/// ordered, and cover exactly [window_start, window_end].
void validate_periods(const std::vector<Period>& periods, int window_start, int window_end);

/// Maps ASJC codes onto discipline labels. Labels are kept sorted so that a
/// discipline's index is a stable identifier across runs.
class DisciplineWhitelist {
 public:
  struct Rule {
    std::string label;
    std::vector<std::pair<int, int>> code_ranges;  // inclusive
  };

  DisciplineWhitelist() = default;
  explicit DisciplineWhitelist(std::vector<Rule> rules);

  /// The 15 STEMM disciplines, keyed by two-digit ASJC subject area.
  static DisciplineWhitelist stemm_default();

  std::optional<std::size_t> lookup(int asjc_code) const;
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

 private:
  std::vector<Rule> rules_;
  std::vector<std::string> labels_;
};

}  // namespace toperf
