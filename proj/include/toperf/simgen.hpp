#pragma once

// Closed-world synthetic cohorts.
//
// Authors draw a publication count for each period in which they are active;
// the authorship slots of one (period, discipline) pool are then packed into
// concrete publications whose coauthors come from the same pool. Every
// byline author therefore exists in the author table, and each author's
// realised article count equals the drawn count.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "toperf/config.hpp"
#include "toperf/ingest.hpp"
#include "toperf/panel.hpp"

namespace toperf {

enum class CountDistribution { Lotka, Lognormal, Fixed };

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t n_authors = 2000;
  double male_fraction = 0.55;
  double unknown_gender_fraction = 0.0;
  int entry_year_min = 1960;
  int entry_year_max = 2021;
  int career_length_max = 45;
  double activity_prob = 0.8;  // chance an eligible author publishes in a period

  CountDistribution count_distribution = CountDistribution::Lotka;
  double lotka_alpha = 2.0;
  int lotka_kmax = 200;
  double lognormal_mu = 0.5;
  double lognormal_sigma = 1.0;
  int fixed_count = 1;
  double male_log_productivity = 0.0;       // log multiplier on counts for men
  double age_log_productivity_slope = 0.0;  // log multiplier per year of age

  double team_size_mean = 3.0;  // team = 1 + Poisson(mean - 1)
  int team_size_max = 20;

  std::size_t n_journals = 500;  // percentiles uniform on 0..99
  double conference_prob = 0.1;
  double unranked_venue_prob = 0.0;
  std::size_t n_unranked_venues = 20;

  int refs_min = 5;
  int refs_max = 25;
  double foreign_ref_prob = 0.2;       // refs to other whitelisted disciplines
  double nonwhitelist_ref_prob = 0.05;  // refs outside the whitelist

  std::string home_country = "PL";
  double foreign_affiliation_prob = 0.15;  // per byline entry
  std::size_t n_institutions = 40;
  std::size_t n_research_intensive = 10;  // the first institutions
  double research_intensive_prob = 0.3;   // chance an author's home is research-intensive
  double undeclared_first_year_prob = 0.1;

  int window_start = 1992;
  int window_end = 2021;
  int period_length = 6;
  std::map<std::string, double> discipline_weights;  // empty = uniform over the default whitelist

  void set(const std::string& key, const std::string& value);
  void validate() const;
};

SimConfig sim_config_from(const KeyValues& kv);

struct TruthAuthor {
  std::string author_id;
  Gender gender = Gender::Unknown;
  int entry_year = 0;
  bool declared = true;  // first_pub_year written to authors.csv
  std::string discipline;
  std::string institution;
  bool research_intensive = false;
};

struct TruthUnit {
  std::string author_id;
  std::size_t period_index = 0;
  std::string discipline;
  int count = 0;  // authorships in the period
  int age = 0;    // period end minus entry year
  double avg_team_size = 0;
};

struct TruthPeriod {
  std::size_t index = 0;
  std::size_t units = 0;
  std::size_t publications = 0;
};

struct GroundTruth {
  std::vector<TruthAuthor> authors;
  std::vector<TruthUnit> units;  // ordered by (author, period)
  std::vector<TruthPeriod> periods;
};

struct SimResult {
  RawTables tables;
  GroundTruth truth;
};

/// Throws ValidationError for invalid or infeasible configurations.
SimResult generate(const SimConfig& config, unsigned threads = 0);

/// A RunConfig whose window and home country match the generator.
RunConfig run_config_for(const SimConfig& config);

void write_publications(std::ostream& out, const std::vector<PublicationRecord>& pubs);
void write_authors(std::ostream& out, const std::vector<AuthorProfile>& authors);
void write_journals(std::ostream& out, const std::vector<JournalRank>& journals);
void write_institutions(std::ostream& out, const std::vector<InstitutionFlag>& institutions);
void write_ground_truth(std::ostream& out, const SimConfig& config, const GroundTruth& truth);

/// The four corpus files plus ground_truth.json.
void write_simulation(const std::filesystem::path& dir, const SimConfig& config, const SimResult& result);

// Unit-level logit data-generating process with known coefficients.

struct LogitDgpConfig {
  std::uint64_t seed = 1;
  std::size_t n = 50000;
  double beta_age = 0.06;
  double beta_team = -0.05;
  double beta_intl = 0.006;
  double beta_collab = -0.004;
  double beta_male = 0.69314718055994531;  // log 2
  double beta_rest = 0.0;
  double beta_medperc = 0.025;
  std::vector<double> period_shifts{-4.0, -4.2, -4.4, -4.6, -4.8};
  std::vector<double> discipline_shifts;  // empty = evenly spaced on [-0.35, 0.35]
};

struct LogitPanel {
  Panel panel;
  std::vector<std::uint8_t> response;
};

/// Units with covariates drawn independently and a Bernoulli response from
/// the logit of the linear predictor. Measures and publications are empty.
LogitPanel simulate_logit_panel(const LogitDgpConfig& config);

}  // namespace toperf
