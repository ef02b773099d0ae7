#pragma once

// Loading and validating the input tables into an immutable corpus.

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toperf/config.hpp"
#include "toperf/types.hpp"

namespace toperf {

struct AuthorByline {
  std::string author_id;
  std::vector<std::string> affiliation_ids;
  std::string country;  // ISO-3166 alpha-2; empty when unknown
};

struct PublicationRecord {
  std::string pub_id;
  int year = 0;
  DocType doc_type = DocType::Article;
  std::string journal_id;
  std::vector<AuthorByline> authors;
  std::vector<int> cited_asjc;  // multiset, kept sorted
};

struct AuthorProfile {
  std::string author_id;
  Gender gender = Gender::Unknown;
  std::optional<int> first_pub_year;
  bool first_pub_year_approximate = false;  // derived from the corpus, not declared
  bool synthesized = false;                 // no row in authors.csv
};

struct JournalRank {
  std::string journal_id;
  int citescore_percentile = 0;  // [0, 99]
};

struct InstitutionFlag {
  std::string affiliation_id;
  bool research_intensive = false;
};

struct LoadReport {
  std::size_t lines_read = 0;
  std::size_t excluded_doc_type = 0;
  std::size_t excluded_window = 0;
  std::vector<std::string> unranked_journals;  // distinct ids, sorted
  std::size_t unranked_publications = 0;
  std::vector<std::string> unknown_authors;  // byline ids given a synthesized profile
  std::vector<std::string> warnings;
  std::size_t derived_first_years = 0;
};

/// Raw parsed tables, before filtering and cross-checks.
struct RawTables {
  std::vector<PublicationRecord> publications;
  std::vector<std::size_t> publication_lines;
  std::string publications_source = "publications";
  std::vector<AuthorProfile> authors;
  std::vector<JournalRank> journals;
  std::vector<InstitutionFlag> institutions;
};

/// In-memory corpus. All vectors are ordered by id; lookups are by id.
struct Corpus {
  std::vector<PublicationRecord> publications;
  std::vector<AuthorProfile> profiles;
  std::unordered_map<std::string, int> journal_percentiles;
  std::unordered_map<std::string, bool> institutions;
  std::unordered_map<std::string, std::size_t> profile_index;
  LoadReport report;

  const AuthorProfile* find_profile(std::string_view author_id) const;
  std::optional<int> percentile(const std::string& journal_id) const;
  bool research_intensive(const std::string& affiliation_id) const;
};

std::vector<PublicationRecord> parse_publications(std::istream& in, std::string_view source,
                                                  std::vector<std::size_t>* lines = nullptr);
std::vector<AuthorProfile> parse_authors(std::istream& in, std::string_view source);
std::vector<JournalRank> parse_journals(std::istream& in, std::string_view source);
std::vector<InstitutionFlag> parse_institutions(std::istream& in, std::string_view source);

/// Filters to articles and conference papers inside the study window,
/// enforces id uniqueness, flags unranked venues and synthesizes gender-U
/// profiles for byline authors missing from the author table.
Corpus assemble_corpus(RawTables tables, const RunConfig& config);

/// Reads the four files (in parallel) and assembles the corpus.
Corpus load_corpus(const CorpusPaths& paths, const RunConfig& config);

/// Fills missing first-publication years from the earliest corpus year and
/// checks declared years against the corpus. Returns the number derived.
/// Throws ValidationError if a declared year is later than a publication.
std::size_t derive_first_pub_year(Corpus& corpus);

}  // namespace toperf
