#include "toperf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "toperf/csv.hpp"
#include "toperf/error.hpp"

namespace toperf {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(std::string_view source, std::size_t line, const std::string& why) {
  throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + why);
}

std::optional<int> to_int(std::string_view text) {
  int out = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return out;
}

const json& require(const json& obj, const char* key, std::string_view source, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(source, line, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* key, std::string_view source, std::size_t line) {
  const json& v = require(obj, key, source, line);
  if (!v.is_string()) schema_error(source, line, std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<csv::Record> read_table(std::istream& in, std::string_view source,
                                    const std::vector<std::string>& header) {
  auto records = csv::read(in, source);
  if (records.empty()) schema_error(source, 1, "missing header row");
  if (records.front().fields != header) {
    std::string expected;
    for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
    schema_error(source, records.front().line, "header must be " + expected);
  }
  records.erase(records.begin());
  for (const auto& rec : records) {
    if (rec.fields.size() != header.size()) {
      schema_error(source, rec.line,
                   "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(rec.fields.size()));
    }
  }
  return records;
}

template <typename T, typename Key>
void require_unique(const std::vector<T>& rows, Key key, std::string_view source, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    if (!seen.insert(key(row)).second) {
      throw ValidationError(std::string(source) + ": duplicate " + what + " '" + key(row) + "'");
    }
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file " + path.string());
  return in;
}

}  // namespace

const AuthorProfile* Corpus::find_profile(std::string_view author_id) const {
  auto it = profile_index.find(std::string(author_id));
  return it == profile_index.end() ? nullptr : &profiles[it->second];
}

std::optional<int> Corpus::percentile(const std::string& journal_id) const {
  auto it = journal_percentiles.find(journal_id);
  if (it == journal_percentiles.end()) return std::nullopt;
  return it->second;
}

bool Corpus::research_intensive(const std::string& affiliation_id) const {
  auto it = institutions.find(affiliation_id);
  return it != institutions.end() && it->second;
}

std::vector<PublicationRecord> parse_publications(std::istream& in, std::string_view source,
                                                  std::vector<std::size_t>* lines) {
  std::vector<PublicationRecord> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(raw);
    } catch (const json::parse_error& e) {
      schema_error(source, line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) schema_error(source, line, "expected a JSON object");

    PublicationRecord pub;
    pub.pub_id = require_string(obj, "pub_id", source, line);
    if (pub.pub_id.empty()) schema_error(source, line, "pub_id must be non-empty");
    const json& year = require(obj, "year", source, line);
    if (!year.is_number_integer()) schema_error(source, line, "year must be an integer");
    pub.year = year.get<int>();
    auto doc_type = parse_doc_type(require_string(obj, "doc_type", source, line));
    if (!doc_type) schema_error(source, line, "doc_type must be article, conference_paper or other");
    pub.doc_type = *doc_type;
    pub.journal_id = require_string(obj, "journal_id", source, line);

    const json& authors = require(obj, "authors", source, line);
    if (!authors.is_array() || authors.empty()) schema_error(source, line, "authors must be a non-empty array");
    for (const json& a : authors) {
      if (!a.is_object()) schema_error(source, line, "each author must be an object");
      AuthorByline byline;
      byline.author_id = require_string(a, "author_id", source, line);
      if (byline.author_id.empty()) schema_error(source, line, "author_id must be non-empty");
      const json& affs = require(a, "affiliation_ids", source, line);
      if (!affs.is_array()) schema_error(source, line, "affiliation_ids must be an array");
      for (const json& aff : affs) {
        if (!aff.is_string()) schema_error(source, line, "affiliation ids must be strings");
        byline.affiliation_ids.push_back(aff.get<std::string>());
      }
      byline.country = require_string(a, "country", source, line);
      pub.authors.push_back(std::move(byline));
    }

    const json& cited = require(obj, "cited_asjc", source, line);
    if (!cited.is_array()) schema_error(source, line, "cited_asjc must be an array");
    for (const json& c : cited) {
      if (!c.is_number_integer()) schema_error(source, line, "cited_asjc entries must be integers");
      pub.cited_asjc.push_back(c.get<int>());
    }
    std::sort(pub.cited_asjc.begin(), pub.cited_asjc.end());
    out.push_back(std::move(pub));
    if (lines) lines->push_back(line);
  }
  return out;
}

std::vector<AuthorProfile> parse_authors(std::istream& in, std::string_view source) {
  std::vector<AuthorProfile> out;
  for (const auto& rec : read_table(in, source, {"author_id", "gender", "first_pub_year"})) {
    AuthorProfile p;
    p.author_id = rec.fields[0];
    if (p.author_id.empty()) schema_error(source, rec.line, "author_id must be non-empty");
    auto g = parse_gender(rec.fields[1]);
    if (!g) schema_error(source, rec.line, "gender must be M, F or U");
    p.gender = *g;
    if (!rec.fields[2].empty()) {
      auto y = to_int(rec.fields[2]);
      if (!y) schema_error(source, rec.line, "first_pub_year must be an integer or empty");
      p.first_pub_year = *y;
    }
    out.push_back(std::move(p));
  }
  require_unique(out, [](const AuthorProfile& p) { return p.author_id; }, source, "author_id");
  return out;
}

std::vector<JournalRank> parse_journals(std::istream& in, std::string_view source) {
  std::vector<JournalRank> out;
  for (const auto& rec : read_table(in, source, {"journal_id", "citescore_percentile"})) {
    if (rec.fields[0].empty()) schema_error(source, rec.line, "journal_id must be non-empty");
    auto pct = to_int(rec.fields[1]);
    if (!pct || *pct < 0 || *pct > 99) schema_error(source, rec.line, "citescore_percentile must be an integer in [0, 99]");
    out.push_back(JournalRank{rec.fields[0], *pct});
  }
  require_unique(out, [](const JournalRank& j) { return j.journal_id; }, source, "journal_id");
  return out;
}

std::vector<InstitutionFlag> parse_institutions(std::istream& in, std::string_view source) {
  std::vector<InstitutionFlag> out;
  for (const auto& rec : read_table(in, source, {"affiliation_id", "research_intensive"})) {
    if (rec.fields[0].empty()) schema_error(source, rec.line, "affiliation_id must be non-empty");
    if (rec.fields[1] != "0" && rec.fields[1] != "1") schema_error(source, rec.line, "research_intensive must be 0 or 1");
    out.push_back(InstitutionFlag{rec.fields[0], rec.fields[1] == "1"});
  }
  require_unique(out, [](const InstitutionFlag& f) { return f.affiliation_id; }, source, "affiliation_id");
  return out;
}

Corpus assemble_corpus(RawTables tables, const RunConfig& config) {
  Corpus corpus;
  LoadReport& report = corpus.report;
  report.lines_read = tables.publications.size();

  {
    std::unordered_map<std::string, std::size_t> first_line;
    for (std::size_t i = 0; i < tables.publications.size(); ++i) {
      const std::size_t line = i < tables.publication_lines.size() ? tables.publication_lines[i] : i + 1;
      auto [it, inserted] = first_line.emplace(tables.publications[i].pub_id, line);
      if (!inserted) {
        throw ValidationError(tables.publications_source + ":" + std::to_string(line) + ": duplicate pub_id '" +
                              tables.publications[i].pub_id + "' (first seen on line " + std::to_string(it->second) + ")");
      }
    }
  }

  for (const auto& j : tables.journals) corpus.journal_percentiles.emplace(j.journal_id, j.citescore_percentile);
  for (const auto& f : tables.institutions) corpus.institutions.emplace(f.affiliation_id, f.research_intensive);

  std::set<std::string> unranked;
  for (auto& pub : tables.publications) {
    if (pub.doc_type == DocType::Other) {
      ++report.excluded_doc_type;
      continue;
    }
    if (pub.year < config.window_start || pub.year > config.window_end) {
      ++report.excluded_window;
      continue;
    }
    if (!corpus.journal_percentiles.count(pub.journal_id)) {
      unranked.insert(pub.journal_id);
      ++report.unranked_publications;
    }
    corpus.publications.push_back(std::move(pub));
  }
  std::sort(corpus.publications.begin(), corpus.publications.end(),
            [](const PublicationRecord& a, const PublicationRecord& b) { return a.pub_id < b.pub_id; });
  report.unranked_journals.assign(unranked.begin(), unranked.end());
  for (const auto& j : report.unranked_journals) {
    report.warnings.push_back("unranked venue '" + j + "': prestige weight floored at 0.10");
  }

  corpus.profiles = std::move(tables.authors);
  std::unordered_set<std::string> known;
  for (const auto& p : corpus.profiles) known.insert(p.author_id);
  std::set<std::string> unknown;
  for (const auto& pub : corpus.publications) {
    for (const auto& a : pub.authors) {
      if (!known.count(a.author_id)) unknown.insert(a.author_id);
    }
  }
  for (const auto& id : unknown) {
    AuthorProfile p;
    p.author_id = id;
    p.gender = Gender::Unknown;
    p.synthesized = true;
    corpus.profiles.push_back(std::move(p));
  }
  report.unknown_authors.assign(unknown.begin(), unknown.end());
  if (!unknown.empty()) {
    report.warnings.push_back(std::to_string(unknown.size()) +
                              " byline author(s) missing from the author table; loaded with gender U");
  }
  std::sort(corpus.profiles.begin(), corpus.profiles.end(),
            [](const AuthorProfile& a, const AuthorProfile& b) { return a.author_id < b.author_id; });
  for (std::size_t i = 0; i < corpus.profiles.size(); ++i) corpus.profile_index.emplace(corpus.profiles[i].author_id, i);
  return corpus;
}

Corpus load_corpus(const CorpusPaths& paths, const RunConfig& config) {
  RawTables tables;
  tables.publications_source = paths.publications.string();
  auto pubs = std::async(std::launch::async, [&] {
    auto in = open_input(paths.publications);
    return parse_publications(in, paths.publications.string(), &tables.publication_lines);
  });
  auto authors = std::async(std::launch::async, [&] {
    auto in = open_input(paths.authors);
    return parse_authors(in, paths.authors.string());
  });
  auto journals = std::async(std::launch::async, [&] {
    auto in = open_input(paths.journals);
    return parse_journals(in, paths.journals.string());
  });
  auto institutions = std::async(std::launch::async, [&] {
    auto in = open_input(paths.institutions);
    return parse_institutions(in, paths.institutions.string());
  });
  // get() in a fixed order so the reported error does not depend on timing.
  tables.publications = pubs.get();
  tables.authors = authors.get();
  tables.journals = journals.get();
  tables.institutions = institutions.get();
  return assemble_corpus(std::move(tables), config);
}

std::size_t derive_first_pub_year(Corpus& corpus) {
  std::vector<std::optional<int>> earliest(corpus.profiles.size());
  for (const auto& pub : corpus.publications) {
    for (const auto& a : pub.authors) {
      auto& slot = earliest[corpus.profile_index.at(a.author_id)];
      if (!slot || pub.year < *slot) slot = pub.year;
    }
  }
  std::size_t derived = 0;
  for (std::size_t i = 0; i < corpus.profiles.size(); ++i) {
    AuthorProfile& p = corpus.profiles[i];
    if (p.first_pub_year) {
      if (earliest[i] && *p.first_pub_year > *earliest[i]) {
        throw ValidationError("author '" + p.author_id + "': declared first_pub_year " +
                              std::to_string(*p.first_pub_year) + " is later than a corpus publication from " +
                              std::to_string(*earliest[i]));
      }
    } else if (earliest[i]) {
      p.first_pub_year = *earliest[i];
      p.first_pub_year_approximate = true;
      ++derived;
    }
  }
  corpus.report.derived_first_years += derived;
  return derived;
}

}  // namespace toperf
