#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "toperf/classify.hpp"
#include "toperf/config.hpp"
#include "toperf/ingest.hpp"
#include "toperf/panel.hpp"
#include "toperf/productivity.hpp"
#include "toperf/simgen.hpp"

namespace testing_support {

using namespace toperf;

struct Byline {
  std::string author;
  std::string affiliation;
  std::string country = "PL";
};

inline PublicationRecord pub(std::string id, int year, std::string journal, std::vector<Byline> authors,
                             std::vector<int> asjc = {1600}) {
  PublicationRecord p;
  p.pub_id = std::move(id);
  p.year = year;
  p.journal_id = std::move(journal);
  for (auto& b : authors) {
    AuthorByline ab;
    ab.author_id = b.author;
    if (!b.affiliation.empty()) ab.affiliation_ids.push_back(b.affiliation);
    ab.country = b.country;
    p.authors.push_back(std::move(ab));
  }
  p.cited_asjc = std::move(asjc);
  std::sort(p.cited_asjc.begin(), p.cited_asjc.end());
  return p;
}

inline AuthorProfile profile(std::string id, Gender g, std::optional<int> first) {
  AuthorProfile a;
  a.author_id = std::move(id);
  a.gender = g;
  a.first_pub_year = first;
  return a;
}

/// Corpus, panel with measures, classes.
struct Pipeline {
  Corpus corpus;
  Panel panel;
  Classification classes;
};

inline Pipeline run(RawTables tables, const RunConfig& config) {
  Pipeline p;
  p.corpus = assemble_corpus(std::move(tables), config);
  derive_first_pub_year(p.corpus);
  p.panel = build_panel(p.corpus, config);
  annotate_productivity(p.panel, p.corpus, config);
  p.classes = classify_panel(p.panel, config.measures, config.thresholds, config.threads);
  return p;
}

inline Pipeline simulate(const SimConfig& sim, unsigned threads = 1) {
  RunConfig config = run_config_for(sim);
  config.threads = threads;
  return run(generate(sim, threads).tables, config);
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("toperf_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
