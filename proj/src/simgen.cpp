#include "toperf/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include "json.hpp"

#include "toperf/csv.hpp"
#include "toperf/error.hpp"
#include "toperf/logit_newton.hpp"
#include "toperf/parallel.hpp"
#include "toperf/rng.hpp"

namespace toperf {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kForeignCountries[] = {"DE", "US", "GB", "FR", "IT", "CZ"};
constexpr int kNonWhitelistFirst = 3300;
constexpr int kNonWhitelistLast = 3399;

std::string padded(char prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, value);
  return buf;
}

double uniform01(Engine& e) {
  boost::random::uniform_01<double> d;
  return d(e);
}

int uniform_int(Engine& e, int lo, int hi) {
  boost::random::uniform_int_distribution<int> d(lo, hi);
  return d(e);
}

int binomial(Engine& e, int trials, double p) {
  if (trials <= 0 || p <= 0) return 0;
  if (p >= 1) return trials;
  boost::random::binomial_distribution<int, double> d(trials, p);
  return d(e);
}

std::size_t pick_cdf(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

void check_prob(const char* name, double p) {
  if (!(p >= 0 && p <= 1)) throw ValidationError(std::string("simulation: ") + name + " must lie in [0, 1]");
}

bool is_weight_key(const std::string& key) { return key.rfind("weight.", 0) == 0; }

struct DrawnAuthor {
  TruthAuthor truth;
  std::size_t discipline = 0;
  std::vector<int> counts;  // per period; 0 = no publications
};

struct Pool {
  std::size_t period = 0;
  std::size_t discipline = 0;
  std::vector<std::size_t> slots;  // author indices, one per authorship
};

}  // namespace

void SimConfig::set(const std::string& key, const std::string& value) {
  if (is_weight_key(key)) {
    discipline_weights[key.substr(std::string("weight.").size())] = parse_double(key, value);
    return;
  }
  auto size = [&] { return static_cast<std::size_t>(parse_u64(key, value)); };
  if (key == "seed") seed = parse_u64(key, value);
  else if (key == "n_authors") n_authors = size();
  else if (key == "male_fraction") male_fraction = parse_double(key, value);
  else if (key == "unknown_gender_fraction") unknown_gender_fraction = parse_double(key, value);
  else if (key == "entry_year_min") entry_year_min = parse_int(key, value);
  else if (key == "entry_year_max") entry_year_max = parse_int(key, value);
  else if (key == "career_length_max") career_length_max = parse_int(key, value);
  else if (key == "activity_prob") activity_prob = parse_double(key, value);
  else if (key == "count_distribution") {
    if (value == "lotka") count_distribution = CountDistribution::Lotka;
    else if (value == "lognormal") count_distribution = CountDistribution::Lognormal;
    else if (value == "fixed") count_distribution = CountDistribution::Fixed;
    else throw ValidationError("simulation key 'count_distribution': expected lotka, lognormal or fixed");
  }
  else if (key == "lotka_alpha") lotka_alpha = parse_double(key, value);
  else if (key == "lotka_kmax") lotka_kmax = parse_int(key, value);
  else if (key == "lognormal_mu") lognormal_mu = parse_double(key, value);
  else if (key == "lognormal_sigma") lognormal_sigma = parse_double(key, value);
  else if (key == "fixed_count") fixed_count = parse_int(key, value);
  else if (key == "male_log_productivity") male_log_productivity = parse_double(key, value);
  else if (key == "age_log_productivity_slope") age_log_productivity_slope = parse_double(key, value);
  else if (key == "team_size_mean") team_size_mean = parse_double(key, value);
  else if (key == "team_size_max") team_size_max = parse_int(key, value);
  else if (key == "n_journals") n_journals = size();
  else if (key == "conference_prob") conference_prob = parse_double(key, value);
  else if (key == "unranked_venue_prob") unranked_venue_prob = parse_double(key, value);
  else if (key == "n_unranked_venues") n_unranked_venues = size();
  else if (key == "refs_min") refs_min = parse_int(key, value);
  else if (key == "refs_max") refs_max = parse_int(key, value);
  else if (key == "foreign_ref_prob") foreign_ref_prob = parse_double(key, value);
  else if (key == "nonwhitelist_ref_prob") nonwhitelist_ref_prob = parse_double(key, value);
  else if (key == "home_country") home_country = value;
  else if (key == "foreign_affiliation_prob") foreign_affiliation_prob = parse_double(key, value);
  else if (key == "n_institutions") n_institutions = size();
  else if (key == "n_research_intensive") n_research_intensive = size();
  else if (key == "research_intensive_prob") research_intensive_prob = parse_double(key, value);
  else if (key == "undeclared_first_year_prob") undeclared_first_year_prob = parse_double(key, value);
  else if (key == "window_start") window_start = parse_int(key, value);
  else if (key == "window_end") window_end = parse_int(key, value);
  else if (key == "period_length") period_length = parse_int(key, value);
  else throw ValidationError("unknown simulation key '" + key + "'");
}

void SimConfig::validate() const {
  if (n_authors == 0) throw ValidationError("simulation: n_authors must be positive");
  check_prob("male_fraction", male_fraction);
  check_prob("unknown_gender_fraction", unknown_gender_fraction);
  check_prob("activity_prob", activity_prob);
  check_prob("conference_prob", conference_prob);
  check_prob("unranked_venue_prob", unranked_venue_prob);
  check_prob("foreign_ref_prob", foreign_ref_prob);
  check_prob("nonwhitelist_ref_prob", nonwhitelist_ref_prob);
  check_prob("foreign_affiliation_prob", foreign_affiliation_prob);
  check_prob("research_intensive_prob", research_intensive_prob);
  check_prob("undeclared_first_year_prob", undeclared_first_year_prob);
  if (entry_year_min > entry_year_max) throw ValidationError("simulation: entry_year_min exceeds entry_year_max");
  if (career_length_max < 0) throw ValidationError("simulation: career_length_max must be non-negative");
  if (window_start > window_end || period_length < 1) throw ValidationError("simulation: invalid study window");
  if (count_distribution == CountDistribution::Lotka && (!(lotka_alpha > 0) || lotka_kmax < 1)) {
    throw ValidationError("simulation: Lotka needs alpha > 0 and kmax >= 1");
  }
  if (count_distribution == CountDistribution::Lognormal && !(lognormal_sigma >= 0)) {
    throw ValidationError("simulation: lognormal_sigma must be non-negative");
  }
  if (count_distribution == CountDistribution::Fixed && fixed_count < 1) {
    throw ValidationError("simulation: fixed_count must be at least 1");
  }
  if (!(team_size_mean >= 1) || team_size_max < 1) throw ValidationError("simulation: team sizes must be at least 1");
  if (n_journals == 0 && unranked_venue_prob < 1) throw ValidationError("simulation: n_journals must be positive");
  if (unranked_venue_prob > 0 && n_unranked_venues == 0) {
    throw ValidationError("simulation: n_unranked_venues must be positive");
  }
  if (refs_min < 1 || refs_max < refs_min) throw ValidationError("simulation: need 1 <= refs_min <= refs_max");
  if (home_country.empty()) throw ValidationError("simulation: home_country is empty");
  if (n_institutions == 0 || n_research_intensive > n_institutions) {
    throw ValidationError("simulation: need n_institutions > 0 and n_research_intensive <= n_institutions");
  }
  const auto whitelist = DisciplineWhitelist::stemm_default();
  double total = discipline_weights.empty() ? 1.0 : 0.0;
  for (const auto& [label, w] : discipline_weights) {
    if (!whitelist.index_of(label)) throw ValidationError("simulation: unknown discipline '" + label + "'");
    if (!(w >= 0)) throw ValidationError("simulation: discipline weights must be non-negative");
    total += w;
  }
  if (!(total > 0)) throw ValidationError("simulation: discipline weights sum to zero");
}

SimConfig sim_config_from(const KeyValues& kv) {
  SimConfig cfg;
  for (const auto& [key, entry] : kv.entries) {
    try {
      cfg.set(key, entry.value);
    } catch (const ValidationError& e) {
      throw ValidationError(kv.source + ":" + std::to_string(entry.line) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig run_config_for(const SimConfig& config) {
  RunConfig rc;
  rc.window_start = config.window_start;
  rc.window_end = config.window_end;
  rc.period_length = config.period_length;
  rc.periods = make_periods(config.window_start, config.window_end, config.period_length);
  rc.home_country = config.home_country;
  rc.seed = config.seed;
  return rc;
}

SimResult generate(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto periods = make_periods(cfg.window_start, cfg.window_end, cfg.period_length);
  const auto whitelist = DisciplineWhitelist::stemm_default();
  const std::size_t n_disc = whitelist.size();

  std::vector<double> disc_cdf(n_disc);
  for (std::size_t d = 0; d < n_disc; ++d) {
    double w = 1.0;
    if (!cfg.discipline_weights.empty()) {
      auto it = cfg.discipline_weights.find(whitelist.labels()[d]);
      w = it == cfg.discipline_weights.end() ? 0.0 : it->second;
    }
    disc_cdf[d] = (d ? disc_cdf[d - 1] : 0.0) + w;
  }
  std::vector<double> lotka_cdf;
  if (cfg.count_distribution == CountDistribution::Lotka) {
    for (int k = 1; k <= cfg.lotka_kmax; ++k) {
      lotka_cdf.push_back((lotka_cdf.empty() ? 0.0 : lotka_cdf.back()) + std::pow(k, -cfg.lotka_alpha));
    }
  }

  SimResult result;
  RawTables& tables = result.tables;

  Engine journal_engine = make_engine(stream_key(cfg.seed, {fnv1a64("journals")}));
  for (std::size_t j = 0; j < cfg.n_journals; ++j) {
    tables.journals.push_back({padded('J', j + 1, 4), uniform_int(journal_engine, 0, 99)});
  }
  for (std::size_t i = 0; i < cfg.n_institutions; ++i) {
    tables.institutions.push_back({padded('I', i + 1, 3), i < cfg.n_research_intensive});
  }

  // Authors and their per-period counts.
  std::vector<DrawnAuthor> authors(cfg.n_authors);
  parallel_for(cfg.n_authors, threads, [&](std::size_t i) {
    Engine e = make_engine(stream_key(cfg.seed, {fnv1a64("author"), i}));
    DrawnAuthor& a = authors[i];
    a.truth.author_id = padded('A', i + 1, 6);
    if (uniform01(e) < cfg.unknown_gender_fraction) {
      a.truth.gender = Gender::Unknown;
      uniform01(e);
    } else {
      a.truth.gender = uniform01(e) < cfg.male_fraction ? Gender::Male : Gender::Female;
    }
    a.truth.entry_year = uniform_int(e, cfg.entry_year_min, cfg.entry_year_max);
    a.discipline = pick_cdf(disc_cdf, uniform01(e));
    a.truth.discipline = whitelist.labels()[a.discipline];
    const std::size_t n_ri = cfg.n_research_intensive;
    const std::size_t n_rest = cfg.n_institutions - n_ri;
    bool ri = uniform01(e) < cfg.research_intensive_prob;
    if (n_ri == 0) ri = false;
    if (n_rest == 0) ri = true;
    const std::size_t inst = ri ? uniform_index(e, n_ri) : n_ri + uniform_index(e, n_rest);
    a.truth.institution = tables.institutions[inst].affiliation_id;
    a.truth.research_intensive = ri;
    a.truth.declared = !(uniform01(e) < cfg.undeclared_first_year_prob);

    a.counts.assign(periods.size(), 0);
    const double male = a.truth.gender == Gender::Male ? 1.0 : 0.0;
    for (const Period& p : periods) {
      const bool eligible =
          a.truth.entry_year <= p.end_year && a.truth.entry_year + cfg.career_length_max >= p.start_year;
      if (!eligible || !(uniform01(e) < cfg.activity_prob)) continue;
      double k0 = 1;
      switch (cfg.count_distribution) {
        case CountDistribution::Lotka: k0 = static_cast<double>(pick_cdf(lotka_cdf, uniform01(e)) + 1); break;
        case CountDistribution::Lognormal: {
          boost::random::normal_distribution<double> z;
          k0 = std::max(1.0, std::round(std::exp(cfg.lognormal_mu + cfg.lognormal_sigma * z(e))));
          break;
        }
        case CountDistribution::Fixed: k0 = cfg.fixed_count; break;
      }
      const int age = p.end_year - a.truth.entry_year;
      const double scale = std::exp(cfg.male_log_productivity * male + cfg.age_log_productivity_slope * age);
      a.counts[p.index] = std::max(1, static_cast<int>(std::lround(k0 * scale)));
    }
  });

  // Authorship slots per (period, discipline) pool.
  std::vector<Pool> pools(periods.size() * n_disc);
  for (std::size_t p = 0; p < periods.size(); ++p) {
    for (std::size_t d = 0; d < n_disc; ++d) pools[p * n_disc + d] = Pool{p, d, {}};
  }
  for (std::size_t i = 0; i < authors.size(); ++i) {
    for (std::size_t p = 0; p < periods.size(); ++p) {
      auto& slots = pools[p * n_disc + authors[i].discipline].slots;
      slots.insert(slots.end(), static_cast<std::size_t>(authors[i].counts[p]), i);
    }
  }

  std::vector<std::vector<PublicationRecord>> pool_pubs(pools.size());
  parallel_for(pools.size(), threads, [&](std::size_t pi) {
    Pool& pool = pools[pi];
    if (pool.slots.empty()) return;
    const Period& period = periods[pool.period];
    Engine e = make_engine(stream_key(cfg.seed, {fnv1a64("pool"), pool.period, pool.discipline}));
    portable_shuffle(pool.slots, e);
    std::deque<std::size_t> rest(pool.slots.begin(), pool.slots.end());
    const auto& home_range = whitelist.rules()[pool.discipline].code_ranges.front();

    while (!rest.empty()) {
      int team_size = 1;
      if (cfg.team_size_mean > 1) {
        boost::random::poisson_distribution<int, double> extra(cfg.team_size_mean - 1);
        team_size = std::min(cfg.team_size_max, 1 + extra(e));
      }
      std::vector<std::size_t> team;
      std::vector<std::size_t> skipped;
      while (static_cast<int>(team.size()) < team_size && !rest.empty()) {
        const std::size_t a = rest.front();
        rest.pop_front();
        if (std::find(team.begin(), team.end(), a) != team.end()) {
          skipped.push_back(a);
        } else {
          team.push_back(a);
        }
      }
      for (auto it = skipped.rbegin(); it != skipped.rend(); ++it) rest.push_front(*it);

      PublicationRecord pub;
      int earliest = period.start_year;
      for (std::size_t a : team) earliest = std::max(earliest, authors[a].truth.entry_year);
      pub.year = uniform_int(e, earliest, period.end_year);
      pub.doc_type = uniform01(e) < cfg.conference_prob ? DocType::ConferencePaper : DocType::Article;
      if (uniform01(e) < cfg.unranked_venue_prob) {
        pub.journal_id = padded('V', uniform_index(e, cfg.n_unranked_venues) + 1, 3);
      } else {
        pub.journal_id = tables.journals[uniform_index(e, cfg.n_journals)].journal_id;
      }

      const int refs = uniform_int(e, cfg.refs_min, cfg.refs_max);
      const int foreign = n_disc > 1 ? std::min(binomial(e, refs, cfg.foreign_ref_prob), (refs - 1) / 2) : 0;
      const int outside = std::min(binomial(e, refs - foreign, cfg.nonwhitelist_ref_prob), refs - 2 * foreign - 1);
      const int home = refs - foreign - outside;
      for (int r = 0; r < home; ++r) pub.cited_asjc.push_back(uniform_int(e, home_range.first, home_range.second));
      for (int r = 0; r < foreign; ++r) {
        std::size_t other = uniform_index(e, n_disc - 1);
        if (other >= pool.discipline) ++other;
        const auto& range = whitelist.rules()[other].code_ranges.front();
        pub.cited_asjc.push_back(uniform_int(e, range.first, range.second));
      }
      for (int r = 0; r < outside; ++r) pub.cited_asjc.push_back(uniform_int(e, kNonWhitelistFirst, kNonWhitelistLast));
      std::sort(pub.cited_asjc.begin(), pub.cited_asjc.end());

      for (std::size_t a : team) {
        AuthorByline b;
        b.author_id = authors[a].truth.author_id;
        b.affiliation_ids.push_back(authors[a].truth.institution);
        b.country = cfg.home_country;
        if (uniform01(e) < cfg.foreign_affiliation_prob) {
          const std::string cc = kForeignCountries[uniform_index(e, std::size(kForeignCountries))];
          b.affiliation_ids.push_back("X-" + cc);
          b.country = cc;
        }
        pub.authors.push_back(std::move(b));
      }
      pool_pubs[pi].push_back(std::move(pub));
    }
  });

  // Sequential ids in (period, discipline, packing) order.
  std::vector<std::vector<std::pair<double, int>>> team_acc(authors.size(),
                                                            std::vector<std::pair<double, int>>(periods.size()));
  result.truth.periods.resize(periods.size());
  for (std::size_t pi = 0; pi < pools.size(); ++pi) {
    for (auto& pub : pool_pubs[pi]) {
      pub.pub_id = padded('P', tables.publications.size() + 1, 7);
      const std::size_t p = pools[pi].period;
      ++result.truth.periods[p].publications;
      for (const auto& b : pub.authors) {
        const std::size_t a = static_cast<std::size_t>(std::stoul(b.author_id.substr(1))) - 1;
        team_acc[a][p].first += static_cast<double>(pub.authors.size());
        ++team_acc[a][p].second;
      }
      tables.publications.push_back(std::move(pub));
    }
  }
  if (tables.publications.empty()) throw ValidationError("simulation: configuration produces no publications");
  tables.publication_lines.resize(tables.publications.size());
  for (std::size_t i = 0; i < tables.publication_lines.size(); ++i) tables.publication_lines[i] = i + 1;
  tables.publications_source = "simulation";

  for (std::size_t i = 0; i < authors.size(); ++i) {
    const DrawnAuthor& a = authors[i];
    AuthorProfile profile;
    profile.author_id = a.truth.author_id;
    profile.gender = a.truth.gender;
    if (a.truth.declared) profile.first_pub_year = a.truth.entry_year;
    tables.authors.push_back(profile);
    result.truth.authors.push_back(a.truth);
    for (std::size_t p = 0; p < periods.size(); ++p) {
      if (a.counts[p] == 0) continue;
      if (team_acc[i][p].second != a.counts[p]) throw std::logic_error("simulation: authorship packing lost slots");
      TruthUnit u;
      u.author_id = a.truth.author_id;
      u.period_index = p;
      u.discipline = a.truth.discipline;
      u.count = a.counts[p];
      u.age = periods[p].end_year - a.truth.entry_year;
      u.avg_team_size = team_acc[i][p].first / team_acc[i][p].second;
      result.truth.units.push_back(std::move(u));
      ++result.truth.periods[p].units;
    }
  }
  for (std::size_t p = 0; p < periods.size(); ++p) result.truth.periods[p].index = p;
  return result;
}

void write_publications(std::ostream& out, const std::vector<PublicationRecord>& pubs) {
  for (const auto& pub : pubs) {
    ordered_json j;
    j["pub_id"] = pub.pub_id;
    j["year"] = pub.year;
    j["doc_type"] = to_string(pub.doc_type);
    j["journal_id"] = pub.journal_id;
    j["authors"] = ordered_json::array();
    for (const auto& b : pub.authors) {
      ordered_json a;
      a["author_id"] = b.author_id;
      a["affiliation_ids"] = b.affiliation_ids;
      a["country"] = b.country;
      j["authors"].push_back(std::move(a));
    }
    j["cited_asjc"] = pub.cited_asjc;
    out << j.dump() << '\n';
  }
}

void write_authors(std::ostream& out, const std::vector<AuthorProfile>& authors) {
  csv::Writer w(out);
  w.row({"author_id", "gender", "first_pub_year"});
  for (const auto& a : authors) {
    w.row({a.author_id, std::string(to_string(a.gender)),
           a.first_pub_year ? std::to_string(*a.first_pub_year) : std::string()});
  }
}

void write_journals(std::ostream& out, const std::vector<JournalRank>& journals) {
  csv::Writer w(out);
  w.row({"journal_id", "citescore_percentile"});
  for (const auto& j : journals) w.row({j.journal_id, std::to_string(j.citescore_percentile)});
}

void write_institutions(std::ostream& out, const std::vector<InstitutionFlag>& institutions) {
  csv::Writer w(out);
  w.row({"affiliation_id", "research_intensive"});
  for (const auto& i : institutions) w.row({i.affiliation_id, i.research_intensive ? "1" : "0"});
}

void write_ground_truth(std::ostream& out, const SimConfig& cfg, const GroundTruth& truth) {
  ordered_json j;
  ordered_json c;
  c["seed"] = cfg.seed;
  c["n_authors"] = cfg.n_authors;
  c["count_distribution"] = cfg.count_distribution == CountDistribution::Lotka       ? "lotka"
                            : cfg.count_distribution == CountDistribution::Lognormal ? "lognormal"
                                                                                     : "fixed";
  c["lotka_alpha"] = cfg.lotka_alpha;
  c["male_log_productivity"] = cfg.male_log_productivity;
  c["age_log_productivity_slope"] = cfg.age_log_productivity_slope;
  c["team_size_mean"] = cfg.team_size_mean;
  c["window_start"] = cfg.window_start;
  c["window_end"] = cfg.window_end;
  c["period_length"] = cfg.period_length;
  j["config"] = std::move(c);

  j["periods"] = ordered_json::array();
  for (const auto& p : truth.periods) {
    j["periods"].push_back({{"index", p.index}, {"units", p.units}, {"publications", p.publications}});
  }
  j["authors"] = ordered_json::array();
  for (const auto& a : truth.authors) {
    j["authors"].push_back({{"author_id", a.author_id},
                            {"gender", to_string(a.gender)},
                            {"entry_year", a.entry_year},
                            {"declared", a.declared},
                            {"discipline", a.discipline},
                            {"institution", a.institution},
                            {"research_intensive", a.research_intensive}});
  }
  j["units"] = ordered_json::array();
  for (const auto& u : truth.units) {
    j["units"].push_back({{"author_id", u.author_id},
                          {"period", u.period_index},
                          {"discipline", u.discipline},
                          {"count", u.count},
                          {"age", u.age},
                          {"avg_team_size", u.avg_team_size}});
  }
  out << j.dump(1) << '\n';
}

void write_simulation(const std::filesystem::path& dir, const SimConfig& config, const SimResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("publications.jsonl");
    write_publications(f, result.tables.publications);
  }
  {
    auto f = open("authors.csv");
    write_authors(f, result.tables.authors);
  }
  {
    auto f = open("journals.csv");
    write_journals(f, result.tables.journals);
  }
  {
    auto f = open("institutions.csv");
    write_institutions(f, result.tables.institutions);
  }
  auto f = open("ground_truth.json");
  write_ground_truth(f, config, result.truth);
}

LogitPanel simulate_logit_panel(const LogitDgpConfig& cfg) {
  if (cfg.n == 0) throw ValidationError("logit panel: n must be positive");
  if (cfg.period_shifts.empty()) throw ValidationError("logit panel: at least one period is required");
  LogitPanel out;
  Panel& panel = out.panel;
  const int n_periods = static_cast<int>(cfg.period_shifts.size());
  panel.periods = make_periods(1992, 1992 + 6 * n_periods - 1, 6);
  panel.discipline_labels = DisciplineWhitelist::stemm_default().labels();
  const std::size_t n_disc = panel.discipline_labels.size();
  std::vector<double> disc_shift = cfg.discipline_shifts;
  if (disc_shift.empty()) {
    for (std::size_t d = 0; d < n_disc; ++d) {
      disc_shift.push_back(-0.35 + 0.7 * static_cast<double>(d) / static_cast<double>(n_disc - 1));
    }
  }
  if (disc_shift.size() != n_disc) throw ValidationError("logit panel: one discipline shift per discipline");

  panel.units.resize(cfg.n);
  out.response.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Engine e = make_engine(stream_key(cfg.seed, {fnv1a64("logit"), i}));
    AuthorPeriodUnit& u = panel.units[i];
    u.author_id = padded('L', i + 1, 7);
    u.academic_age = uniform_int(e, 0, 40);
    u.age_group = age_group_for(u.academic_age);
    boost::random::exponential_distribution<double> team(1.0 / 3.0);
    u.covariates.avg_team_size = 1.0 + team(e);
    boost::random::uniform_real_distribution<double> collab(0.0, 100.0);
    u.covariates.collaboration_rate = collab(e);
    u.covariates.intl_collaboration_rate = uniform01(e) * u.covariates.collaboration_rate;
    boost::random::uniform_real_distribution<double> medperc(10.0, 99.0);
    u.covariates.median_journal_percentile = medperc(e);
    u.gender = uniform01(e) < 0.5 ? Gender::Male : Gender::Female;
    u.research_intensive = uniform01(e) < 0.3;
    u.period_index = uniform_index(e, static_cast<std::size_t>(n_periods));
    u.discipline = uniform_index(e, n_disc);

    const double eta = cfg.period_shifts[u.period_index] + disc_shift[u.discipline] +
                       cfg.beta_age * u.academic_age + cfg.beta_team * u.covariates.avg_team_size +
                       cfg.beta_intl * u.covariates.intl_collaboration_rate +
                       cfg.beta_collab * u.covariates.collaboration_rate +
                       cfg.beta_male * (u.gender == Gender::Male ? 1.0 : 0.0) +
                       cfg.beta_rest * (u.research_intensive ? 0.0 : 1.0) +
                       cfg.beta_medperc * u.covariates.median_journal_percentile;
    out.response[i] = uniform01(e) < logistic(eta) ? 1 : 0;
  }
  return out;
}

}  // namespace toperf
