#include "toperf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "toperf/csv.hpp"
#include "toperf/error.hpp"
#include "toperf/rng.hpp"

namespace toperf {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw ValidationError("config key '" + key + "': " + why + " (got '" + value + "')");
}

std::vector<std::pair<int, int>> parse_ranges(const std::string& key, const std::string& value) {
  std::vector<std::pair<int, int>> out;
  for (const auto& item : split_list(value)) {
    auto dash = item.find('-');
    if (dash == std::string::npos) {
      int c = parse_int(key, item);
      out.emplace_back(c, c);
    } else {
      out.emplace_back(parse_int(key, std::string(trim(item.substr(0, dash)))),
                       parse_int(key, std::string(trim(item.substr(dash + 1)))));
    }
  }
  if (out.empty()) bad_value(key, value, "expected ASJC codes or ranges");
  return out;
}

std::vector<Period> parse_periods(const std::string& key, const std::string& value) {
  std::vector<Period> out;
  for (const auto& item : split_list(value)) {
    auto dash = item.find('-');
    if (dash == std::string::npos) bad_value(key, value, "expected start-end year pairs");
    out.push_back(Period{out.size(), parse_int(key, std::string(trim(item.substr(0, dash)))),
                         parse_int(key, std::string(trim(item.substr(dash + 1))))});
  }
  return out;
}

}  // namespace

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) bad_value(key, value, "expected an integer");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    bad_value(key, value, "expected a non-negative integer");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value, "expected a number");
  }
  return out;
}

// "1600-1699,1500" -> ranges
KeyValues parse_key_values(std::istream& in, std::string_view source) {
  KeyValues kv;
  kv.source = std::string(source);
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto where = [&] { return kv.source + ":" + std::to_string(line_no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where() + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where() + "expected key = value");
    std::string key{trim(line.substr(0, eq))};
    if (key.empty()) throw ValidationError(where() + "empty key");
    if (!section.empty()) key = section + "." + key;
    std::string_view value = trim(line.substr(eq + 1));
    std::string stored;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') throw ValidationError(where() + "unterminated list");
      std::vector<std::string> items;
      for (const auto& item : split_list(value.substr(1, value.size() - 2))) items.push_back(unquote(item));
      for (std::size_t i = 0; i < items.size(); ++i) stored += (i ? "," : "") + items[i];
    } else {
      stored = unquote(value);
    }
    if (kv.entries.count(key)) throw ValidationError(where() + "duplicate key '" + key + "'");
    kv.entries[key] = KeyValues::Entry{stored, line_no};
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  return parse_key_values(in, path.string());
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string_view rest = value;
  while (true) {
    auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return CorpusPaths{dir / "publications.jsonl", dir / "authors.csv", dir / "journals.csv", dir / "institutions.csv"};
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "window_start") {
    window_start = parse_int(key, value);
    periods = make_periods(window_start, window_end, period_length);
  } else if (key == "window_end") {
    window_end = parse_int(key, value);
    periods = make_periods(window_start, window_end, period_length);
  } else if (key == "period_length") {
    period_length = parse_int(key, value);
    periods = make_periods(window_start, window_end, period_length);
  } else if (key == "periods") {
    periods = parse_periods(key, value);
  } else if (key.rfind("discipline.", 0) == 0) {
    // Handled in bulk by run_config_from; a lone override replaces one rule.
    std::vector<DisciplineWhitelist::Rule> rules = disciplines.rules();
    std::string label = key.substr(std::string("discipline.").size());
    auto ranges = parse_ranges(key, value);
    auto it = std::find_if(rules.begin(), rules.end(), [&](const auto& r) { return r.label == label; });
    if (it == rules.end()) {
      rules.push_back({label, ranges});
    } else {
      it->code_ranges = ranges;
    }
    disciplines = DisciplineWhitelist(std::move(rules));
  } else if (key == "thresholds") {
    thresholds.clear();
    for (const auto& t : split_list(value)) thresholds.push_back(parse_double(key, t));
  } else if (key == "measures") {
    measures.clear();
    for (const auto& m : split_list(value)) {
      auto parsed = parse_measure(m);
      if (!parsed) bad_value(key, value, "expected p1..p4");
      measures.push_back(*parsed);
    }
  } else if (key == "measure") {
    auto parsed = parse_measure(value);
    if (!parsed) bad_value(key, value, "expected p1..p4");
    measure = *parsed;
  } else if (key == "class") {
    class_threshold = parse_double(key, value);
  } else if (key == "share_basis") {
    auto parsed = parse_share_basis(value);
    if (!parsed) bad_value(key, value, "expected measure, p3 or coverage");
    share_basis = *parsed;
  } else if (key == "home_country") {
    home_country = value;
  } else if (key == "gender_u_policy") {
    auto parsed = parse_gender_u_policy(value);
    if (!parsed) bad_value(key, value, "expected keep or drop");
    gender_u = *parsed;
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "glm.max_iterations") {
    glm.max_iterations = parse_int(key, value);
  } else if (key == "glm.gradient_tolerance") {
    glm.gradient_tolerance = parse_double(key, value);
  } else if (key == "glm.loglik_tolerance") {
    glm.loglik_tolerance = parse_double(key, value);
  } else if (key == "glm.separation_bound") {
    glm.separation_bound = parse_double(key, value);
  } else if (key == "glm.covariates") {
    covariates.clear();
    for (const auto& name : split_list(value)) {
      auto parsed = parse_covariate(name);
      if (!parsed) bad_value(key, value, "unknown covariate '" + name + "'");
      covariates.push_back(*parsed);
    }
  } else if (key == "input.dir") {
    inputs = CorpusPaths::in_directory(value);
  } else if (key == "input.publications") {
    inputs.publications = value;
  } else if (key == "input.authors") {
    inputs.authors = value;
  } else if (key == "input.journals") {
    inputs.journals = value;
  } else if (key == "input.institutions") {
    inputs.institutions = value;
  } else if (key == "output_dir") {
    output_dir = value;
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_u64(key, value));
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  validate_periods(periods, window_start, window_end);
  if (disciplines.size() == 0) throw ValidationError("discipline whitelist is empty");
  if (thresholds.empty()) throw ValidationError("at least one class threshold is required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] < 100.0)) {
      throw ValidationError("class thresholds must lie in (0, 100)");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw ValidationError("class thresholds must be strictly increasing");
    }
  }
  if (measures.empty()) throw ValidationError("at least one measure is required");
  for (std::size_t i = 0; i < measures.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (measures[i] == measures[j]) throw ValidationError("measures list repeats " + std::string(to_string(measures[i])));
    }
  }
  if (std::find(measures.begin(), measures.end(), measure) == measures.end()) {
    throw ValidationError("default measure " + std::string(to_string(measure)) + " is not in the measures list");
  }
  threshold_index(class_threshold);
  for (std::size_t i = 0; i < covariates.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (covariates[i] == covariates[j]) {
        throw ValidationError("covariate listed twice: " + std::string(to_string(covariates[i])));
      }
    }
  }
  if (glm.max_iterations <= 0) throw ValidationError("glm.max_iterations must be positive");
  if (!(glm.gradient_tolerance > 0) || !(glm.loglik_tolerance > 0) || !(glm.separation_bound > 0)) {
    throw ValidationError("glm tolerances must be positive");
  }
}

std::size_t RunConfig::threshold_index(double threshold) const {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] == threshold) return i;
  }
  throw ValidationError("class " + csv::format_number(threshold) + " is not among the configured thresholds");
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "window=" << window_start << "-" << window_end << "\n";
  out << "periods=";
  for (const auto& p : periods) out << p.label() << ";";
  out << "\ndisciplines=";
  for (const auto& rule : disciplines.rules()) {
    out << rule.label << ":";
    for (auto [lo, hi] : rule.code_ranges) out << lo << "-" << hi << "/";
    out << ";";
  }
  out << "\nthresholds=";
  for (double t : thresholds) out << csv::format_number(t) << ";";
  out << "\nmeasures=";
  for (Measure m : measures) out << to_string(m) << ";";
  out << "\nmeasure=" << to_string(measure) << "\nclass=" << csv::format_number(class_threshold);
  out << "\nshare_basis=" << to_string(share_basis) << "\nhome_country=" << home_country;
  out << "\ngender_u_policy=" << to_string(gender_u) << "\nseed=" << seed;
  out << "\nglm=" << glm.max_iterations << ";" << csv::format_number(glm.gradient_tolerance) << ";"
      << csv::format_number(glm.loglik_tolerance) << ";" << csv::format_number(glm.separation_bound);
  out << "\ncovariates=";
  for (Covariate c : covariates) out << to_string(c) << ";";
  out << "\n";
  return out.str();
}

std::string RunConfig::hash() const {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(canonical());
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

RunConfig run_config_from(const KeyValues& kv, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  // Window keys first so an explicit period list is checked against them.
  for (const char* key : {"window_start", "window_end", "period_length"}) {
    if (auto it = kv.entries.find(key); it != kv.entries.end()) cfg.set(key, it->second.value);
  }
  std::vector<DisciplineWhitelist::Rule> rules;
  for (const auto& [key, entry] : kv.entries) {
    if (key == "window_start" || key == "window_end" || key == "period_length") continue;
    try {
      if (key.rfind("discipline.", 0) == 0) {
        rules.push_back({key.substr(std::string("discipline.").size()), parse_ranges(key, entry.value)});
        continue;
      }
      std::string value = entry.value;
      if (key.rfind("input.", 0) == 0 || key == "output_dir") {
        std::filesystem::path p = value;
        if (p.is_relative()) p = base_dir / p;
        value = p.lexically_normal().string();
      }
      cfg.set(key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(kv.source + ":" + std::to_string(entry.line) + ": " + e.what());
    }
  }
  // Any discipline key replaces the built-in whitelist as a whole.
  if (!rules.empty()) cfg.disciplines = DisciplineWhitelist(std::move(rules));
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from(read_key_values(path), path.parent_path());
}

}  // namespace toperf
