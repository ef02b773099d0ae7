#pragma once

// Run configuration and its key-value file grammar.
//
// Grammar (a subset of TOML):
//   # comment                      -- to end of line, outside quotes
//   key = value                    -- bare word, number, or "quoted string"
//   key = [a, b, c]                -- list; stored comma-joined
//   [section]                      -- following keys are read as section.key
//
// Keys are case-sensitive. Unknown keys are rejected so that a typo cannot
// silently change an analysis.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "toperf/types.hpp"

namespace toperf {

/// Ordered key -> raw value map with the line each key was read on.
struct KeyValues {
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  std::map<std::string, Entry> entries;
  std::string source;
};

KeyValues parse_key_values(std::istream& in, std::string_view source);
KeyValues read_key_values(const std::filesystem::path& path);

/// Splits a list value ("1,3, 5" or "[1,3,5]" already flattened) on commas.
std::vector<std::string> split_list(std::string_view value);

/// Typed value parsers; throw ValidationError naming the key.
int parse_int(const std::string& key, const std::string& value);
std::uint64_t parse_u64(const std::string& key, const std::string& value);
double parse_double(const std::string& key, const std::string& value);

struct CorpusPaths {
  std::filesystem::path publications;
  std::filesystem::path authors;
  std::filesystem::path journals;
  std::filesystem::path institutions;

  /// The four conventional file names inside `dir`.
  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

struct RunConfig {
  int window_start = 1992;
  int window_end = 2021;
  int period_length = 6;
  std::vector<Period> periods = make_periods(1992, 2021, 6);
  DisciplineWhitelist disciplines = DisciplineWhitelist::stemm_default();
  std::vector<double> thresholds{1.0, 3.0, 5.0, 10.0};  // top p% classes, strictly increasing
  std::vector<Measure> measures{kAllMeasures.begin(), kAllMeasures.end()};
  Measure measure = Measure::P1;  // default measure for metrics and regress
  double class_threshold = 10.0;  // default class for metrics and regress
  ShareBasis share_basis = ShareBasis::MeasureConsistent;
  std::string home_country = "PL";
  GenderUPolicy gender_u = GenderUPolicy::Keep;
  std::uint64_t seed = 1;
  GlmOptions glm;
  std::vector<Covariate> covariates{kAllCovariates.begin(), kAllCovariates.end()};
  CorpusPaths inputs = CorpusPaths::in_directory(".");
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;

  /// Applies one key. Throws ValidationError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  /// Throws ValidationError if any cross-field invariant fails.
  void validate() const;

  /// Canonical text of every analysis-relevant field. Paths and thread
  /// count are excluded: they cannot change results.
  std::string canonical() const;

  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;

  std::size_t threshold_index(double threshold) const;
};

/// Builds a config from a file; relative input paths resolve against the
/// file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from(const KeyValues& kv, const std::filesystem::path& base_dir);

}  // namespace toperf
