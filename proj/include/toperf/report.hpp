#pragma once

// Pipeline composition and the tidy output files.
//
// Every CSV starts with one metadata comment line
//   # toperf <version> config_hash=<hash> seed=<seed> [key=value ...]
// and every JSON document carries the same fields under "metadata". Rows
// are emitted in a fixed order and numbers in shortest round-trip form, so
// identical inputs give identical bytes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "toperf/classify.hpp"
#include "toperf/config.hpp"
#include "toperf/felogit.hpp"
#include "toperf/grouping.hpp"
#include "toperf/ingest.hpp"
#include "toperf/metrics.hpp"
#include "toperf/panel.hpp"

namespace toperf {

inline constexpr const char* kVersion = "0.1.0";

struct OutputMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;  // analysis choices beyond the config file

  static OutputMeta from(const RunConfig& config);
  std::string header() const;
};

/// Loads the inputs and fills derived first-publication years.
Corpus prepare_corpus(const RunConfig& config);

/// Panel with measures and covariates.
Panel prepare_panel(const Corpus& corpus, const RunConfig& config);

Classification prepare_classes(const Panel& panel, const RunConfig& config);

/// "all" for no dimensions, otherwise names joined by '+'.
std::string grouping_name(std::span<const Dimension> dims);

void write_panel(std::ostream& out, const OutputMeta& meta, const Panel& panel, bool with_measures);
void write_assignments(std::ostream& out, const OutputMeta& meta, const Panel& panel, const Classification& classes);

void write_class_counts_header(std::ostream& out, const OutputMeta& meta);
void write_class_counts(std::ostream& out, std::span<const Dimension> dims, const std::vector<ClassCountRow>& rows);

void write_shares_header(std::ostream& out, const OutputMeta& meta);
void write_shares(std::ostream& out, const ShareTable& table);

void write_rpi_header(std::ostream& out, const OutputMeta& meta);
void write_rpi(std::ostream& out, std::span<const Dimension> dims, const std::vector<RpiValue>& values);

void write_distribution_header(std::ostream& out, const OutputMeta& meta);
void write_distribution(std::ostream& out, const std::string& population, std::span<const Dimension> dims,
                        const std::vector<DistributionCell>& cells);

void write_correlations_header(std::ostream& out, const OutputMeta& meta);
void write_correlations(std::ostream& out, std::span<const Dimension> dims, const std::vector<CorrelationRow>& rows);

void write_coefficients(std::ostream& out, const OutputMeta& meta, const GlmFit& fit);
void write_fixed_effects(std::ostream& out, const OutputMeta& meta, const GlmFit& fit);
void write_fitstats(std::ostream& out, const OutputMeta& meta, const GlmFit& fit);
void write_collinearity(std::ostream& out, const OutputMeta& meta, const CollinearityReport& report);
void write_ci_overlap(std::ostream& out, const OutputMeta& meta, const std::string& label, const OverlapTable& table);

/// Run summary: version, canonical config, load and panel reports.
void write_run_metadata(std::ostream& out, const OutputMeta& meta, const RunConfig& config, const Corpus& corpus,
                        const Panel* panel, const std::vector<std::string>& warnings);

GlmSpec glm_spec_for(const RunConfig& config, Measure measure, double threshold);

/// Label of one regression in a grid, e.g. "p1_top10".
std::string fit_label(Measure measure, double threshold);

struct GridFit {
  Measure measure = Measure::P1;
  double threshold = 0;
  std::optional<GlmFit> fit;
  std::string error;  // set when the fit failed
  bool numeric_error = false;
};

/// Fits every measure x threshold model of the configuration in parallel;
/// failures are captured per fit.
std::vector<GridFit> fit_grid(const Panel& panel, const Classification& classes, const RunConfig& config);

/// Writes the complete output set under config.output_dir. `warnings`
/// receives the non-fatal messages (also recorded in metadata.json).
void write_report(const RunConfig& config, const OutputMeta& meta, std::vector<std::string>& warnings);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace toperf
