#include "toperf/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "toperf/csv.hpp"
#include "toperf/error.hpp"
#include "toperf/parallel.hpp"
#include "toperf/productivity.hpp"

namespace toperf {
namespace {

using ordered_json = nlohmann::ordered_json;
using csv::format_number;

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string group_text(const std::vector<std::string>& key) { return key.empty() ? "all" : join(key, '/'); }

std::string class_name(double threshold) { return "top" + format_number(threshold); }

std::string flag(bool b) { return b ? "1" : "0"; }

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

ordered_json meta_json(const OutputMeta& meta) {
  ordered_json j;
  j["tool"] = "toperf";
  j["version"] = kVersion;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  for (const auto& [k, v] : meta.params) j[k] = v;
  return j;
}

void begin_csv(std::ostream& out, const OutputMeta& meta, const std::vector<std::string>& columns) {
  csv::Writer w(out);
  w.comment(meta.header());
  w.row(columns);
}

const std::vector<std::vector<Dimension>>& share_groupings() {
  static const std::vector<std::vector<Dimension>> g{{},
                                                     {Dimension::Period},
                                                     {Dimension::Gender},
                                                     {Dimension::Affiliation},
                                                     {Dimension::AgeGroup},
                                                     {Dimension::Discipline}};
  return g;
}

const std::vector<std::vector<Dimension>>& rpi_groupings() {
  static const std::vector<std::vector<Dimension>> g{
      {}, {Dimension::Period}, {Dimension::Affiliation}, {Dimension::AgeGroup}, {Dimension::Discipline}};
  return g;
}

}  // namespace

OutputMeta OutputMeta::from(const RunConfig& config) {
  OutputMeta m;
  m.config_hash = config.hash();
  m.seed = config.seed;
  m.params.emplace_back("share_basis", std::string(to_string(config.share_basis)));
  return m;
}

std::string OutputMeta::header() const {
  std::string h = std::string("toperf ") + kVersion + " config_hash=" + config_hash + " seed=" + std::to_string(seed);
  for (const auto& [k, v] : params) h += " " + k + "=" + v;
  return h;
}

Corpus prepare_corpus(const RunConfig& config) {
  Corpus corpus = load_corpus(config.inputs, config);
  derive_first_pub_year(corpus);
  return corpus;
}

Panel prepare_panel(const Corpus& corpus, const RunConfig& config) {
  Panel panel = build_panel(corpus, config);
  annotate_productivity(panel, corpus, config);
  return panel;
}

Classification prepare_classes(const Panel& panel, const RunConfig& config) {
  return classify_panel(panel, config.measures, config.thresholds, config.threads);
}

std::string grouping_name(std::span<const Dimension> dims) {
  if (dims.empty()) return "all";
  std::string out;
  for (Dimension d : dims) out += (out.empty() ? "" : "+") + std::string(to_string(d));
  return out;
}

std::string fit_label(Measure measure, double threshold) {
  return std::string(to_string(measure)) + "_" + class_name(threshold);
}

GlmSpec glm_spec_for(const RunConfig& config, Measure measure, double threshold) {
  GlmSpec spec;
  spec.threshold = threshold;
  spec.measure = measure;
  spec.covariates = config.covariates;
  spec.options = config.glm;
  return spec;
}

void write_panel(std::ostream& out, const OutputMeta& meta, const Panel& panel, bool with_measures) {
  std::vector<std::string> cols{"author_id",          "period",
                                "discipline",         "academic_age",
                                "age_group",          "gender",
                                "research_intensive", "first_year_approximate",
                                "discipline_tie_broken", "n_pubs"};
  if (with_measures) {
    for (const char* c : {"p1", "p2", "p3", "p4", "team", "collab", "intl", "medperc"}) cols.emplace_back(c);
  }
  begin_csv(out, meta, cols);
  csv::Writer w(out);
  for (const auto& u : panel.units) {
    std::vector<std::string> row{u.author_id,
                                 panel.periods[u.period_index].label(),
                                 panel.discipline_labels[u.discipline],
                                 std::to_string(u.academic_age),
                                 std::string(to_string(u.age_group)),
                                 std::string(to_string(u.gender)),
                                 flag(u.research_intensive),
                                 flag(u.first_year_approximate),
                                 flag(u.discipline_tie_broken),
                                 std::to_string(u.publications.size())};
    if (with_measures) {
      for (double v : {u.measures.p1, u.measures.p2, u.measures.p3, u.measures.p4, u.covariates.avg_team_size,
                       u.covariates.collaboration_rate, u.covariates.intl_collaboration_rate,
                       u.covariates.median_journal_percentile}) {
        row.push_back(format_number(v));
      }
    }
    w.row(row);
  }
}

void write_assignments(std::ostream& out, const OutputMeta& meta, const Panel& panel, const Classification& classes) {
  std::vector<std::string> cols{"author_id", "period", "discipline", "measure", "rank", "cohort_size"};
  for (auto t = classes.thresholds.rbegin(); t != classes.thresholds.rend(); ++t) cols.push_back(class_name(*t));
  begin_csv(out, meta, cols);
  csv::Writer w(out);
  for (const auto& a : classes.assignments) {
    const auto& u = panel.units[a.unit];
    std::vector<std::string> row{u.author_id,
                                 panel.periods[u.period_index].label(),
                                 panel.discipline_labels[u.discipline],
                                 std::string(to_string(a.measure)),
                                 std::to_string(a.rank),
                                 std::to_string(a.cohort_size)};
    for (std::size_t t = classes.thresholds.size(); t-- > 0;) row.push_back(flag(a.in_class(t)));
    w.row(row);
  }
}

void write_class_counts_header(std::ostream& out, const OutputMeta& meta) {
  begin_csv(out, meta,
            {"grouping", "group", "class", "measure", "count", "group_units", "percent_of_class", "percent_of_group"});
}

void write_class_counts(std::ostream& out, std::span<const Dimension> dims, const std::vector<ClassCountRow>& rows) {
  csv::Writer w(out);
  const std::string g = grouping_name(dims);
  for (const auto& r : rows) {
    w.row({g, group_text(r.key), class_name(r.threshold), std::string(to_string(r.measure)), std::to_string(r.count),
           std::to_string(r.group_units), format_number(r.percent_of_class), format_number(r.percent_of_group)});
  }
}

void write_shares_header(std::ostream& out, const OutputMeta& meta) {
  begin_csv(out, meta,
            {"grouping", "group", "class", "measure", "basis", "segment", "share_percent", "numerator", "denominator"});
}

void write_shares(std::ostream& out, const ShareTable& table) {
  csv::Writer w(out);
  const std::string g = grouping_name(table.dims);
  for (const auto& r : table.rows) {
    w.row({g, group_text(r.key), class_name(r.threshold), std::string(to_string(r.measure)),
           std::string(to_string(table.basis)), r.segment == Segment::Top ? "top" : "rest",
           format_number(r.share_percent), format_number(r.numerator), format_number(r.denominator)});
  }
}

void write_rpi_header(std::ostream& out, const OutputMeta& meta) {
  begin_csv(out, meta,
            {"grouping", "group", "class", "measure", "tp_men", "all_men", "tp_women", "all_women", "rpi_men",
             "rpi_women"});
}

void write_rpi(std::ostream& out, std::span<const Dimension> dims, const std::vector<RpiValue>& values) {
  csv::Writer w(out);
  const std::string g = grouping_name(dims);
  for (const auto& v : values) {
    w.row({g, group_text(v.key), class_name(v.threshold), std::string(to_string(v.measure)),
           std::to_string(v.counts.tp_men), std::to_string(v.counts.all_men), std::to_string(v.counts.tp_women),
           std::to_string(v.counts.all_women), optional_number(v.rpi_men), optional_number(v.rpi_women)});
  }
}

void write_distribution_header(std::ostream& out, const OutputMeta& meta) {
  begin_csv(out, meta, {"population", "grouping", "group", "column", "count", "column_percent"});
}

void write_distribution(std::ostream& out, const std::string& population, std::span<const Dimension> dims,
                        const std::vector<DistributionCell>& cells) {
  csv::Writer w(out);
  const std::string g = grouping_name(dims);
  for (const auto& c : cells) {
    w.row({population, g, group_text(c.row_key), c.column, std::to_string(c.count), format_number(c.column_percent)});
  }
}

void write_correlations_header(std::ostream& out, const OutputMeta& meta) {
  begin_csv(out, meta, {"grouping", "group", "measure_a", "measure_b", "pearson_r", "n"});
}

void write_correlations(std::ostream& out, std::span<const Dimension> dims, const std::vector<CorrelationRow>& rows) {
  csv::Writer w(out);
  const std::string g = grouping_name(dims);
  for (const auto& r : rows) {
    w.row({g, group_text(r.key), std::string(to_string(r.a)), std::string(to_string(r.b)),
           optional_number(r.pearson_r), std::to_string(r.n)});
  }
}

void write_coefficients(std::ostream& out, const OutputMeta& meta, const GlmFit& fit) {
  begin_csv(out, meta, {"name", "beta", "se", "exp_b", "ci_low", "ci_high", "z", "p"});
  csv::Writer w(out);
  for (const auto& c : fit.coefficients) {
    w.row({c.name, format_number(c.beta), format_number(c.se), format_number(c.exp_b), format_number(c.ci_low),
           format_number(c.ci_high), format_number(c.z), format_number(c.p_value)});
  }
}

void write_fixed_effects(std::ostream& out, const OutputMeta& meta, const GlmFit& fit) {
  begin_csv(out, meta, {"kind", "level", "shift", "se"});
  csv::Writer w(out);
  for (const auto& f : fit.fixed_effects) w.row({f.kind, f.level, format_number(f.shift), format_number(f.se)});
}

void write_fitstats(std::ostream& out, const OutputMeta& meta, const GlmFit& fit) {
  ordered_json j;
  j["metadata"] = meta_json(meta);
  j["class"] = class_name(fit.spec.threshold);
  j["measure"] = to_string(fit.spec.measure);
  j["discipline_coding"] = fit.spec.coding == DisciplineCoding::SumToZero ? "sum_to_zero" : "reference";
  j["loglik_full"] = fit.loglik_full;
  j["loglik_null"] = fit.loglik_null;
  j["mcfadden"] = fit.mcfadden_r2;
  j["n"] = fit.n_obs;
  j["n_success"] = fit.n_success;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["gradient_max_norm"] = fit.gradient_max_norm;
  j["stop_reason"] = fit.stop_reason;
  out << j.dump(2) << '\n';
}

void write_collinearity(std::ostream& out, const OutputMeta& meta, const CollinearityReport& report) {
  begin_csv(out, meta, {"covariate", "inverse_correlation_diagonal"});
  csv::Writer w(out);
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    w.row({report.names[i], format_number(report.diagonal(static_cast<Eigen::Index>(i)))});
  }
}

void write_ci_overlap(std::ostream& out, const OutputMeta& meta, const std::string& label, const OverlapTable& table) {
  std::vector<std::string> cols{"class", "covariate", "fit"};
  cols.insert(cols.end(), table.fit_labels.begin(), table.fit_labels.end());
  begin_csv(out, meta, cols);
  csv::Writer w(out);
  for (const auto& r : table.rows) {
    std::vector<std::string> row{label, r.covariate, r.fit_label};
    for (bool b : r.overlaps) row.push_back(flag(b));
    w.row(row);
  }
}

void write_run_metadata(std::ostream& out, const OutputMeta& meta, const RunConfig& config, const Corpus& corpus,
                        const Panel* panel, const std::vector<std::string>& warnings) {
  ordered_json j;
  j["metadata"] = meta_json(meta);
  std::vector<std::string> lines;
  std::istringstream canon(config.canonical());
  for (std::string line; std::getline(canon, line);) lines.push_back(line);
  j["config"] = lines;
  const LoadReport& r = corpus.report;
  j["corpus"] = {{"lines_read", r.lines_read},
                 {"publications", corpus.publications.size()},
                 {"profiles", corpus.profiles.size()},
                 {"excluded_doc_type", r.excluded_doc_type},
                 {"excluded_window", r.excluded_window},
                 {"unranked_journals", r.unranked_journals},
                 {"unranked_publications", r.unranked_publications},
                 {"synthesized_profiles", r.unknown_authors.size()},
                 {"derived_first_years", r.derived_first_years},
                 {"warnings", r.warnings}};
  if (panel) {
    ordered_json periods = ordered_json::array();
    for (const auto& p : panel->periods) periods.push_back({{"period", p.label()}, {"units", panel->units_in_period(p.index)}});
    const PanelReport& pr = panel->report;
    j["panel"] = {{"units", panel->units.size()},
                  {"periods", periods},
                  {"dropped_no_discipline", pr.dropped_no_discipline},
                  {"dropped_no_first_year", pr.dropped_no_first_year},
                  {"dropped_gender_unknown", pr.dropped_gender_unknown},
                  {"discipline_ties", pr.discipline_ties},
                  {"affiliation_ties_resolved_research_intensive", pr.affiliation_ties}};
  }
  j["warnings"] = warnings;
  out << j.dump(2) << '\n';
}

std::vector<GridFit> fit_grid(const Panel& panel, const Classification& classes, const RunConfig& config) {
  std::vector<GridFit> grid;
  for (Measure m : config.measures) {
    for (double t : config.thresholds) grid.push_back(GridFit{m, t, std::nullopt, {}, false});
  }
  parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    GridFit& g = grid[i];
    try {
      g.fit = fit(panel, classes, glm_spec_for(config, g.measure, g.threshold));
    } catch (const NumericError& e) {
      g.error = e.what();
      g.numeric_error = true;
    } catch (const ValidationError& e) {
      g.error = e.what();
    }
  });
  return grid;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  return f;
}

void write_report(const RunConfig& config, const OutputMeta& meta, std::vector<std::string>& warnings) {
  const auto& dir = config.output_dir;
  Corpus corpus = prepare_corpus(config);
  Panel panel = prepare_panel(corpus, config);
  Classification classes = prepare_classes(panel, config);
  warnings.insert(warnings.end(), corpus.report.warnings.begin(), corpus.report.warnings.end());

  {
    auto f = open_output(dir / "panel.csv");
    write_panel(f, meta, panel, true);
  }
  {
    auto f = open_output(dir / "assignments.csv");
    write_assignments(f, meta, panel, classes);
  }
  {
    auto f = open_output(dir / "class_counts.csv");
    write_class_counts_header(f, meta);
    for (const auto& dims : share_groupings()) write_class_counts(f, dims, class_counts(panel, classes, dims));
  }
  {
    auto f = open_output(dir / "shares.csv");
    write_shares_header(f, meta);
    for (Measure m : config.measures) {
      for (double t : config.thresholds) {
        for (const auto& dims : share_groupings()) {
          auto table = concentration_share(panel, classes, t, m, config.share_basis, dims);
          warnings.insert(warnings.end(), table.warnings.begin(), table.warnings.end());
          write_shares(f, table);
        }
      }
    }
  }
  {
    auto f = open_output(dir / "rpi.csv");
    write_rpi_header(f, meta);
    for (Measure m : config.measures) {
      for (double t : config.thresholds) {
        for (const auto& dims : rpi_groupings()) write_rpi(f, dims, rpi(panel, classes, t, m, dims));
      }
    }
  }
  {
    auto f = open_output(dir / "distribution.csv");
    write_distribution_header(f, meta);
    const ClassFilter filter{&classes, config.class_threshold, config.measure};
    const std::string members = class_name(config.class_threshold) + "_" + std::string(to_string(config.measure));
    for (Dimension d : {Dimension::Gender, Dimension::Affiliation, Dimension::AgeGroup, Dimension::Discipline}) {
      const std::vector<Dimension> dims{d};
      write_distribution(f, "all", dims, distribution_table(panel, dims, Dimension::Period));
      write_distribution(f, members, dims, distribution_table(panel, dims, Dimension::Period, filter));
    }
  }
  {
    auto f = open_output(dir / "correlations.csv");
    write_correlations_header(f, meta);
    static const std::vector<std::vector<Dimension>> groupings{
        {}, {Dimension::Discipline}, {Dimension::AgeGroup}, {Dimension::Gender}, {Dimension::Affiliation}};
    for (const auto& dims : groupings) write_correlations(f, dims, measure_correlations(panel, dims));
  }

  auto grid = fit_grid(panel, classes, config);
  for (const auto& g : grid) {
    const auto sub = dir / "regress" / fit_label(g.measure, g.threshold);
    if (!g.fit) {
      warnings.push_back("regression " + fit_label(g.measure, g.threshold) + " failed: " + g.error);
      auto f = open_output(sub / "fitstats.json");
      ordered_json j;
      j["metadata"] = meta_json(meta);
      j["class"] = class_name(g.threshold);
      j["measure"] = to_string(g.measure);
      j["error"] = g.error;
      f << j.dump(2) << '\n';
      continue;
    }
    auto c = open_output(sub / "coefficients.csv");
    write_coefficients(c, meta, *g.fit);
    auto fe = open_output(sub / "fixed_effects.csv");
    write_fixed_effects(fe, meta, *g.fit);
    auto fs = open_output(sub / "fitstats.json");
    write_fitstats(fs, meta, *g.fit);
  }

  if (config.covariates.size() >= 2) {
    try {
      const auto rows = fit_rows(panel, config.covariates);
      std::vector<std::string> names;
      for (Covariate c : config.covariates) names.emplace_back(to_string(c));
      auto report = collinearity_diagnostic(covariate_matrix(panel, rows, config.covariates), names);
      auto f = open_output(dir / "collinearity.csv");
      write_collinearity(f, meta, report);
    } catch (const std::runtime_error& e) {
      warnings.push_back(std::string("collinearity diagnostic skipped: ") + e.what());
    }
  }

  {
    auto f = open_output(dir / "ci_overlap.csv");
    bool header_written = false;
    for (double t : config.thresholds) {
      std::vector<GlmFit> fits;
      std::vector<std::string> labels;
      for (const auto& g : grid) {
        if (g.threshold == t && g.fit) {
          fits.push_back(*g.fit);
          labels.emplace_back(to_string(g.measure));
        }
      }
      if (fits.size() < 2) {
        warnings.push_back("CI overlap for " + class_name(t) + " skipped: fewer than two successful fits");
        continue;
      }
      auto table = ci_overlap_report(fits, labels);
      if (!header_written) {
        std::vector<std::string> cols{"class", "covariate", "fit"};
        for (Measure m : config.measures) cols.emplace_back(to_string(m));
        begin_csv(f, meta, cols);
        header_written = true;
      }
      csv::Writer w(f);
      for (const auto& r : table.rows) {
        std::vector<std::string> row{class_name(t), r.covariate, r.fit_label};
        for (Measure m : config.measures) {
          auto it = std::find(labels.begin(), labels.end(), std::string(to_string(m)));
          row.push_back(it == labels.end() ? "NA" : flag(r.overlaps[static_cast<std::size_t>(it - labels.begin())]));
        }
        w.row(row);
      }
    }
    if (!header_written) csv::Writer(f).comment(meta.header());
  }

  auto f = open_output(dir / "metadata.json");
  write_run_metadata(f, meta, config, corpus, &panel, warnings);
}

}  // namespace toperf
