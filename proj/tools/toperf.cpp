// toperf: command-line front end for the top-performer analysis pipeline.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toperf/classify.hpp"
#include "toperf/config.hpp"
#include "toperf/csv.hpp"
#include "toperf/error.hpp"
#include "toperf/felogit.hpp"
#include "toperf/grouping.hpp"
#include "toperf/ingest.hpp"
#include "toperf/metrics.hpp"
#include "toperf/panel.hpp"
#include "toperf/report.hpp"
#include "toperf/simgen.hpp"

namespace fs = std::filesystem;
using namespace toperf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitUsage = 64;

struct Options {
  std::string config_path;
  std::string input_dir;
  std::string out_dir;
  unsigned threads = 0;
  bool threads_given = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> class_threshold;
  std::string measure;
  std::string group_by;
  std::string column;
  std::string share_basis;
  std::string coding = "sum";
  bool members_only = false;
  std::vector<std::string> overrides;  // key=value
  // simulate
  std::string sim_config_path;
  std::vector<std::string> sim_params;
};

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError("expected key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

struct Run {
  RunConfig config;
  OutputMeta meta;
};

/// Config file, then generic overrides, then the dedicated flags.
Run make_run(const Options& o) {
  Run r;
  if (!o.config_path.empty()) {
    if (!fs::exists(o.config_path)) throw ValidationError("config file not found: " + o.config_path);
    r.config = load_run_config(o.config_path);
  }
  RunConfig& c = r.config;
  std::vector<std::pair<std::string, std::string>> recorded;
  for (const auto& text : o.overrides) {
    auto [k, v] = split_assignment(text);
    c.set(k, v);
    recorded.emplace_back(k, v);
  }
  if (!o.input_dir.empty()) c.inputs = CorpusPaths::in_directory(o.input_dir);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.threads_given) c.threads = o.threads;
  if (o.seed) {
    c.set("seed", std::to_string(*o.seed));
    recorded.emplace_back("seed", std::to_string(*o.seed));
  }
  if (!o.share_basis.empty()) {
    c.set("share_basis", o.share_basis);
    recorded.emplace_back("share_basis", o.share_basis);
  }
  if (!o.measure.empty()) {
    c.set("measure", o.measure);
    if (std::find(c.measures.begin(), c.measures.end(), c.measure) == c.measures.end()) c.measures.push_back(c.measure);
    recorded.emplace_back("measure", std::string(to_string(c.measure)));
  }
  if (o.class_threshold) {
    c.class_threshold = *o.class_threshold;
    if (std::find(c.thresholds.begin(), c.thresholds.end(), c.class_threshold) == c.thresholds.end()) {
      c.thresholds.push_back(c.class_threshold);
      std::sort(c.thresholds.begin(), c.thresholds.end());
    }
    recorded.emplace_back("class", csv::format_number(c.class_threshold));
  }
  c.validate();
  r.meta = OutputMeta::from(c);
  for (auto& kv : recorded) {
    if (kv.first == "share_basis") continue;  // already part of every header
    r.meta.params.push_back(kv);
  }
  if (!o.group_by.empty()) r.meta.params.emplace_back("group_by", o.group_by);
  return r;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_validate(const Options& o) {
  Run r = make_run(o);
  Corpus corpus = prepare_corpus(r.config);
  Panel panel = build_panel(corpus, r.config);
  print_warnings(corpus.report.warnings);
  const LoadReport& rep = corpus.report;
  std::cout << "publications: " << corpus.publications.size() << " (read " << rep.lines_read << ", excluded "
            << rep.excluded_doc_type << " by document type, " << rep.excluded_window << " outside the window)\n"
            << "authors: " << corpus.profiles.size() << " (" << rep.unknown_authors.size()
            << " synthesized, " << rep.derived_first_years << " first years derived)\n"
            << "unranked venues: " << rep.unranked_journals.size() << " covering " << rep.unranked_publications
            << " publications\n"
            << "panel units: " << panel.units.size() << " (dropped " << panel.report.dropped_no_discipline
            << " without discipline, " << panel.report.dropped_no_first_year << " without first year)\n"
            << "ok\n";
  return kExitOk;
}

int cmd_panel(const Options& o, bool with_measures) {
  Run r = make_run(o);
  Corpus corpus = prepare_corpus(r.config);
  Panel panel = with_measures ? prepare_panel(corpus, r.config) : build_panel(corpus, r.config);
  print_warnings(corpus.report.warnings);
  auto f = open_output(r.config.output_dir / "panel.csv");
  write_panel(f, r.meta, panel, with_measures);
  return kExitOk;
}

int cmd_classify(const Options& o) {
  Run r = make_run(o);
  Corpus corpus = prepare_corpus(r.config);
  Panel panel = prepare_panel(corpus, r.config);
  Classification classes = prepare_classes(panel, r.config);
  print_warnings(corpus.report.warnings);
  {
    auto f = open_output(r.config.output_dir / "assignments.csv");
    write_assignments(f, r.meta, panel, classes);
  }
  const auto dims = parse_dimensions(o.group_by.empty() ? "period" : o.group_by);
  auto f = open_output(r.config.output_dir / "class_counts.csv");
  write_class_counts_header(f, r.meta);
  write_class_counts(f, dims, class_counts(panel, classes, dims));
  return kExitOk;
}

int cmd_metrics(const Options& o, const std::string& which) {
  Run r = make_run(o);
  const RunConfig& c = r.config;
  Corpus corpus = prepare_corpus(c);
  Panel panel = prepare_panel(corpus, c);
  Classification classes = prepare_classes(panel, c);
  std::vector<std::string> warnings = corpus.report.warnings;
  const auto dims = parse_dimensions(o.group_by);

  if (which == "shares") {
    auto table = concentration_share(panel, classes, c.class_threshold, c.measure, c.share_basis, dims);
    warnings.insert(warnings.end(), table.warnings.begin(), table.warnings.end());
    auto f = open_output(c.output_dir / "shares.csv");
    write_shares_header(f, r.meta);
    write_shares(f, table);
  } else if (which == "rpi") {
    auto values = rpi(panel, classes, c.class_threshold, c.measure, dims);
    for (const auto& v : values) {
      if (!v.rpi_men) warnings.push_back("RPI undefined for group '" + grouping_name(dims) + "' cell with a zero count");
    }
    auto f = open_output(c.output_dir / "rpi.csv");
    write_rpi_header(f, r.meta);
    write_rpi(f, dims, values);
  } else if (which == "tables") {
    std::optional<Dimension> column;
    if (!o.column.empty() && o.column != "none") {
      column = parse_dimension(o.column);
      if (!column) throw ValidationError("unknown column dimension '" + o.column + "'");
    }
    std::optional<ClassFilter> filter;
    std::string population = "all";
    if (o.members_only) {
      filter = ClassFilter{&classes, c.class_threshold, c.measure};
      population = "top" + csv::format_number(c.class_threshold) + "_" + std::string(to_string(c.measure));
    }
    {
      auto f = open_output(c.output_dir / "distribution.csv");
      write_distribution_header(f, r.meta);
      write_distribution(f, population, dims, distribution_table(panel, dims, column, filter));
    }
    auto f = open_output(c.output_dir / "class_counts.csv");
    write_class_counts_header(f, r.meta);
    write_class_counts(f, dims, class_counts(panel, classes, dims));
  } else {
    auto f = open_output(c.output_dir / "correlations.csv");
    write_correlations_header(f, r.meta);
    write_correlations(f, dims, measure_correlations(panel, dims));
  }
  print_warnings(warnings);
  return kExitOk;
}

int cmd_regress(const Options& o) {
  Run r = make_run(o);
  const RunConfig& c = r.config;
  Corpus corpus = prepare_corpus(c);
  Panel panel = prepare_panel(corpus, c);
  Classification classes = prepare_classes(panel, c);
  print_warnings(corpus.report.warnings);

  GlmSpec spec = glm_spec_for(c, c.measure, c.class_threshold);
  if (o.coding == "reference") {
    spec.coding = DisciplineCoding::Reference;
  } else if (o.coding != "sum") {
    throw ValidationError("--coding must be 'sum' or 'reference'");
  }
  r.meta.params.emplace_back("coding", o.coding);
  GlmFit result = fit(panel, classes, spec);
  {
    auto f = open_output(c.output_dir / "coefficients.csv");
    write_coefficients(f, r.meta, result);
  }
  {
    auto f = open_output(c.output_dir / "fixed_effects.csv");
    write_fixed_effects(f, r.meta, result);
  }
  {
    auto f = open_output(c.output_dir / "fitstats.json");
    write_fitstats(f, r.meta, result);
  }
  if (c.covariates.size() >= 2) {
    std::vector<std::string> names;
    for (Covariate cov : c.covariates) names.emplace_back(to_string(cov));
    const auto rows = fit_rows(panel, c.covariates);
    auto report = collinearity_diagnostic(covariate_matrix(panel, rows, c.covariates), names);
    auto f = open_output(c.output_dir / "collinearity.csv");
    write_collinearity(f, r.meta, report);
  }
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  SimConfig sim;
  if (!o.sim_config_path.empty()) {
    if (!fs::exists(o.sim_config_path)) throw ValidationError("simulation config not found: " + o.sim_config_path);
    sim = sim_config_from(read_key_values(o.sim_config_path));
  }
  for (const auto& text : o.sim_params) {
    auto [k, v] = split_assignment(text);
    sim.set(k, v);
  }
  if (o.seed) sim.seed = *o.seed;
  sim.validate();
  const fs::path dir = o.out_dir.empty() ? fs::path("sim") : fs::path(o.out_dir);
  SimResult result = generate(sim, o.threads_given ? o.threads : 0);
  write_simulation(dir, sim, result);
  std::cout << "wrote " << result.tables.publications.size() << " publications by " << result.tables.authors.size()
            << " authors to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_report(const Options& o) {
  Run r = make_run(o);
  std::vector<std::string> warnings;
  write_report(r.config, r.meta, warnings);
  print_warnings(warnings);
  return kExitOk;
}

}  // namespace


int main(int argc, char** argv) {
  CLI::App app{"toperf: top-performer analytics over bibliometric corpora"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path, "Run configuration file");
    sub->add_option("--input", o.input_dir, "Directory holding the four input files");
    sub->add_option("-o,--out", o.out_dir, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it")
        ->each([&](const std::string&) { o.threads_given = true; });
    sub->add_option("--seed", o.seed, "Global seed for tie breaking");
    sub->add_option("--set", o.overrides, "Override a config key (key=value); repeatable");
  };
  auto add_analysis = [&](CLI::App* sub) {
    sub->add_option("--class", o.class_threshold, "Top class in percent (e.g. 10)");
    sub->add_option("--measure", o.measure, "Productivity measure: p1, p2, p3 or p4");
    sub->add_option("--group-by", o.group_by,
                    "Comma-separated dimensions: period, discipline, gender, affiliation, age_group");
    sub->add_option("--share-basis", o.share_basis, "Share basis: measure, p3 or coverage");
  };

  auto* validate = app.add_subcommand("validate", "Check the inputs against the schemas and cross-references");
  add_common(validate);
  auto* panel = app.add_subcommand("panel", "Build the author-period panel (panel.csv)");
  add_common(panel);
  auto* productivity = app.add_subcommand("productivity", "Panel with the four measures and covariates");
  add_common(productivity);
  auto* classify = app.add_subcommand("classify", "Top-class assignments and class counts");
  add_common(classify);
  classify->add_option("--group-by", o.group_by, "Dimensions for class_counts.csv (default period)");

  auto* metrics = app.add_subcommand("metrics", "Shares, RPI, distribution tables and correlations");
  metrics->require_subcommand(1);
  std::string metrics_kind;
  for (const char* kind : {"shares", "rpi", "tables", "correlations"}) {
    auto* sub = metrics->add_subcommand(kind);
    add_common(sub);
    add_analysis(sub);
    if (std::string(kind) == "tables") {
      sub->add_option("--column", o.column, "Column dimension (default period; 'none' for a single column)")
          ->default_val("period");
      sub->add_flag("--members", o.members_only, "Count only members of --class under --measure");
    }
    sub->callback([&metrics_kind, kind] { metrics_kind = kind; });
  }

  auto* regress = app.add_subcommand("regress", "Fixed-effects logit of class membership");
  add_common(regress);
  add_analysis(regress);
  regress->add_option("--coding", o.coding, "Discipline coding: sum or reference")->default_val("sum");

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic closed-world corpus");
  simulate->add_option("--sim-config", o.sim_config_path, "Simulation parameter file");
  simulate->add_option("--param", o.sim_params, "Simulation parameter (key=value); repeatable");
  simulate->add_option("-o,--out", o.out_dir, "Output directory (default sim)");
  simulate->add_option("--seed", o.seed, "Generator seed");
  simulate->add_option("--threads", o.threads, "Worker threads")->each([&](const std::string&) {
    o.threads_given = true;
  });

  auto* report = app.add_subcommand("report", "Run the full pipeline and write every output");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (panel->parsed()) return cmd_panel(o, false);
    if (productivity->parsed()) return cmd_panel(o, true);
    if (classify->parsed()) return cmd_classify(o);
    if (metrics->parsed()) return cmd_metrics(o, metrics_kind);
    if (regress->parsed()) return cmd_regress(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (report->parsed()) return cmd_report(o);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
