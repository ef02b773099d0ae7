// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// usage: acceptance <toperf binary> <bundled fixture config>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "glm_oracle.hpp"
#include "toperf/classify.hpp"
#include "toperf/config.hpp"
#include "toperf/error.hpp"
#include "toperf/felogit.hpp"
#include "toperf/ingest.hpp"
#include "toperf/metrics.hpp"
#include "toperf/panel.hpp"
#include "toperf/productivity.hpp"
#include "toperf/simgen.hpp"

namespace fs = std::filesystem;
using namespace toperf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

struct Pipeline {
  Corpus corpus;
  Panel panel;
  Classification classes;
};

Pipeline pipeline(const SimConfig& sim, unsigned threads = 1) {
  RunConfig config = run_config_for(sim);
  config.threads = threads;
  Pipeline p;
  p.corpus = assemble_corpus(generate(sim, threads).tables, config);
  derive_first_pub_year(p.corpus);
  p.panel = build_panel(p.corpus, config);
  annotate_productivity(p.panel, p.corpus, config);
  p.classes = classify_panel(p.panel, config.measures, config.thresholds, threads);
  return p;
}

// Criterion 1 -----------------------------------------------------------------
void weight_rule(Outcome& o) {
  o.require(prestige_weight(90) == 0.90, "prestige_weight(90) == 0.90");
  for (int r = 0; r <= 10; ++r) o.require(prestige_weight(r) == 0.10, "prestige_weight(" + std::to_string(r) + ")");
  o.require(prestige_weight(std::nullopt) == 0.10, "unranked venue");
}

// Criterion 2 -----------------------------------------------------------------
void fractional_closure(Outcome& o) {
  SimConfig sim;
  sim.n_authors = 1000;
  sim.seed = 2024;
  auto p = pipeline(sim);
  o.require(p.corpus.report.unknown_authors.empty(), "closed world");
  std::map<std::size_t, double> p4;
  std::map<std::size_t, std::set<std::string>> pubs;
  for (const auto& u : p.panel.units) {
    p4[u.period_index] += u.measures.p4;
    for (auto pi : u.publications) pubs[u.period_index].insert(p.corpus.publications[pi].pub_id);
  }
  std::map<std::size_t, std::size_t> all_pubs;
  for (const auto& pub : p.corpus.publications) ++all_pubs[assign_period(pub.year, p.panel.periods)];
  double worst = 0;
  for (const auto& [period, n] : all_pubs) {
    o.require(pubs[period].size() == n, "every publication reaches a unit");
    worst = std::max(worst, std::fabs(p4[period] - static_cast<double>(n)));
  }
  o.require(worst <= 1e-9, "sum p4 == distinct publications");
  o.detail << "periods=" << all_pubs.size() << " max_abs_err=" << worst;
}

// Criterion 3 -----------------------------------------------------------------
std::vector<std::uint32_t> oracle_membership(const std::vector<double>& values, const std::vector<int>& percents) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::uint32_t> out(values.size(), 0);
  for (std::size_t t = 0; t < percents.size(); ++t) {
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(percents[t]) * values.size() / 100);
    const double cutoff = sorted[k - 1];
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= cutoff) out[i] |= 1U << t;
    }
  }
  return out;
}

void classification_oracle(Outcome& o) {
  const std::vector<int> percents{1, 3, 5, 10};
  const std::vector<double> thresholds{1, 3, 5, 10};
  std::mt19937_64 gen(31337);
  std::size_t tied = 0;
  for (int c = 0; c < 200; ++c) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(5, 5000)(gen);
    std::vector<double> v(n);
    const bool ties = c % 2 == 0;
    for (auto& x : v) {
      x = ties ? static_cast<double>(std::uniform_int_distribution<int>(0, 1 + static_cast<int>(n / 50))(gen))
               : std::lognormal_distribution<double>(0.0, 2.0)(gen);
    }
    if (!ties) {
      std::set<double> distinct(v.begin(), v.end());
      o.require(distinct.size() == n, "distinct cohort draws");
    } else {
      ++tied;
    }
    const auto got = classify_cohort(v, thresholds);
    const auto want = oracle_membership(v, percents);
    for (std::size_t i = 0; i < n; ++i) {
      o.require(got[i].membership == want[i], "membership equals oracle (cohort " + std::to_string(c) + ")");
      const auto m = got[i].membership;
      o.require((m & 1U ? (m & 2U) : true) && (m & 2U ? (m & 4U) : true) && (m & 4U ? (m & 8U) : true),
                "nesting top1 <= top3 <= top5 <= top10");
    }
  }
  o.detail << "cohorts=200 with_ties=" << tied;
}

// Criterion 4 -----------------------------------------------------------------
void share_bound(Outcome& o) {
  double min_margin = 1e300;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SimConfig sim;
    sim.seed = 4000 + seed;
    sim.n_authors = 300;
    auto p = pipeline(sim);
    for (Measure m : kAllMeasures) {
      double previous = -1;
      for (double t : p.classes.thresholds) {
        auto table = concentration_share(p.panel, p.classes, t, m, ShareBasis::MeasureConsistent, {});
        if (table.rows.empty()) {
          o.require(false, "share table has a row");
          continue;
        }
        const double share = table.rows[0].share_percent;
        o.require(share >= t, "share(top " + std::to_string(t) + "%) >= p, seed " + std::to_string(sim.seed));
        o.require(share >= previous, "share monotone over nested classes");
        min_margin = std::min(min_margin, share - t);
        previous = share;
      }
    }
  }
  o.detail << "seeds=100 min(share - p)=" << min_margin;
}

// Criterion 5 -----------------------------------------------------------------
void rpi_identity(Outcome& o) {
  auto [men, women] = rpi_from_counts({3, 30, 1, 20});
  o.require(men && *men == 2.0, "hand case rpi_men == 2.0");
  o.require(women && *women == 0.5, "hand case rpi_women == 0.5");
  std::size_t defined = 0;
  double worst = 0;
  const std::vector<std::vector<Dimension>> groupings{
      {}, {Dimension::Period}, {Dimension::Discipline}, {Dimension::AgeGroup}, {Dimension::Affiliation}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig sim;
    sim.seed = 5000 + seed;
    sim.n_authors = 600;
    sim.unknown_gender_fraction = 0.05;
    auto p = pipeline(sim);
    for (Measure m : kAllMeasures) {
      for (double t : p.classes.thresholds) {
        for (const auto& dims : groupings) {
          for (const auto& v : rpi(p.panel, p.classes, t, m, dims)) {
            o.require(v.rpi_men.has_value() == v.rpi_women.has_value(), "both defined or both undefined");
            if (!v.rpi_men) continue;
            ++defined;
            worst = std::max(worst, std::fabs(*v.rpi_men * *v.rpi_women - 1.0));
          }
        }
      }
    }
  }
  o.require(defined > 0, "some RPI values defined");
  o.require(worst <= 1e-12, "rpi_men * rpi_women == 1");
  o.detail << "defined=" << defined << " max|prod-1|=" << worst;
}

// Criterion 6 -----------------------------------------------------------------
void glm_oracle_equivalence(Outcome& o) {
  double worst_beta = 0, worst_grad = 0;
  std::mt19937_64 gen(66);
  for (int f = 0; f < 20; ++f) {
    LogitDgpConfig cfg;
    cfg.seed = 600 + static_cast<std::uint64_t>(f);
    cfg.n = 1000 + 200 * static_cast<std::size_t>(f);
    const std::size_t n_periods = 2 + f % 4;
    cfg.period_shifts.clear();
    for (std::size_t p = 0; p < n_periods; ++p) cfg.period_shifts.push_back(-4.0 - 0.2 * p);
    const std::size_t n_disc = DisciplineWhitelist::stemm_default().size();
    for (std::size_t d = 0; d < n_disc; ++d) cfg.discipline_shifts.push_back(std::normal_distribution<double>(0, 0.3)(gen));
    auto lp = simulate_logit_panel(cfg);
    GlmSpec spec;
    if (f % 5 == 4) spec.coding = DisciplineCoding::Reference;
    auto fit = toperf::fit(lp.panel, lp.response, spec);
    auto ref = glm_oracle::fit(lp.panel, lp.response, spec.covariates);

    worst_grad = std::max(worst_grad, fit.gradient_max_norm);
    o.require(fit.converged, "converged");
    for (std::size_t k = 0; k < spec.covariates.size(); ++k) {
      worst_beta = std::max(worst_beta, std::fabs(fit.coefficients[k].beta - ref.covariate_beta[k]));
    }
    double ref_first = 0;
    bool first = true;
    for (const auto& e : fit.fixed_effects) {
      if (e.kind == "period") {
        double want = ref.period_shift.at(e.level);
        if (spec.coding == DisciplineCoding::Reference) {
          want += ref.discipline_shift.begin()->second;
        }
        worst_beta = std::max(worst_beta, std::fabs(e.shift - want));
      } else if (e.kind == "discipline") {
        double want = ref.discipline_shift.at(e.level);
        if (spec.coding == DisciplineCoding::Reference) {
          if (first) ref_first = want;
          want -= ref_first;
          first = false;
        }
        worst_beta = std::max(worst_beta, std::fabs(e.shift - want));
      }
    }
  }
  o.require(worst_beta <= 1e-6, "betas within 1e-6 of the reference");
  o.require(worst_grad < 1e-8, "gradient max-norm < 1e-8");
  o.detail << "fixtures=20 max|beta diff|=" << worst_beta << " max gradient=" << worst_grad;
}

// Criterion 7 -----------------------------------------------------------------
void effect_recovery(Outcome& o) {
  int inside = 0;
  double lo = 1e300, hi = -1e300;
  for (int s = 0; s < 40; ++s) {
    LogitDgpConfig cfg;
    cfg.seed = 7000 + static_cast<std::uint64_t>(s);
    cfg.n = 50000;
    auto lp = simulate_logit_panel(cfg);
    auto fit = toperf::fit(lp.panel, lp.response, GlmSpec{});
    double or_male = 0;
    for (const auto& c : fit.coefficients) {
      if (c.name == "gender_male") or_male = c.exp_b;
    }
    lo = std::min(lo, or_male);
    hi = std::max(hi, or_male);
    inside += or_male >= 1.8 && or_male <= 2.2;
  }
  o.require(inside >= 38, ">= 95% of 40 seeds inside [1.8, 2.2]");
  o.detail << "inside=" << inside << "/40 range=[" << lo << ", " << hi << "]";
}

// Criterion 8 -----------------------------------------------------------------
void diagnostics(Outcome& o) {
  std::mt19937_64 gen(88);
  std::normal_distribution<double> normal;
  const Eigen::Index n = 20000;
  Eigen::MatrixXd x(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = normal(gen);
    x(i, 1) = 0.6 * x(i, 0) + 0.8 * normal(gen);
  }
  const auto report = collinearity_diagnostic(x, {"x1", "x2"});
  const double r = pearson(x.col(0), x.col(1)).value();
  const double closed = 1.0 / (1.0 - r * r);
  o.require(std::fabs(report.diagonal(0) - closed) <= 1e-9 && std::fabs(report.diagonal(1) - closed) <= 1e-9,
            "diagonal == 1/(1-r^2) of the sample");
  o.require(std::fabs(report.diagonal(0) - 1.5625) <= 0.06, "diagonal near population 1/(1-0.36)");

  LogitDgpConfig cfg;
  cfg.n = 4000;
  auto lp = simulate_logit_panel(cfg);
  GlmSpec null_spec;
  null_spec.covariates.clear();
  null_spec.period_effects = false;
  null_spec.discipline_effects = false;
  const auto null_fit = toperf::fit(lp.panel, lp.response, null_spec);
  o.require(null_fit.mcfadden_r2 == 0.0, "McFadden == 0 when full == null");

  std::vector<GlmFit> fits;
  std::vector<std::string> labels;
  double r2_min = 1, r2_max = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    LogitDgpConfig c;
    c.seed = 800 + s;
    c.n = 3000;
    auto panel = simulate_logit_panel(c);
    fits.push_back(toperf::fit(panel.panel, panel.response, GlmSpec{}));
    labels.push_back("fit" + std::to_string(s));
    r2_min = std::min(r2_min, fits.back().mcfadden_r2);
    r2_max = std::max(r2_max, fits.back().mcfadden_r2);
  }
  o.require(r2_min >= 0.0 && r2_max < 1.0, "McFadden in [0, 1)");

  const auto table = ci_overlap_report(fits, labels);
  std::size_t cells = 0;
  for (const auto& row : table.rows) {
    const auto a = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), row.fit_label) - labels.begin());
    for (std::size_t b = 0; b < fits.size(); ++b) {
      const GlmCoefficient* ca = nullptr;
      const GlmCoefficient* cb = nullptr;
      for (const auto& c : fits[a].coefficients) {
        if (c.name == row.covariate) ca = &c;
      }
      for (const auto& c : fits[b].coefficients) {
        if (c.name == row.covariate) cb = &c;
      }
      o.require(ca && cb, "covariate present in both fits");
      if (!ca || !cb) continue;
      const bool brute = std::max(ca->ci_low, cb->ci_low) <= std::min(ca->ci_high, cb->ci_high);
      o.require(row.overlaps[b] == brute, "overlap equals interval intersection");
      ++cells;
    }
  }
  o.require(cells == 7 * 4 * 4, "complete overlap table");
  o.detail << "vif=" << report.diagonal(0) << " closed=" << closed << " mcfadden=[" << r2_min << ", " << r2_max
           << "] overlap_cells=" << cells;
}

// Criterion 9 -----------------------------------------------------------------
int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = s.str();
  }
  return out;
}

void determinism(Outcome& o, const std::string& binary, const std::string& config) {
  const fs::path base = fs::temp_directory_path() / "toperf_acceptance";
  fs::remove_all(base);
  std::map<std::string, std::map<std::string, std::string>> outputs;
  for (const auto& [name, threads] : std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 8}}) {
    const fs::path out = base / name;
    const std::string cmd = binary + " report -c " + config + " --seed 7 --threads " + std::to_string(threads) +
                            " -o " + out.string() + " > " + (base / (name + ".log")).string() + " 2>&1";
    fs::create_directories(base);
    o.require(run_command(cmd) == 0, "report run " + name + " succeeded");
    outputs[name] = fs::exists(out) ? tree(out) : std::map<std::string, std::string>{};
  }
  o.require(!outputs["a"].empty(), "report produced files");
  o.require(outputs["a"] == outputs["b"], "two runs byte-identical");
  o.require(outputs["a"] == outputs["c"], "--threads 1 vs --threads 8 byte-identical");
  std::size_t bytes = 0;
  for (const auto& [f, text] : outputs["a"]) bytes += text.size();
  o.detail << "files=" << outputs["a"].size() << " bytes=" << bytes;
}

// Criterion 10 ----------------------------------------------------------------
void skewness(Outcome& o) {
  constexpr double kLow = 53.787, kHigh = 62.374;
  double lo = 1e300, hi = -1e300;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig sim;
    sim.seed = seed;
    auto p = pipeline(sim, 0);
    const auto table = concentration_share(p.panel, p.classes, 10, Measure::P1, ShareBasis::MeasureConsistent, {});
    const double share = table.rows.at(0).share_percent;
    lo = std::min(lo, share);
    hi = std::max(hi, share);
    o.require(share >= kLow && share <= kHigh, "top-10% share inside band, seed " + std::to_string(seed));
  }
  o.detail << "band=[" << kLow << ", " << kHigh << "] observed=[" << lo << ", " << hi << "] seeds=5";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <toperf binary> <fixture config>\n";
    return 64;
  }
  const std::string binary = argv[1];
  const std::string config = argv[2];

  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "weight rule", weight_rule},
      {2, "fractional closure", fractional_closure},
      {3, "classification oracle", classification_oracle},
      {4, "share bound and monotonicity", share_bound},
      {5, "RPI identity", rpi_identity},
      {6, "GLM oracle equivalence", glm_oracle_equivalence},
      {7, "effect recovery", effect_recovery},
      {8, "diagnostics", diagnostics},
      {9, "determinism", [&](Outcome& o) { determinism(o, binary, config); }},
      {10, "skewness demonstration", skewness},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
