#include "toperf/felogit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "toperf/classify.hpp"
#include "toperf/panel.hpp"

namespace toperf {
namespace {

constexpr double kZ95 = 1.96;

std::string join_names(const std::vector<std::string>& names, const std::vector<std::size_t>& idx) {
  std::string out;
  for (std::size_t i : idx) out += (out.empty() ? "" : ", ") + names[i];
  return out;
}

GlmCoefficient wald(const std::string& name, double beta, double se) {
  GlmCoefficient c;
  c.name = name;
  c.beta = beta;
  c.se = se;
  c.exp_b = std::exp(beta);
  c.ci_low = std::exp(beta - kZ95 * se);
  c.ci_high = std::exp(beta + kZ95 * se);
  c.z = beta / se;
  c.p_value = std::erfc(std::abs(c.z) / std::sqrt(2.0));
  return c;
}

}  // namespace

double covariate_value(const AuthorPeriodUnit& unit, Covariate c) {
  switch (c) {
    case Covariate::AcademicAge: return unit.academic_age;
    case Covariate::AvgTeamSize: return unit.covariates.avg_team_size;
    case Covariate::IntlCollaborationRate: return unit.covariates.intl_collaboration_rate;
    case Covariate::CollaborationRate: return unit.covariates.collaboration_rate;
    case Covariate::GenderMale: return unit.gender == Gender::Male ? 1.0 : 0.0;
    case Covariate::ResearchIntensityRest: return unit.research_intensive ? 0.0 : 1.0;
    case Covariate::MedianJournalPercentile: return unit.covariates.median_journal_percentile;
  }
  return 0.0;
}

std::vector<std::size_t> fit_rows(const Panel& panel, std::span<const Covariate> covariates) {
  const bool needs_binary_gender =
      std::find(covariates.begin(), covariates.end(), Covariate::GenderMale) != covariates.end();
  std::vector<std::size_t> rows;
  for (std::size_t u = 0; u < panel.units.size(); ++u) {
    if (needs_binary_gender && panel.units[u].gender == Gender::Unknown) continue;
    rows.push_back(u);
  }
  return rows;
}

Design build_design(const Panel& panel, std::span<const std::uint8_t> response, const GlmSpec& spec) {
  if (response.size() != panel.units.size()) throw ValidationError("response is not aligned with the panel");
  Design d;
  d.rows = fit_rows(panel, spec.covariates);

  std::set<std::size_t> periods;
  std::set<std::size_t> disciplines;
  for (std::size_t u : d.rows) {
    periods.insert(panel.units[u].period_index);
    disciplines.insert(panel.units[u].discipline);
  }
  d.period_levels.assign(periods.begin(), periods.end());
  d.discipline_levels.assign(disciplines.begin(), disciplines.end());

  if (spec.period_effects) {
    for (std::size_t p : d.period_levels) d.column_names.push_back("period[" + panel.periods[p].label() + "]");
  } else {
    d.has_intercept = true;
    d.column_names.push_back("(intercept)");
  }
  const std::size_t n_disc = d.discipline_levels.size();
  std::vector<std::size_t> disc_columns;  // discipline levels that own a column
  if (spec.discipline_effects && n_disc >= 2) {
    if (spec.coding == DisciplineCoding::SumToZero) {
      disc_columns.assign(d.discipline_levels.begin(), d.discipline_levels.end() - 1);
    } else {
      disc_columns.assign(d.discipline_levels.begin() + 1, d.discipline_levels.end());
    }
    for (std::size_t l : disc_columns) d.column_names.push_back("discipline[" + panel.discipline_labels[l] + "]");
  }
  d.first_covariate = d.column_names.size();
  for (Covariate c : spec.covariates) d.column_names.emplace_back(to_string(c));

  const auto n = static_cast<Eigen::Index>(d.rows.size());
  const auto p = static_cast<Eigen::Index>(d.column_names.size());
  d.x = Eigen::MatrixXd::Zero(n, p);
  d.y = Eigen::VectorXd::Zero(n);
  const std::size_t last_disc = n_disc ? d.discipline_levels.back() : 0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const AuthorPeriodUnit& unit = panel.units[d.rows[static_cast<std::size_t>(r)]];
    d.y(r) = response[d.rows[static_cast<std::size_t>(r)]] ? 1.0 : 0.0;
    Eigen::Index col = 0;
    if (spec.period_effects) {
      for (std::size_t p_level : d.period_levels) d.x(r, col++) = unit.period_index == p_level ? 1.0 : 0.0;
    } else {
      d.x(r, col++) = 1.0;
    }
    for (std::size_t l : disc_columns) {
      double v = unit.discipline == l ? 1.0 : 0.0;
      if (spec.coding == DisciplineCoding::SumToZero && unit.discipline == last_disc) v = -1.0;
      d.x(r, col++) = v;
    }
    for (Covariate c : spec.covariates) d.x(r, col++) = covariate_value(unit, c);
  }
  return d;
}

std::vector<std::size_t> collinear_columns(const Eigen::MatrixXd& x) {
  const Eigen::Index p = x.cols();
  const Eigen::MatrixXd gram = x.transpose() * x;
  std::vector<std::size_t> dependent;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(gram(j, j) > 0)) {
      dependent.push_back(static_cast<std::size_t>(j));
      continue;
    }
    std::vector<Eigen::Index> trial = kept;
    trial.push_back(j);
    const auto k = static_cast<Eigen::Index>(trial.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        sub(a, b) = gram(trial[a], trial[b]) / std::sqrt(gram(trial[a], trial[a]) * gram(trial[b], trial[b]));
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() == k) {
      kept.push_back(j);
    } else {
      dependent.push_back(static_cast<std::size_t>(j));
    }
  }
  return dependent;
}

double null_loglik(const Eigen::VectorXd& y, const GlmOptions& options) {
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(y.size(), 1);
  const std::string name = "(intercept)";
  return newton_logit(ones, y, options, std::span<const std::string>(&name, 1)).loglik;
}

GlmFit fit(const Panel& panel, std::span<const std::uint8_t> response, const GlmSpec& spec) {
  Design d = build_design(panel, response, spec);
  if (auto dependent = collinear_columns(d.x); !dependent.empty()) {
    throw NumericError(NumericError::Kind::RankDeficient,
                       "design is rank deficient; collinear with preceding columns: " +
                           join_names(d.column_names, dependent));
  }
  auto sol = newton_logit(d.x, d.y, spec.options, d.column_names);

  GlmFit out;
  out.spec = spec;
  out.n_obs = d.rows.size();
  out.n_success = static_cast<std::size_t>(d.y.sum());
  out.converged = sol.converged;
  out.iterations = sol.iterations;
  out.gradient_max_norm = sol.gradient_max_norm;
  out.stop_reason = sol.stop_reason;
  out.loglik_trace = sol.loglik_trace;
  out.loglik_full = sol.loglik;
  out.loglik_null = null_loglik(d.y, spec.options);
  out.mcfadden_r2 = mcfadden(out);

  const auto& beta = sol.beta;
  const auto& cov = sol.covariance;
  for (std::size_t j = d.first_covariate; j < d.column_names.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.coefficients.push_back(wald(d.column_names[j], beta(jj), std::sqrt(cov(jj, jj))));
  }

  Eigen::Index col = 0;
  if (spec.period_effects) {
    for (std::size_t p : d.period_levels) {
      out.fixed_effects.push_back({"period", panel.periods[p].label(), beta(col), std::sqrt(cov(col, col))});
      ++col;
    }
  } else {
    out.fixed_effects.push_back({"intercept", "(intercept)", beta(col), std::sqrt(cov(col, col))});
    ++col;
  }
  const std::size_t n_disc = d.discipline_levels.size();
  if (spec.discipline_effects && n_disc >= 2) {
    const Eigen::Index first = col;
    const auto k = static_cast<Eigen::Index>(n_disc - 1);
    if (spec.coding == DisciplineCoding::SumToZero) {
      for (Eigen::Index j = 0; j < k; ++j) {
        out.fixed_effects.push_back({"discipline", panel.discipline_labels[d.discipline_levels[static_cast<std::size_t>(j)]],
                                     beta(first + j), std::sqrt(cov(first + j, first + j))});
      }
      const double last = -beta.segment(first, k).sum();
      const double var = cov.block(first, first, k, k).sum();
      out.fixed_effects.push_back(
          {"discipline", panel.discipline_labels[d.discipline_levels.back()], last, std::sqrt(var)});
    } else {
      out.fixed_effects.push_back({"discipline", panel.discipline_labels[d.discipline_levels.front()], 0.0, 0.0});
      for (Eigen::Index j = 0; j < k; ++j) {
        out.fixed_effects.push_back(
            {"discipline", panel.discipline_labels[d.discipline_levels[static_cast<std::size_t>(j) + 1]],
             beta(first + j), std::sqrt(cov(first + j, first + j))});
      }
    }
  }
  return out;
}

GlmFit fit(const Panel& panel, const Classification& classes, const GlmSpec& spec) {
  const std::size_t t = classes.threshold_index(spec.threshold);
  std::vector<std::uint8_t> response(panel.units.size());
  for (std::size_t u = 0; u < panel.units.size(); ++u) response[u] = classes.at(spec.measure, u).in_class(t);
  return fit(panel, response, spec);
}

double mcfadden(const GlmFit& f) { return 1.0 - f.loglik_full / f.loglik_null; }

Eigen::MatrixXd covariate_matrix(const Panel& panel, std::span<const std::size_t> rows,
                                 std::span<const Covariate> covariates) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(covariates.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < covariates.size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = covariate_value(panel.units[rows[r]], covariates[c]);
    }
  }
  return m;
}

CollinearityReport collinearity_diagnostic(const Eigen::MatrixXd& columns, const std::vector<std::string>& names) {
  if (columns.cols() < 2) throw ValidationError("collinearity diagnostic needs at least two covariates");
  if (static_cast<std::size_t>(columns.cols()) != names.size()) throw ValidationError("column names do not match");
  if (columns.rows() < 3) throw ValidationError("collinearity diagnostic needs at least three rows");

  Eigen::MatrixXd centered = columns.rowwise() - columns.colwise().mean();
  const Eigen::VectorXd norms = centered.colwise().norm();
  std::vector<std::size_t> constant;
  for (Eigen::Index j = 0; j < norms.size(); ++j) {
    if (!(norms(j) > 0)) constant.push_back(static_cast<std::size_t>(j));
  }
  if (!constant.empty()) {
    throw NumericError(NumericError::Kind::Singular, "zero-variance covariate(s): " + join_names(names, constant));
  }
  const Eigen::MatrixXd z = centered * norms.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd corr = z.transpose() * z;
  if (auto dependent = collinear_columns(z); !dependent.empty()) {
    throw NumericError(NumericError::Kind::Singular,
                       "correlation matrix is singular; dependent column(s): " + join_names(names, dependent));
  }
  CollinearityReport out;
  out.names = names;
  out.diagonal = corr.ldlt().solve(Eigen::MatrixXd::Identity(corr.rows(), corr.cols())).diagonal();
  return out;
}

bool intervals_overlap(double low_a, double high_a, double low_b, double high_b) {
  return low_a <= high_b && low_b <= high_a;
}

OverlapTable ci_overlap_report(std::span<const GlmFit> fits, std::span<const std::string> labels) {
  if (fits.size() < 2) throw ValidationError("CI overlap needs at least two fits");
  if (labels.size() != fits.size()) throw ValidationError("one label per fit is required");
  const auto& reference = fits.front().coefficients;
  for (const auto& f : fits) {
    bool same = f.coefficients.size() == reference.size();
    for (std::size_t i = 0; same && i < reference.size(); ++i) same = f.coefficients[i].name == reference[i].name;
    if (!same) throw ValidationError("CI overlap requires fits with the same covariate list");
  }
  OverlapTable table;
  table.fit_labels.assign(labels.begin(), labels.end());
  for (std::size_t c = 0; c < reference.size(); ++c) {
    for (std::size_t i = 0; i < fits.size(); ++i) {
      OverlapRow row;
      row.covariate = reference[c].name;
      row.fit_label = labels[i];
      const auto& a = fits[i].coefficients[c];
      for (std::size_t j = 0; j < fits.size(); ++j) {
        const auto& b = fits[j].coefficients[c];
        row.overlaps.push_back(intervals_overlap(a.ci_low, a.ci_high, b.ci_low, b.ci_high));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace toperf
