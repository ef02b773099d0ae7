#pragma once

// Logit membership models with period and discipline fixed effects.
//
// Identification: without a global intercept every observed period gets a
// dummy (the period shifts absorb the intercept); disciplines enter either
// sum-to-zero coded (default; the last observed level is minus the sum of
// the others) or reference coded (first observed level omitted). Covariates
// enter unstandardized.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toperf/logit_newton.hpp"
#include "toperf/types.hpp"

namespace toperf {

struct Panel;
struct AuthorPeriodUnit;
struct Classification;

enum class DisciplineCoding { SumToZero, Reference };

struct GlmSpec {
  double threshold = 10.0;  // response class (top p%)
  Measure measure = Measure::P1;
  std::vector<Covariate> covariates{kAllCovariates.begin(), kAllCovariates.end()};
  bool period_effects = true;
  bool discipline_effects = true;
  DisciplineCoding coding = DisciplineCoding::SumToZero;
  GlmOptions options;
};

struct GlmCoefficient {
  std::string name;
  double beta = 0;
  double se = 0;
  double exp_b = 0;
  double ci_low = 0;  // exp(beta - 1.96 se)
  double ci_high = 0;  // exp(beta + 1.96 se)
  double z = 0;
  double p_value = 0;  // two-sided Wald
};

struct FixedEffectEstimate {
  std::string kind;  // "period", "discipline" or "intercept"
  std::string level;
  double shift = 0;  // log-odds
  double se = 0;
};

struct GlmFit {
  GlmSpec spec;
  std::vector<GlmCoefficient> coefficients;
  std::vector<FixedEffectEstimate> fixed_effects;
  double loglik_full = 0;
  double loglik_null = 0;
  double mcfadden_r2 = 0;
  std::size_t n_obs = 0;
  std::size_t n_success = 0;
  bool converged = false;
  int iterations = 0;
  double gradient_max_norm = 0;
  std::string stop_reason;
  std::vector<double> loglik_trace;
};

/// Dense design for one fit; rows are the selected units.
struct Design {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;
  std::vector<std::size_t> rows;  // panel unit indices
  std::vector<std::size_t> period_levels;
  std::vector<std::size_t> discipline_levels;
  bool has_intercept = false;
  std::size_t first_covariate = 0;  // column of the first covariate
};

double covariate_value(const AuthorPeriodUnit& unit, Covariate c);

/// Units entering a fit: all of them, minus gender-U units when the gender
/// covariate is requested.
std::vector<std::size_t> fit_rows(const Panel& panel, std::span<const Covariate> covariates);

/// `response` is aligned with panel.units (nonzero = success).
Design build_design(const Panel& panel, std::span<const std::uint8_t> response, const GlmSpec& spec);

/// Columns that are linear combinations of earlier columns (empty when the
/// design has full column rank).
std::vector<std::size_t> collinear_columns(const Eigen::MatrixXd& x);

GlmFit fit(const Panel& panel, std::span<const std::uint8_t> response, const GlmSpec& spec);

/// Response is membership in class spec.threshold under spec.measure.
GlmFit fit(const Panel& panel, const Classification& classes, const GlmSpec& spec);

/// 1 - loglik_full / loglik_null.
double mcfadden(const GlmFit& fit);

/// Maximized log-likelihood of the intercept-only model on y.
double null_loglik(const Eigen::VectorXd& y, const GlmOptions& options);

struct CollinearityReport {
  std::vector<std::string> names;
  Eigen::VectorXd diagonal;  // main diagonal of the inverted correlation matrix
};

/// Pearson correlation matrix of the columns, inverted; returns its
/// diagonal. Throws NumericError(Singular) naming zero-variance or
/// dependent columns.
CollinearityReport collinearity_diagnostic(const Eigen::MatrixXd& columns, const std::vector<std::string>& names);

/// Covariate columns of the units in `rows`.
Eigen::MatrixXd covariate_matrix(const Panel& panel, std::span<const std::size_t> rows,
                                 std::span<const Covariate> covariates);

struct OverlapRow {
  std::string covariate;
  std::string fit_label;
  std::vector<bool> overlaps;  // aligned with OverlapTable::fit_labels
};

struct OverlapTable {
  std::vector<std::string> fit_labels;
  std::vector<OverlapRow> rows;  // covariate-major
};

/// Closed-interval intersection of 95% CIs across fits sharing one covariate list.
OverlapTable ci_overlap_report(std::span<const GlmFit> fits, std::span<const std::string> labels);

bool intervals_overlap(double low_a, double high_a, double low_b, double high_b);

}  // namespace toperf
