#pragma once

// Newton-Raphson maximum likelihood for the Bernoulli model with logit link.
//
// For the canonical link the observed and expected information coincide, so
// each step solves (X' W X) delta = X' (y - mu) with W = diag(mu (1 - mu)),
// which is IRLS. A step that lowers the log-likelihood is halved until it
// does not.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toperf/error.hpp"
#include "toperf/types.hpp"

namespace toperf {

template <typename Scalar>
struct LogitSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> beta;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> covariance;  // inverse information at beta
  Scalar loglik = 0;
  Scalar gradient_max_norm = 0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<Scalar> loglik_trace;
};

/// log(1 + exp(eta)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar eta) {
  using std::exp;
  using std::log1p;
  return eta > Scalar(0) ? eta + log1p(exp(-eta)) : log1p(exp(eta));
}

template <typename Scalar>
Scalar logistic(Scalar eta) {
  using std::exp;
  if (eta >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-eta));
  const Scalar e = exp(eta);
  return e / (Scalar(1) + e);
}

template <typename DerivedEta, typename DerivedY>
typename DerivedEta::Scalar bernoulli_loglik(const Eigen::MatrixBase<DerivedEta>& eta,
                                             const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedEta::Scalar;
  Scalar ll = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - softplus(eta(i));
  return ll;
}

namespace detail {

template <typename Scalar>
std::string format_trace(const std::vector<Scalar>& trace) {
  std::ostringstream out;
  out.precision(12);
  for (std::size_t i = 0; i < trace.size(); ++i) out << (i ? ", " : "") << static_cast<double>(trace[i]);
  return out.str();
}

inline std::string column_name(std::span<const std::string> names, Eigen::Index j) {
  if (j >= 0 && static_cast<std::size_t>(j) < names.size()) return names[static_cast<std::size_t>(j)];
  return "column " + std::to_string(j);
}

}  // namespace detail

/// Maximizes the logit log-likelihood of y given design X (no implicit
/// intercept). Throws NumericError on degenerate responses, separation
/// (|beta_j| or |eta_i| beyond options.separation_bound), a singular
/// information matrix, or non-convergence.
///
/// Converged means max |score_j| < gradient_tolerance while the pending
/// Newton step moves no linear predictor by more than 1e-6, or three
/// successive relative log-likelihood changes below loglik_tolerance (the
/// floating-point floor of the score has been reached). Under separation the
/// score vanishes while the step stays large, so the bound check fires.
template <typename DerivedX, typename DerivedY>
LogitSolution<typename DerivedX::Scalar> newton_logit(const Eigen::MatrixBase<DerivedX>& X,
                                                      const Eigen::MatrixBase<DerivedY>& y,
                                                      const GlmOptions& options,
                                                      std::span<const std::string> names = {}) {
  using Scalar = typename DerivedX::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;

  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw ValidationError("response length does not match the design");
  if (n == 0 || p == 0) throw NumericError(NumericError::Kind::DegenerateResponse, "empty design");
  const Scalar successes = y.sum();
  if (!(successes > Scalar(0)) || !(successes < Scalar(n))) {
    throw NumericError(NumericError::Kind::DegenerateResponse,
                       "response needs at least one success and one failure (successes=" +
                           std::to_string(static_cast<double>(successes)) + ", n=" + std::to_string(n) + ")");
  }

  LogitSolution<Scalar> sol;
  sol.beta = Vector::Zero(p);
  Vector eta = Vector::Zero(n);
  Vector mu(n);
  Vector weight(n);
  Scalar ll = bernoulli_loglik(eta, y);
  sol.loglik_trace.push_back(ll);

  auto refresh = [&](const Vector& e) {
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = logistic(e(i));
      weight(i) = mu(i) * (Scalar(1) - mu(i));
    }
  };
  auto information = [&]() -> Matrix {
    Matrix h = Matrix::Zero(p, p);
    const Matrix scaled = X.derived().transpose() * weight.cwiseSqrt().asDiagonal();
    h.template selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    return h.template selfadjointView<Eigen::Lower>();
  };

  refresh(eta);
  Vector gradient = X.derived().transpose() * (y.derived() - mu);
  int small_changes = 0;
  for (int it = 1; it <= options.max_iterations + 1; ++it) {
    const Matrix h = information();
    Eigen::LDLT<Matrix> ldlt(h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw NumericError(NumericError::Kind::Singular, "information matrix is not positive definite");
    }
    const Vector delta = ldlt.solve(gradient);
    if (!delta.allFinite()) throw NumericError(NumericError::Kind::Singular, "Newton step is not finite");
    if (gradient.cwiseAbs().maxCoeff() < Scalar(options.gradient_tolerance) &&
        (X.derived() * delta).cwiseAbs().maxCoeff() < Scalar(1e-6)) {
      sol.converged = true;
      sol.stop_reason = "gradient";
      break;
    }
    if (it > options.max_iterations) break;
    sol.iterations = it;

    Scalar step = 1;
    Vector candidate;
    Vector candidate_eta;
    Scalar candidate_ll = 0;
    for (int halvings = 0;; ++halvings) {
      candidate = sol.beta + step * delta;
      candidate_eta = X.derived() * candidate;
      candidate_ll = bernoulli_loglik(candidate_eta, y);
      if (candidate_ll >= ll - Scalar(1e-12) * abs(ll) || halvings >= 40) break;
      step /= 2;
    }

    Eigen::Index row = 0;
    const Scalar eta_max = candidate_eta.cwiseAbs().maxCoeff(&row);
    Eigen::Index worst = 0;
    const bool beta_breach = candidate.cwiseAbs().maxCoeff(&worst) > Scalar(options.separation_bound);
    std::string driven_by;
    if (beta_breach || eta_max > Scalar(options.separation_bound)) {
      // |beta_j| * sd(x_j): constant columns absorb the offset but do not separate.
      const Vector spread = (X.derived().rowwise() - X.derived().colwise().mean()).colwise().norm().transpose();
      Eigen::Index driver = 0;
      spread.cwiseProduct(candidate).cwiseAbs().maxCoeff(&driver);
      driven_by = ", driven by " + detail::column_name(names, driver) + " (iteration " + std::to_string(it) + ")";
    }
    if (beta_breach) {
      throw NumericError(NumericError::Kind::Separation,
                         "quasi-separation: |" + detail::column_name(names, worst) + "| = " +
                             std::to_string(static_cast<double>(abs(candidate(worst)))) + " exceeds " +
                             std::to_string(options.separation_bound) + driven_by);
    }
    if (eta_max > Scalar(options.separation_bound)) {
      throw NumericError(NumericError::Kind::Separation,
                         "quasi-separation: linear predictor of row " + std::to_string(row) + " reached " +
                             std::to_string(static_cast<double>(candidate_eta(row))) + driven_by);
    }

    const Scalar change = abs(candidate_ll - ll) / std::max(abs(ll), std::numeric_limits<Scalar>::min());
    sol.beta = candidate;
    eta = candidate_eta;
    ll = candidate_ll;
    sol.loglik_trace.push_back(ll);
    refresh(eta);
    gradient = X.derived().transpose() * (y.derived() - mu);

    small_changes = change < Scalar(options.loglik_tolerance) ? small_changes + 1 : 0;
    if (small_changes >= 3) {
      sol.converged = true;
      sol.stop_reason = "loglik";
      break;
    }
  }
  if (!sol.converged) {
    throw NumericError(NumericError::Kind::NonConvergence,
                       "no convergence within " + std::to_string(options.max_iterations) +
                           " iterations; log-likelihood trace: " + detail::format_trace(sol.loglik_trace));
  }
  sol.loglik = ll;
  sol.gradient_max_norm = gradient.cwiseAbs().maxCoeff();
  const Matrix h = information();
  Eigen::LDLT<Matrix> ldlt(h);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericError(NumericError::Kind::Singular, "information matrix at the optimum is singular");
  }
  sol.covariance = ldlt.solve(Matrix::Identity(p, p));
  return sol;
}

}  // namespace toperf
