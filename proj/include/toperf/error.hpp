#pragma once

#include <stdexcept>
#include <string>

namespace toperf {

/// Input data or configuration that violates a documented schema or invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Estimation failure in the logit solver or a diagnostic.
class NumericError : public std::runtime_error {
 public:
  enum class Kind { NonConvergence, Separation, RankDeficient, DegenerateResponse, Singular };

  NumericError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace toperf
