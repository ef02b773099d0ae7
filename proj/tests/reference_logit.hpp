#pragma once

// Naive dense logit reference: row-major long double design, hand-written
// Gaussian elimination with partial pivoting, plain Newton steps.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace reference {

using Real = long double;

struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Real> data;
  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  Real& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Real operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Solves a x = b in place; a is consumed.
inline std::vector<Real> solve(Dense a, std::vector<Real> b) {
  const std::size_t n = a.rows;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(a(i, k)) > std::fabs(a(pivot, k))) pivot = i;
    }
    if (a(pivot, k) == 0) throw std::runtime_error("singular system");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = a(i, k) / a(k, k);
      if (f == 0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Real s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

struct Result {
  std::vector<Real> beta;
  Real loglik = 0;
  int iterations = 0;
};

inline Result newton(const Dense& x, const std::vector<Real>& y, int max_iterations = 60) {
  const std::size_t n = x.rows;
  const std::size_t p = x.cols;
  Result r;
  r.beta.assign(p, 0);
  for (int it = 0; it < max_iterations; ++it) {
    Dense h(p, p);
    std::vector<Real> g(p, 0);
    for (std::size_t i = 0; i < n; ++i) {
      Real eta = 0;
      for (std::size_t j = 0; j < p; ++j) eta += x(i, j) * r.beta[j];
      const Real mu = 1 / (1 + std::exp(-eta));
      const Real w = mu * (1 - mu);
      for (std::size_t j = 0; j < p; ++j) {
        g[j] += x(i, j) * (y[i] - mu);
        for (std::size_t k = 0; k <= j; ++k) h(j, k) += w * x(i, j) * x(i, k);
      }
    }
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j + 1; k < p; ++k) h(j, k) = h(k, j);
    }
    const auto step = solve(h, g);
    Real biggest = 0;
    for (std::size_t j = 0; j < p; ++j) {
      r.beta[j] += step[j];
      biggest = std::max(biggest, std::fabs(step[j]));
    }
    r.iterations = it + 1;
    if (biggest < 1e-13L) break;
  }
  r.loglik = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Real eta = 0;
    for (std::size_t j = 0; j < p; ++j) eta += x(i, j) * r.beta[j];
    r.loglik += y[i] * eta - std::log1p(std::exp(eta));
  }
  return r;
}

}  // namespace reference
