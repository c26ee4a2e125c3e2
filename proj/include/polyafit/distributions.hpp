// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyafit/rng.hpp"

namespace polyafit {

class FitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Sample variance <= mean: the NB likelihood has no interior optimum.
class UnderdispersedData : public FitError {
  using FitError::FitError;
};
// Iteration cap hit, or the information matrix is numerically singular.
class NonConvergence : public FitError {
  using FitError::FitError;
};
// A Beta sample sits exactly on 0 or 1.
class BoundaryValue : public FitError {
  using FitError::FitError;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
  double half_width() const { return 0.5 * (upper - lower); }
};

// Negative Binomial NB(r, p), pmf(k) = Gamma(k+r)/(Gamma(r) k!) p^r (1-p)^k.
// p is the weight on the r exponent, so mean = r (1-p) / p.
struct NegBinParams {
  double r = 0.0;
  double p = 0.0;
  ConfidenceInterval ci_r;
  ConfidenceInterval ci_p;
  double log_likelihood = 0.0;
  std::int64_t n_obs = 0;

  double mean() const { return r * (1.0 - p) / p; }
  double variance() const { return r * (1.0 - p) / (p * p); }
};

// Beta B(r, theta) on (0, 1).
struct BetaParams {
  double r = 0.0;
  double theta = 0.0;
  ConfidenceInterval ci_r;
  ConfidenceInterval ci_theta;
  double log_likelihood = 0.0;
  std::int64_t n_obs = 0;

  double mean() const { return r / (r + theta); }
};

double nb_log_pmf(double r, double p, std::int64_t k);
double nb_pmf(double r, double p, std::int64_t k);
double nb_cdf(double r, double p, std::int64_t k);
inline double nb_pmf(const NegBinParams& params, std::int64_t k) { return nb_pmf(params.r, params.p, k); }
inline double nb_cdf(const NegBinParams& params, std::int64_t k) { return nb_cdf(params.r, params.p, k); }

// Maximum-likelihood fit. Profile structure: p_hat = r / (r + mean) for any
// fixed r, the r score equation is solved by safeguarded Newton. 95%
// confidence intervals are Wald intervals from the observed Fisher
// information at the optimum.
NegBinParams nb_fit_mle(std::span<const std::int64_t> samples);

double beta_log_pdf(double r, double theta, double x);
double beta_pdf(double r, double theta, double x);
double beta_cdf(double r, double theta, double x);
inline double beta_pdf(const BetaParams& params, double x) { return beta_pdf(params.r, params.theta, x); }
inline double beta_cdf(const BetaParams& params, double x) { return beta_cdf(params.r, params.theta, x); }

// Two-dimensional Newton on the digamma score equations, method-of-moments
// start, Wald intervals from the Fisher information. Samples must lie
// strictly inside (0, 1); values on the boundary raise BoundaryValue.
BetaParams beta_fit_mle(std::span<const double> samples);

// Seeded sampling (gamma-Poisson mixture / gamma ratio).
std::vector<std::int64_t> nb_sample(double r, double p, std::size_t n, Rng& rng);
std::vector<double> beta_sample(double r, double theta, std::size_t n, Rng& rng);

}  // namespace polyafit
