// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyafit/rng.hpp"

namespace polyafit {

class TestError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Chi-square binning collapsed below two cells (or zero degrees of freedom).
class FewerThanTwoBins : public TestError {
  using TestError::TestError;
};

enum class TestMethod { KS, ChiSquare, TTest1, TTest2 };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject_null = false;  // always p_value < alpha
  double dof_or_n = 0.0;     // degrees of freedom or effective sample size
  TestMethod method = TestMethod::KS;
};

// One-sample Kolmogorov-Smirnov test against a cdf. The p-value uses the
// asymptotic Kolmogorov tail with the small-sample correction
// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) D. Applied to discrete data or
// fitted parameters the p-value is approximate (and conservative), which
// mirrors the usual kstest usage.
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                   double alpha);

TestResult ks_test_two_sample(std::span<const double> a, std::span<const double> b, double alpha);

// Parametric-bootstrap KS p-value (B resamples, each refit) for honest
// calibration when the reference cdf carries fitted parameters. `fit_cdf`
// fits its argument and returns the fitted cdf; `sample` draws a synthetic
// dataset of the given size from the fit of the original data.
TestResult ks_test_bootstrap(
    std::span<const double> samples,
    const std::function<std::function<double(double)>(std::span<const double>)>& fit_cdf,
    const std::function<std::vector<double>(std::size_t, Rng&)>& sample, int n_boot, double alpha,
    Rng& rng);

// Chi-square goodness of fit for integer samples against a pmf. Cells over
// the observed support (plus the two tails) are merged left to right until
// every expected count is >= 5; dof = bins - 1 - n_fitted_params.
TestResult chi2_gof(std::span<const std::int64_t> samples,
                    const std::function<double(std::int64_t)>& pmf, int n_fitted_params,
                    double alpha);

// Continuous variant: equal-width cells over the sample range, expected
// masses from the cdf, same merging rule.
TestResult chi2_gof_continuous(std::span<const double> samples,
                               const std::function<double(double)>& cdf, int n_fitted_params,
                               double alpha, int max_bins = 10);

// Two-tailed one-sample t-test. Zero-variance samples short-circuit:
// p = 1 when the mean equals mu0, p = 0 otherwise.
TestResult t_test_one_sample(std::span<const double> samples, double mu0, double alpha);

// Two-tailed two-sample t-test, Welch by default (pooled variance on
// request, matching ttest2 defaults).
TestResult t_test_two_sample(std::span<const double> a, std::span<const double> b, double alpha,
                             bool pooled_variance = false);

}  // namespace polyafit
