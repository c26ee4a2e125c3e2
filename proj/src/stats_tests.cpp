// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyafit/stats_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyafit/special_functions.hpp"

namespace polyafit {

namespace {

TestResult make_result(TestMethod method, double statistic, double p, double alpha, double dof_or_n) {
  TestResult r;
  r.method = method;
  r.statistic = statistic;
  r.p_value = std::clamp(p, 0.0, 1.0);
  r.alpha = alpha;
  r.reject_null = r.p_value < alpha;
  r.dof_or_n = dof_or_n;
  return r;
}

double ks_p_value(double d, double effective_n) {
  const double sn = std::sqrt(effective_n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  return kolmogorov_tail(lambda);
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(upper, lower));
  }
  return d;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments compute_moments(std::span<const double> xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (const double x : xs) m.mean += x;
  m.mean /= n;
  for (const double x : xs) {
    const double dx = x - m.mean;
    m.var += dx * dx;
  }
  m.var = xs.size() > 1 ? m.var / (n - 1.0) : 0.0;
  return m;
}

// Greedy left-to-right merge of expected/observed cells until every bin
// expectation reaches the threshold; an undersized trailing remainder is
// folded into the previous bin.
void merge_bins(const std::vector<double>& expected, const std::vector<double>& observed,
                std::vector<double>* merged_expected, std::vector<double>* merged_observed,
                double min_expected) {
  double acc_e = 0.0, acc_o = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    acc_e += expected[i];
    acc_o += observed[i];
    if (acc_e >= min_expected) {
      merged_expected->push_back(acc_e);
      merged_observed->push_back(acc_o);
      acc_e = acc_o = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (!merged_expected->empty()) {
      merged_expected->back() += acc_e;
      merged_observed->back() += acc_o;
    } else {
      merged_expected->push_back(acc_e);
      merged_observed->push_back(acc_o);
    }
  }
}

TestResult chi2_from_bins(const std::vector<double>& expected, const std::vector<double>& observed,
                          int n_fitted_params, double alpha) {
  if (expected.size() < 2) throw FewerThanTwoBins("chi2_gof: fewer than two bins after merging");
  const double dof = static_cast<double>(expected.size()) - 1.0 - n_fitted_params;
  if (dof < 1.0) throw FewerThanTwoBins("chi2_gof: no degrees of freedom left after merging");
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return make_result(TestMethod::ChiSquare, stat, chi2_upper_tail(stat, dof), alpha, dof);
}

}  // namespace

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                   double alpha) {
  if (samples.size() < 5) throw TestError("ks_test: need at least 5 samples");
  const double d = ks_statistic(samples, cdf);
  const double n = static_cast<double>(samples.size());
  return make_result(TestMethod::KS, d, ks_p_value(d, n), alpha, n);
}

TestResult ks_test_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 5 || b.size() < 5) throw TestError("ks_test_two_sample: need at least 5 samples");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < sa.size() && ib < sb.size()) {
    const double v = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= v) ++ia;
    while (ib < sb.size() && sb[ib] <= v) ++ib;
    d = std::max(d, std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  const double ne = na * nb / (na + nb);
  return make_result(TestMethod::KS, d, ks_p_value(d, ne), alpha, ne);
}

TestResult ks_test_bootstrap(
    std::span<const double> samples,
    const std::function<std::function<double(double)>(std::span<const double>)>& fit_cdf,
    const std::function<std::vector<double>(std::size_t, Rng&)>& sample, int n_boot, double alpha,
    Rng& rng) {
  if (samples.size() < 5) throw TestError("ks_test_bootstrap: need at least 5 samples");
  const auto cdf0 = fit_cdf(samples);
  const double d0 = ks_statistic(samples, cdf0);
  int at_least_as_large = 0;
  for (int b = 0; b < n_boot; ++b) {
    const std::vector<double> resample = sample(samples.size(), rng);
    const auto cdf_b = fit_cdf(resample);
    if (ks_statistic(resample, cdf_b) >= d0) ++at_least_as_large;
  }
  const double p = (1.0 + at_least_as_large) / (1.0 + n_boot);
  return make_result(TestMethod::KS, d0, p, alpha, static_cast<double>(samples.size()));
}

TestResult chi2_gof(std::span<const std::int64_t> samples,
                    const std::function<double(std::int64_t)>& pmf, int n_fitted_params,
                    double alpha) {
  if (samples.size() < 30) throw TestError("chi2_gof: need at least 30 samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const std::int64_t lo = *lo_it, hi = *hi_it;
  const double n = static_cast<double>(samples.size());

  std::vector<double> observed(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const std::int64_t x : samples) observed[static_cast<std::size_t>(x - lo)] += 1.0;

  // Cell expectations over the observed support. The first cell absorbs the
  // pmf mass below lo and the last cell the mass above hi, so expectations
  // sum to n.
  std::vector<double> expected(observed.size(), 0.0);
  double below = 0.0;
  for (std::int64_t k = 0; k < lo; ++k) below += pmf(k);
  double covered = below;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double mass = pmf(k);
    covered += mass;
    expected[static_cast<std::size_t>(k - lo)] = n * mass;
  }
  expected.front() += n * below;
  expected.back() += n * std::max(0.0, 1.0 - covered);

  std::vector<double> me, mo;
  merge_bins(expected, observed, &me, &mo, 5.0);
  return chi2_from_bins(me, mo, n_fitted_params, alpha);
}

TestResult chi2_gof_continuous(std::span<const double> samples,
                               const std::function<double(double)>& cdf, int n_fitted_params,
                               double alpha, int max_bins) {
  if (samples.size() < 5) throw TestError("chi2_gof_continuous: need at least 5 samples");
  if (max_bins < 2) throw TestError("chi2_gof_continuous: max_bins must be >= 2");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  const double n = static_cast<double>(samples.size());
  const double width = (hi - lo) / max_bins;
  if (!(width > 0.0)) throw FewerThanTwoBins("chi2_gof_continuous: degenerate sample range");

  // Outermost cells extend to the full support so expectations sum to n.
  std::vector<double> observed(static_cast<std::size_t>(max_bins), 0.0);
  for (const double x : samples) {
    auto idx = static_cast<std::size_t>(std::min<double>(max_bins - 1, (x - lo) / width));
    observed[idx] += 1.0;
  }
  std::vector<double> expected(static_cast<std::size_t>(max_bins), 0.0);
  double prev = 0.0;
  for (int b = 0; b < max_bins; ++b) {
    const double right = b + 1 == max_bins ? 1.0 : cdf(lo + width * (b + 1));
    expected[static_cast<std::size_t>(b)] = n * (right - prev);
    prev = right;
  }

  std::vector<double> me, mo;
  merge_bins(expected, observed, &me, &mo, 5.0);
  return chi2_from_bins(me, mo, n_fitted_params, alpha);
}

TestResult t_test_one_sample(std::span<const double> samples, double mu0, double alpha) {
  if (samples.size() < 2) throw TestError("t_test_one_sample: need at least 2 samples");
  const Moments m = compute_moments(samples);
  const double n = static_cast<double>(samples.size());
  const double dof = n - 1.0;
  if (m.var == 0.0) {
    const bool exact_null = m.mean == mu0;
    return make_result(TestMethod::TTest1,
                       exact_null ? 0.0 : std::numeric_limits<double>::infinity(),
                       exact_null ? 1.0 : 0.0, alpha, dof);
  }
  const double t = (m.mean - mu0) / std::sqrt(m.var / n);
  return make_result(TestMethod::TTest1, t, student_t_two_tailed_p(t, dof), alpha, dof);
}

TestResult t_test_two_sample(std::span<const double> a, std::span<const double> b, double alpha,
                             bool pooled_variance) {
  if (a.size() < 2 || b.size() < 2) throw TestError("t_test_two_sample: need at least 2 samples per group");
  const Moments ma = compute_moments(a);
  const Moments mb = compute_moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  double t, dof;
  if (pooled_variance) {
    dof = na + nb - 2.0;
    const double sp2 = ((na - 1.0) * ma.var + (nb - 1.0) * mb.var) / dof;
    const double se = std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
    if (se == 0.0) {
      const bool exact_null = ma.mean == mb.mean;
      return make_result(TestMethod::TTest2,
                         exact_null ? 0.0 : std::numeric_limits<double>::infinity(),
                         exact_null ? 1.0 : 0.0, alpha, dof);
    }
    t = (ma.mean - mb.mean) / se;
  } else {
    const double va = ma.var / na;
    const double vb = mb.var / nb;
    const double se2 = va + vb;
    if (se2 == 0.0) {
      const bool exact_null = ma.mean == mb.mean;
      return make_result(TestMethod::TTest2,
                         exact_null ? 0.0 : std::numeric_limits<double>::infinity(),
                         exact_null ? 1.0 : 0.0, alpha, na + nb - 2.0);
    }
    // Welch-Satterthwaite degrees of freedom.
    dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    t = (ma.mean - mb.mean) / std::sqrt(se2);
  }
  return make_result(TestMethod::TTest2, t, student_t_two_tailed_p(t, dof), alpha, dof);
}

}  // namespace polyafit
