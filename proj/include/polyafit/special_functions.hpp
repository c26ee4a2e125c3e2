// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace polyafit {

// Natural log of the gamma function. Thin wrapper over std::lgamma,
// restricted to x > 0 (the only range this project needs).
double log_gamma(double x);

// log of the Beta function B(a, b).
double log_beta(double a, double b);

// Digamma psi(x) = d/dx log Gamma(x), x > 0. Recurrence below 10,
// Bernoulli asymptotic series above. Good to ~1e-13 relative.
double digamma(double x);

// Trigamma psi'(x), x > 0.
double trigamma(double x);

// Regularized incomplete beta I_x(a, b), evaluated with the modified
// Lentz continued fraction.
double reg_inc_beta(double a, double b, double x);

// Regularized lower/upper incomplete gamma P(a, x) and Q(a, x) = 1 - P.
// Series expansion for x < a + 1, continued fraction otherwise.
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi2_upper_tail(double statistic, double dof);

// Student-t cdf and the two-tailed p-value for a t statistic.
double student_t_cdf(double t, double dof);
double student_t_two_tailed_p(double t, double dof);

// Standard normal cdf.
double normal_cdf(double z);

// Kolmogorov asymptotic tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2),
// clamped to [0, 1].
double kolmogorov_tail(double lambda);

}  // namespace polyafit
