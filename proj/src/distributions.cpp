// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyafit/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "polyafit/special_functions.hpp"

namespace polyafit {

namespace {

constexpr double kZ95 = 1.959963984540054;  // Phi^-1(0.975)
constexpr double kRBoxLo = 1e-6;
constexpr double kRBoxHi = 1e6;

void check_nb_params(double r, double p) {
  if (!(r > 0.0)) throw std::domain_error("negative binomial: r must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("negative binomial: p must be in (0,1)");
}

void check_beta_params(double r, double theta) {
  if (!(r > 0.0) || !(theta > 0.0)) throw std::domain_error("beta: parameters must be > 0");
}

struct SampleMoments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

template <typename T>
SampleMoments moments(std::span<const T> xs) {
  SampleMoments m;
  const double n = static_cast<double>(xs.size());
  for (const T x : xs) m.mean += static_cast<double>(x);
  m.mean /= n;
  if (xs.size() > 1) {
    for (const T x : xs) {
      const double d = static_cast<double>(x) - m.mean;
      m.var += d * d;
    }
    m.var /= (n - 1.0);
  }
  return m;
}

}  // namespace

double nb_log_pmf(double r, double p, std::int64_t k) {
  check_nb_params(r, p);
  if (k < 0) throw std::domain_error("negative binomial: k must be >= 0");
  const double kd = static_cast<double>(k);
  return log_gamma(kd + r) - log_gamma(r) - log_gamma(kd + 1.0) + r * std::log(p) +
         kd * std::log1p(-p);
}

double nb_pmf(double r, double p, std::int64_t k) { return std::exp(nb_log_pmf(r, p, k)); }

double nb_cdf(double r, double p, std::int64_t k) {
  check_nb_params(r, p);
  if (k < 0) return 0.0;
  return reg_inc_beta(r, static_cast<double>(k) + 1.0, p);
}

namespace {

// Profile log-likelihood pieces for the NB fit. With p substituted by its
// conditional optimum r/(r + mean), the score in r is
//   g(r) = sum psi(x_i + r) - n psi(r) + n log(r / (r + mean)).
struct NbProfile {
  std::span<const std::int64_t> xs;
  double mean;

  double score(double r) const {
    double s = 0.0;
    for (const std::int64_t x : xs) s += digamma(static_cast<double>(x) + r);
    const double n = static_cast<double>(xs.size());
    return s - n * digamma(r) + n * std::log(r / (r + mean));
  }

  double score_derivative(double r) const {
    double s = 0.0;
    for (const std::int64_t x : xs) s += trigamma(static_cast<double>(x) + r);
    const double n = static_cast<double>(xs.size());
    return s - n * trigamma(r) + n * mean / (r * (r + mean));
  }

  double log_likelihood(double r) const {
    const double n = static_cast<double>(xs.size());
    const double p = r / (r + mean);
    double ll = 0.0;
    for (const std::int64_t x : xs) {
      const double xd = static_cast<double>(x);
      ll += log_gamma(xd + r) - log_gamma(xd + 1.0);
    }
    ll += -n * log_gamma(r) + n * r * std::log(p) + n * mean * std::log1p(-p);
    return ll;
  }
};

double golden_section_max(const NbProfile& prof, double lo, double hi) {
  // Maximize the profile likelihood over log r; unimodal on the bracket.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo), b = std::log(hi);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = prof.log_likelihood(std::exp(c));
  double fd = prof.log_likelihood(std::exp(d));
  for (int i = 0; i < 300 && (b - a) > 1e-13; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = prof.log_likelihood(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = prof.log_likelihood(std::exp(d));
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace

NegBinParams nb_fit_mle(std::span<const std::int64_t> samples) {
  if (samples.size() < 10) throw FitError("nb_fit_mle: need at least 10 samples");
  for (const std::int64_t x : samples) {
    if (x < 0) throw std::domain_error("nb_fit_mle: samples must be nonnegative");
  }
  const SampleMoments m = moments(samples);
  if (!(m.var > m.mean)) {
    throw UnderdispersedData("nb_fit_mle: sample variance <= mean");
  }

  const NbProfile prof{samples, m.mean};

  // Bracket the score root inside the box; g decreases from +inf at 0+.
  double lo = kRBoxLo, hi = std::clamp(m.mean * m.mean / (m.var - m.mean), kRBoxLo, kRBoxHi);
  if (prof.score(hi) > 0.0) {
    while (prof.score(hi) > 0.0) {
      hi *= 2.0;
      if (hi > kRBoxHi) throw NonConvergence("nb_fit_mle: r exceeds the search box");
    }
    lo = hi / 2.0;
  } else {
    lo = hi / 2.0;
    while (prof.score(lo) < 0.0) {
      lo /= 2.0;
      if (lo < kRBoxLo) throw NonConvergence("nb_fit_mle: r below the search box");
    }
    hi = lo * 2.0;
  }

  // Newton safeguarded by the bracket.
  double r = 0.5 * (lo + hi);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const double g = prof.score(r);
    if (std::fabs(g) < 1e-10 * static_cast<double>(samples.size())) {
      converged = true;
      break;
    }
    if (g > 0.0) {
      lo = r;
    } else {
      hi = r;
    }
    const double dg = prof.score_derivative(r);
    double next = r - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - r) < 1e-14 * r) {
      r = next;
      converged = true;
      break;
    }
    r = next;
  }
  if (!converged) {
    r = golden_section_max(prof, lo, hi);
    if (std::fabs(prof.score(r)) > 1e-6) {
      throw NonConvergence("nb_fit_mle: score did not vanish");
    }
  }

  const double n = static_cast<double>(samples.size());
  const double p = r / (r + m.mean);

  // Observed information of the full (r, p) likelihood at the optimum.
  double sum_trigamma = 0.0;
  for (const std::int64_t x : samples) sum_trigamma += trigamma(static_cast<double>(x) + r);
  const double i_rr = n * trigamma(r) - sum_trigamma;
  const double i_rp = -n / p;
  const double q = 1.0 - p;
  const double i_pp = n * r / (p * p) + n * m.mean / (q * q);
  const double det = i_rr * i_pp - i_rp * i_rp;
  if (!(det > 0.0) || !(i_rr > 0.0)) {
    throw NonConvergence("nb_fit_mle: information matrix not positive definite");
  }
  const double se_r = std::sqrt(i_pp / det);
  const double se_p = std::sqrt(i_rr / det);

  NegBinParams out;
  out.r = r;
  out.p = p;
  out.ci_r = {std::max(0.0, r - kZ95 * se_r), r + kZ95 * se_r};
  out.ci_p = {std::max(1e-15, p - kZ95 * se_p), std::min(1.0 - 1e-15, p + kZ95 * se_p)};
  out.log_likelihood = prof.log_likelihood(r);
  out.n_obs = static_cast<std::int64_t>(samples.size());
  return out;
}

double beta_log_pdf(double r, double theta, double x) {
  check_beta_params(r, theta);
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("beta_pdf: x must be in (0,1)");
  return (r - 1.0) * std::log(x) + (theta - 1.0) * std::log1p(-x) - log_beta(r, theta);
}

double beta_pdf(double r, double theta, double x) { return std::exp(beta_log_pdf(r, theta, x)); }

double beta_cdf(double r, double theta, double x) {
  check_beta_params(r, theta);
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta_cdf: x must be in [0,1]");
  return reg_inc_beta(r, theta, x);
}

BetaParams beta_fit_mle(std::span<const double> samples) {
  if (samples.size() < 2) throw FitError("beta_fit_mle: need at least 2 samples");
  double s_logx = 0.0, s_log1mx = 0.0;
  for (const double x : samples) {
    if (!(x > 0.0 && x < 1.0)) {
      throw BoundaryValue("beta_fit_mle: sample on or outside (0,1)");
    }
    s_logx += std::log(x);
    s_log1mx += std::log1p(-x);
  }
  const double n = static_cast<double>(samples.size());
  s_logx /= n;
  s_log1mx /= n;

  // Method-of-moments start; symmetric fallback when the moment estimate
  // is degenerate.
  const SampleMoments m = moments(samples);
  double r = 1.0, theta = 1.0;
  if (m.var > 0.0 && m.var < m.mean * (1.0 - m.mean)) {
    const double t = m.mean * (1.0 - m.mean) / m.var - 1.0;
    r = m.mean * t;
    theta = (1.0 - m.mean) * t;
  }
  r = std::clamp(r, 1e-6, 1e9);
  theta = std::clamp(theta, 1e-6, 1e9);

  // Damped Newton on the (score / n) equations.
  auto score = [&](double a, double b, double* f1, double* f2) {
    const double psi_ab = digamma(a + b);
    *f1 = psi_ab - digamma(a) + s_logx;
    *f2 = psi_ab - digamma(b) + s_log1mx;
  };

  double f1, f2;
  score(r, theta, &f1, &f2);
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(f1) < 1e-12 && std::fabs(f2) < 1e-12) {
      converged = true;
      break;
    }
    const double tri_ab = trigamma(r + theta);
    const double j11 = tri_ab - trigamma(r);
    const double j22 = tri_ab - trigamma(theta);
    const double j12 = tri_ab;
    const double det = j11 * j22 - j12 * j12;
    if (det == 0.0) break;
    double dr = -(j22 * f1 - j12 * f2) / det;
    double dt = -(j11 * f2 - j12 * f1) / det;

    double step = 1.0;
    double nr = r, nt = theta, nf1 = f1, nf2 = f2;
    const double norm0 = std::max(std::fabs(f1), std::fabs(f2));
    for (int halving = 0; halving < 60; ++halving) {
      nr = r + step * dr;
      nt = theta + step * dt;
      if (nr > 1e-9 && nt > 1e-9 && nr < 1e12 && nt < 1e12) {
        score(nr, nt, &nf1, &nf2);
        if (std::max(std::fabs(nf1), std::fabs(nf2)) < norm0) break;
      }
      step *= 0.5;
    }
    r = nr;
    theta = nt;
    f1 = nf1;
    f2 = nf2;
  }
  if (!converged && !(std::fabs(f1) < 1e-9 && std::fabs(f2) < 1e-9)) {
    throw NonConvergence("beta_fit_mle: Newton did not converge");
  }

  // Fisher information for Beta does not involve the data.
  const double tri_ab = trigamma(r + theta);
  const double i11 = n * (trigamma(r) - tri_ab);
  const double i22 = n * (trigamma(theta) - tri_ab);
  const double i12 = -n * tri_ab;
  const double det = i11 * i22 - i12 * i12;
  if (!(det > 0.0)) throw NonConvergence("beta_fit_mle: information matrix not positive definite");
  const double se_r = std::sqrt(i22 / det);
  const double se_t = std::sqrt(i11 / det);

  BetaParams out;
  out.r = r;
  out.theta = theta;
  out.ci_r = {std::max(0.0, r - kZ95 * se_r), r + kZ95 * se_r};
  out.ci_theta = {std::max(0.0, theta - kZ95 * se_t), theta + kZ95 * se_t};
  out.log_likelihood =
      n * ((r - 1.0) * s_logx + (theta - 1.0) * s_log1mx - log_beta(r, theta));
  out.n_obs = static_cast<std::int64_t>(samples.size());
  return out;
}

std::vector<std::int64_t> nb_sample(double r, double p, std::size_t n, Rng& rng) {
  check_nb_params(r, p);
  std::vector<std::int64_t> out;
  out.reserve(n);
  const double scale = (1.0 - p) / p;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(rng.poisson(rng.gamma(r) * scale));
  }
  return out;
}

std::vector<double> beta_sample(double r, double theta, std::size_t n, Rng& rng) {
  check_beta_params(r, theta);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g1 = rng.gamma(r);
    const double g2 = rng.gamma(theta);
    out.push_back(g1 / (g1 + g2));
  }
  return out;
}

}  // namespace polyafit
