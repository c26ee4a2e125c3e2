// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyafit/urn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace polyafit {

void UrnConfig::validate() const {
  if (total <= 0) throw std::invalid_argument("urn: total must be positive");
  if (white < 0 || white > total) throw std::invalid_argument("urn: need 0 <= white <= total");
  if (reinforcement <= 0) throw std::invalid_argument("urn: reinforcement must be positive");
  if (draws_per_step <= 0) throw std::invalid_argument("urn: draws_per_step must be positive");
  if (steps < 0) throw std::invalid_argument("urn: steps must be nonnegative");
  const __int128 final_total =
      static_cast<__int128>(total) +
      static_cast<__int128>(steps) * reinforcement * draws_per_step;
  if (final_total > (static_cast<__int128>(1) << 62)) {
    throw std::invalid_argument("urn: ball count would exceed 2^62");
  }
}

Urn::Urn(const UrnConfig& config, Rng rng)
    : state_{config.white, config.total, 0},
      reinforcement_(config.reinforcement),
      draws_per_step_(config.draws_per_step),
      rng_(rng) {}

std::int64_t Urn::step() {
  // Draws within a step are with replacement: all m draws see the same
  // composition, reinforcement is applied afterwards.
  std::int64_t whites_drawn = 0;
  const std::uint64_t total = static_cast<std::uint64_t>(state_.total);
  const std::uint64_t white = static_cast<std::uint64_t>(state_.white);
  for (std::int64_t i = 0; i < draws_per_step_; ++i) {
    if (rng_.next_below(total) < white) ++whites_drawn;
  }
  state_.white += reinforcement_ * whites_drawn;
  state_.total += reinforcement_ * draws_per_step_;
  state_.step += 1;
  return whites_drawn;
}

UrnTrajectory simulate(const UrnConfig& config) {
  config.validate();
  Urn urn(config, Rng(config.seed));
  UrnTrajectory traj;
  traj.white_draws.reserve(static_cast<std::size_t>(config.steps));
  traj.z.reserve(static_cast<std::size_t>(config.steps));
  traj.rho.reserve(static_cast<std::size_t>(config.steps));

  const double rho0 = config.rho0();
  const double delta = config.delta();
  const bool check_identity = (config.draws_per_step == 1);

  std::int64_t draws = 0;
  for (std::int64_t n = 1; n <= config.steps; ++n) {
    const std::int64_t whites = urn.step();
    traj.white_draw_total += whites;
    draws += config.draws_per_step;

    const double z = static_cast<double>(traj.white_draw_total) / static_cast<double>(draws);
    const double rho = urn.rho();
    traj.white_draws.push_back(whites);
    traj.z.push_back(z);
    traj.rho.push_back(rho);

    if (check_identity) {
      const double nd = static_cast<double>(n) * delta;
      const double algebraic = (rho0 + nd * z) / (1.0 + nd);
      if (std::fabs(algebraic - rho) > 1e-12) {
        throw std::logic_error("urn: tracked fraction disagrees with closed form");
      }
    }
  }
  return traj;
}

UrnTerminal run_terminal(const UrnConfig& config, Rng& rng) {
  config.validate();
  Urn urn(config, rng);
  std::int64_t whites = 0;
  for (std::int64_t n = 0; n < config.steps; ++n) whites += urn.step();
  const std::int64_t draws = config.steps * config.draws_per_step;
  UrnTerminal out;
  out.white_draw_total = whites;
  out.z = draws > 0 ? static_cast<double>(whites) / static_cast<double>(draws) : config.rho0();
  out.rho = urn.rho();
  return out;
}

LimitLawParams limit_params(const UrnConfig& config, std::int64_t n) {
  config.validate();
  if (n < 1) throw std::invalid_argument("limit_params: n must be >= 1");
  const double d = static_cast<double>(config.reinforcement);
  LimitLawParams params;
  params.r = static_cast<double>(config.white) / d;
  params.p = static_cast<double>(config.total) /
             static_cast<double>(config.total + n * config.reinforcement);
  params.theta = static_cast<double>(config.black()) / d;
  return params;
}

MartingaleDiagnostics martingale_check(const UrnConfig& config,
                                       std::span<const std::int64_t> checkpoint_steps,
                                       std::int64_t replicates) {
  if (replicates < 1000) throw std::invalid_argument("martingale_check: need >= 1000 replicates");
  std::int64_t max_step = 0;
  for (const std::int64_t n : checkpoint_steps) {
    if (n < 1) throw std::invalid_argument("martingale_check: checkpoints must be >= 1");
    max_step = std::max(max_step, n);
  }
  UrnConfig run = config;
  run.steps = max_step + 1;
  run.validate();

  const std::size_t n_checks = checkpoint_steps.size();
  std::vector<double> drift_sum(n_checks, 0.0), drift_sq(n_checks, 0.0);
  double final_sum = 0.0, final_sq = 0.0;

  for (std::int64_t rep = 0; rep < replicates; ++rep) {
    Rng rng = Rng::for_stream(config.seed, static_cast<std::uint64_t>(rep));
    Urn urn(run, rng);
    std::vector<double> rho_at(static_cast<std::size_t>(run.steps) + 1);
    rho_at[0] = config.rho0();
    for (std::int64_t n = 1; n <= run.steps; ++n) {
      urn.step();
      rho_at[static_cast<std::size_t>(n)] = urn.rho();
    }
    for (std::size_t c = 0; c < n_checks; ++c) {
      const auto n = static_cast<std::size_t>(checkpoint_steps[c]);
      const double drift = rho_at[n + 1] - rho_at[n];
      drift_sum[c] += drift;
      drift_sq[c] += drift * drift;
    }
    final_sum += rho_at.back();
    final_sq += rho_at.back() * rho_at.back();
  }

  const double nrep = static_cast<double>(replicates);
  MartingaleDiagnostics diag;
  diag.replicates = replicates;
  for (std::size_t c = 0; c < n_checks; ++c) {
    MartingaleCheckpoint cp;
    cp.n = checkpoint_steps[c];
    cp.mean_drift = drift_sum[c] / nrep;
    const double var = std::max(0.0, (drift_sq[c] - nrep * cp.mean_drift * cp.mean_drift) / (nrep - 1.0));
    cp.se_drift = std::sqrt(var / nrep);
    cp.within_four_se = std::fabs(cp.mean_drift) <= 4.0 * cp.se_drift;
    diag.checkpoints.push_back(cp);
  }
  diag.mean_final_rho = final_sum / nrep;
  const double fvar = std::max(0.0, (final_sq - nrep * diag.mean_final_rho * diag.mean_final_rho) / (nrep - 1.0));
  diag.se_final_rho = std::sqrt(fvar / nrep);
  return diag;
}

void write_trajectory_csv(const UrnTrajectory& trajectory, std::ostream& out) {
  out << "n,I_n,Z_n,rho_n\n";
  char buf[96];
  for (std::size_t i = 0; i < trajectory.white_draws.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%lld,%.17g,%.17g\n", i + 1,
                  static_cast<long long>(trajectory.white_draws[i]), trajectory.z[i],
                  trajectory.rho[i]);
    out << buf;
  }
}

}  // namespace polyafit
