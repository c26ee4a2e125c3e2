// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polyafit/rng.hpp"

namespace polyafit {

// Two-color reinforcement urn: start with `total` balls of which `white`
// are white; each step draws `draws_per_step` balls with replacement and
// adds `reinforcement` balls of the drawn color per draw.
struct UrnConfig {
  std::int64_t total = 0;           // N, initial ball count
  std::int64_t white = 0;           // w, initial white count
  std::int64_t reinforcement = 1;   // d, balls added per draw
  std::int64_t draws_per_step = 1;  // m
  std::int64_t steps = 0;           // n_max
  std::uint64_t seed = 0;

  std::int64_t black() const { return total - white; }
  double delta() const { return static_cast<double>(reinforcement) / static_cast<double>(total); }
  double rho0() const { return static_cast<double>(white) / static_cast<double>(total); }

  // Throws std::invalid_argument on nonsensical or overflow-prone configs
  // (ball counts are kept within 2^62).
  void validate() const;
};

struct UrnState {
  std::int64_t white = 0;
  std::int64_t total = 0;
  std::int64_t step = 0;

  double fraction_white() const { return static_cast<double>(white) / static_cast<double>(total); }
};

struct UrnTrajectory {
  std::vector<std::int64_t> white_draws;  // per-step white-draw count (0/1 when m = 1)
  std::vector<double> z;                  // running average of white draws per draw
  std::vector<double> rho;                // tracked urn fraction after each step
  std::int64_t white_draw_total = 0;
};

// Closed-form parameters of the limit laws at draw count n:
// counts of white draws are approximately NB(r, p) and the limiting sample
// average is Beta(r, theta).
struct LimitLawParams {
  double r = 0.0;      // w / d
  double p = 0.0;      // N / (N + n d)
  double theta = 0.0;  // N / d - r

  double beta_mean() const { return r / (r + theta); }
};

class Urn {
 public:
  Urn(const UrnConfig& config, Rng rng);

  // One reinforcement step; returns the number of white balls drawn.
  std::int64_t step();

  const UrnState& state() const { return state_; }
  double rho() const { return state_.fraction_white(); }

 private:
  UrnState state_;
  std::int64_t reinforcement_;
  std::int64_t draws_per_step_;
  Rng rng_;
};

// Full trajectory of `config.steps` steps, deterministic in config.seed.
// For m = 1 the tracked fraction is cross-checked against the algebraic
// identity rho_n = (rho0 + n delta Z_n) / (1 + n delta) at every step.
UrnTrajectory simulate(const UrnConfig& config);

// Terminal summary only (no per-step storage); used by replicate studies.
struct UrnTerminal {
  std::int64_t white_draw_total = 0;
  double z = 0.0;
  double rho = 0.0;
};
UrnTerminal run_terminal(const UrnConfig& config, Rng& rng);

LimitLawParams limit_params(const UrnConfig& config, std::int64_t n);

// Martingale diagnostic: mean one-step drift of rho at each checkpoint,
// across independent replicates.
struct MartingaleCheckpoint {
  std::int64_t n = 0;
  double mean_drift = 0.0;
  double se_drift = 0.0;
  bool within_four_se = false;
};
struct MartingaleDiagnostics {
  std::vector<MartingaleCheckpoint> checkpoints;
  double mean_final_rho = 0.0;
  double se_final_rho = 0.0;
  std::int64_t replicates = 0;
};
MartingaleDiagnostics martingale_check(const UrnConfig& config,
                                       std::span<const std::int64_t> checkpoint_steps,
                                       std::int64_t replicates);

// CSV export, columns: n, I_n, Z_n, rho_n.
void write_trajectory_csv(const UrnTrajectory& trajectory, std::ostream& out);

}  // namespace polyafit
