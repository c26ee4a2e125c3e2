// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace polyafit {

struct SegmentationConfig {
  int smoothing_window = 7;          // odd; weekly reporting noise dominates
  double prominence_fraction = 0.10; // peak must exceed this fraction of the global max
  int min_wave_len = 21;             // windows shorter than this are discarded
  int max_waves = 2;
};

// One infection wave: indices into the daily series.
struct WaveWindow {
  int wave_index = 0;  // 1-based, chronological
  int onset = 0;
  int peak = 0;
  int close = 0;
  double peak_height = 0.0;  // smoothed value at the peak

  int length() const { return close - onset + 1; }
};

// Centered moving average with edge truncation (the window shrinks near the
// boundaries); window must be odd, window = 1 is the identity.
std::vector<double> smooth(std::span<const double> series, int window);

// Wave detection: smooth, collect local maxima above the prominence
// threshold, rank by height (ties to the earlier day), and for each
// selected peak walk outward to the nearest local minimum on each side
// (series boundaries are acceptable endpoints). Returns at most
// config.max_waves windows in chronological order; zero or one windows mean
// no wave / a single wave was found, the caller decides what that implies.
std::vector<WaveWindow> detect_waves(std::span<const double> series,
                                     const SegmentationConfig& config);

}  // namespace polyafit
