// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyafit/segmentation.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyafit {

std::vector<double> smooth(std::span<const double> series, int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("smooth: window must be a positive odd integer");
  }
  std::vector<double> out(series.begin(), series.end());
  if (window == 1 || series.empty()) return out;

  std::vector<double> prefix(series.size() + 1, 0.0);
  for (std::size_t i = 0; i < series.size(); ++i) prefix[i + 1] = prefix[i] + series[i];

  const int n = static_cast<int>(series.size());
  const int half = window / 2;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    out[static_cast<std::size_t>(i)] =
        (prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)]) /
        (hi - lo + 1);
  }
  return out;
}

namespace {

struct Candidate {
  int index;
  double height;
};

// Walk from the peak to the nearest local minimum on one side. Plateaus
// along the descent are crossed; a tie among minimum values resolves to the
// point closest to the peak.
int walk_to_minimum(const std::vector<double>& s, int peak, int direction) {
  const int n = static_cast<int>(s.size());
  int j = peak;
  while (j + direction >= 0 && j + direction < n &&
         s[static_cast<std::size_t>(j + direction)] <= s[static_cast<std::size_t>(j)]) {
    j += direction;
  }
  while (j != peak && s[static_cast<std::size_t>(j - direction)] == s[static_cast<std::size_t>(j)]) {
    j -= direction;
  }
  return j;
}

}  // namespace

std::vector<WaveWindow> detect_waves(std::span<const double> series,
                                     const SegmentationConfig& config) {
  const int n = static_cast<int>(series.size());
  if (n < 2 * config.min_wave_len) {
    throw std::invalid_argument("detect_waves: series shorter than 2 * min_wave_len");
  }
  const std::vector<double> s = smooth(series, config.smoothing_window);

  const double global_max = *std::max_element(s.begin(), s.end());
  if (!(global_max > 0.0)) return {};
  const double threshold = config.prominence_fraction * global_max;

  // Local maxima, plateaus represented by their first index.
  std::vector<Candidate> candidates;
  for (int i = 0; i < n; ++i) {
    const double v = s[static_cast<std::size_t>(i)];
    if (i > 0 && s[static_cast<std::size_t>(i - 1)] == v) continue;
    if (i > 0 && s[static_cast<std::size_t>(i - 1)] > v) continue;
    int j = i + 1;
    while (j < n && s[static_cast<std::size_t>(j)] == v) ++j;
    if (j < n && s[static_cast<std::size_t>(j)] > v) continue;
    if (v > threshold) candidates.push_back({i, v});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.height != b.height) return a.height > b.height;
    return a.index < b.index;
  });

  std::vector<WaveWindow> windows;
  for (const Candidate& cand : candidates) {
    if (static_cast<int>(windows.size()) >= config.max_waves) break;
    // A peak inside an already accepted window belongs to that wave.
    bool absorbed = false;
    for (const WaveWindow& w : windows) {
      if (cand.index >= w.onset && cand.index <= w.close) absorbed = true;
    }
    if (absorbed) continue;

    WaveWindow w;
    w.peak = cand.index;
    w.peak_height = cand.height;
    w.onset = walk_to_minimum(s, cand.index, -1);
    w.close = walk_to_minimum(s, cand.index, +1);
    if (w.length() < config.min_wave_len) continue;
    windows.push_back(w);
  }

  std::sort(windows.begin(), windows.end(),
            [](const WaveWindow& a, const WaveWindow& b) { return a.peak < b.peak; });
  for (std::size_t i = 0; i < windows.size(); ++i) windows[i].wave_index = static_cast<int>(i) + 1;
  return windows;
}

}  // namespace polyafit
