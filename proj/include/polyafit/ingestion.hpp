// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyafit/segmentation.hpp"

namespace polyafit {

class IngestError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class MissingColumn : public IngestError {
  using IngestError::IngestError;
};
class EmptyFile : public IngestError {
  using IngestError::IngestError;
};
class CadenceError : public IngestError {
  using IngestError::IngestError;
};
class ZeroTests : public IngestError {
  using IngestError::IngestError;
};

// Days since 1970-01-01 <-> ISO-8601 calendar date.
int days_from_civil(int year, int month, int day);
std::optional<int> parse_iso_date(const std::string& text);
std::string format_iso_date(int epoch_day);

enum class Group { Europe, Italy };
inline const char* group_label(Group g) { return g == Group::Europe ? "E" : "I"; }

enum class DayFlag : std::uint8_t {
  raw = 0,
  missing_filled,
  smoothed_from_weekly,
  removed_outlier,
  removed_negative,
};
const char* day_flag_label(DayFlag flag);

// One entity's aligned daily (confirmed, tests) observations.
struct SeriesRecord {
  std::string series_id;
  Group group = Group::Europe;
  std::vector<int> dates;  // epoch days, strictly increasing
  std::vector<double> confirmed;
  std::vector<double> tests;
  std::vector<DayFlag> confirmed_flags;
  std::vector<DayFlag> tests_flags;
  int warn_count = 0;

  std::size_t size() const { return dates.size(); }
};

// Per-run audit trail of every cleaning decision.
struct CleaningEvent {
  std::string entity;
  int date = 0;  // epoch day; -1 for row-level diagnostics
  std::string column;
  std::string rule;
  double original = 0.0;
  std::string detail;
};
using AuditLog = std::vector<CleaningEvent>;

enum class CsvSchema { National, Regional };

struct CleaningConfig {
  double outlier_iqr_k = 3.0;  // flag values above Q3 + k * IQR
};

// Loads one CSV (header: date,entity,new_cases,new_tests for the national
// schema, date,region,new_confirmed,new_tests for the regional one) into
// per-entity records sorted by date. Duplicated entity+date rows keep the
// last value (warned); rows with unparseable dates or counts are dropped
// with a per-row audit diagnostic. Gaps are preserved here so weekly
// cadence stays detectable; see normalize_daily.
std::vector<SeriesRecord> load_csv(const std::filesystem::path& path, CsvSchema schema,
                                   AuditLog* audit = nullptr);

// Inserts missing days with zero confirmed and zero tests (flagged); the
// result is gap-free with strictly increasing dates.
SeriesRecord normalize_daily(const SeriesRecord& record, AuditLog* audit = nullptr);

// Removes negative daily values and high outliers (value > Q3 + k * IQR of
// the surviving values, recomputed to a fixed point so the operation is
// idempotent). Removed points become zero-valued and flagged.
SeriesRecord clean(const SeriesRecord& record, const CleaningConfig& config,
                   AuditLog* audit = nullptr);

// True when the record reports one value every 7 days.
bool is_weekly_cadence(const SeriesRecord& record);

// Spreads each weekly total uniformly over the 7 days starting at the
// reported date; integer remainders land on the final day, so weekly sums
// are conserved exactly.
SeriesRecord weekly_to_daily(const SeriesRecord& record);

struct ConvergenceCriterion {
  int window_days = 7;
  double epsilon = 0.01;  // max relative change of r_n over the final days
};

// Cumulative confirmed / cumulative tests across a wave window.
struct RatioSeries {
  std::vector<double> values;  // aligned with the window; NaN where cumulative tests == 0
  int first_defined = -1;      // window-relative index of the first defined ratio
  bool converged = false;
  double r_infinity = 0.0;  // ratio at the window close
};

RatioSeries ratio_series(const SeriesRecord& record, const WaveWindow& window,
                         const ConvergenceCriterion& criterion);

}  // namespace polyafit
