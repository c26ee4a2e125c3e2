// Copyright 2026 The polyafit Authors
// SPDX-License-Identifier: Apache-2.0

#include "polyafit/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace polyafit {

int days_from_civil(int year, int month, int day) {
  // Howard Hinnant's civil-days algorithm.
  year -= month <= 2;
  const int era = (year >= 0 ? year : year - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(year - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(day) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<int>(doe) - 719468;
}

namespace {

void civil_from_days(int z, int* year, int* month, int* day) {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  *month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  *year = y + (*month <= 2);
}

int days_in_month(int year, int month) {
  static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[month - 1];
}

bool parse_int(std::string_view text, int* out) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<int> parse_iso_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y, m, d;
  if (!parse_int(std::string_view(text).substr(0, 4), &y) ||
      !parse_int(std::string_view(text).substr(5, 2), &m) ||
      !parse_int(std::string_view(text).substr(8, 2), &d)) {
    return std::nullopt;
  }
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
  return days_from_civil(y, m, d);
}

std::string format_iso_date(int epoch_day) {
  int y, m, d;
  civil_from_days(epoch_day, &y, &m, &d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

const char* day_flag_label(DayFlag flag) {
  switch (flag) {
    case DayFlag::raw: return "raw";
    case DayFlag::missing_filled: return "missing_filled";
    case DayFlag::smoothed_from_weekly: return "smoothed_from_weekly";
    case DayFlag::removed_outlier: return "removed_outlier";
    case DayFlag::removed_negative: return "removed_negative";
  }
  return "unknown";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

bool parse_count(const std::string& text, double* out) {
  const std::string t = trimmed(text);
  if (t.empty()) return false;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), *out);
  return ec == std::errc{} && ptr == t.data() + t.size() && std::isfinite(*out);
}

void note(AuditLog* audit, CleaningEvent event) {
  if (audit != nullptr) audit->push_back(std::move(event));
}

struct Row {
  int date;
  double confirmed;
  double tests;
  std::size_t line_no;
};

}  // namespace

std::vector<SeriesRecord> load_csv(const std::filesystem::path& path, CsvSchema schema,
                                   AuditLog* audit) {
  std::ifstream in(path);
  if (!in) throw IngestError("load_csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw EmptyFile("load_csv: empty file " + path.string());

  const std::string entity_col = schema == CsvSchema::National ? "entity" : "region";
  const std::string cases_col = schema == CsvSchema::National ? "new_cases" : "new_confirmed";
  const std::string tests_col = "new_tests";

  const std::vector<std::string> header = split_csv_line(line);
  int idx_date = -1, idx_entity = -1, idx_cases = -1, idx_tests = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trimmed(header[i]);
    if (name == "date") idx_date = static_cast<int>(i);
    else if (name == entity_col) idx_entity = static_cast<int>(i);
    else if (name == cases_col) idx_cases = static_cast<int>(i);
    else if (name == tests_col) idx_tests = static_cast<int>(i);
  }
  for (const auto& [idx, name] :
       {std::pair{idx_date, "date"}, {idx_entity, entity_col.c_str()},
        {idx_cases, cases_col.c_str()}, {idx_tests, tests_col.c_str()}}) {
    if (idx < 0) throw MissingColumn(std::string("load_csv: missing column '") + name + "' in " +
                                     path.string());
  }

  std::map<std::string, std::vector<Row>> by_entity;
  std::size_t line_no = 1;
  bool any_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    any_row = true;
    const std::vector<std::string> fields = split_csv_line(line);
    const auto need = static_cast<std::size_t>(std::max({idx_date, idx_entity, idx_cases, idx_tests}));
    if (fields.size() <= need) {
      note(audit, {"", -1, "", "row_rejected", 0.0,
                   "line " + std::to_string(line_no) + ": too few fields"});
      continue;
    }
    const std::string entity = trimmed(fields[static_cast<std::size_t>(idx_entity)]);
    const auto date = parse_iso_date(trimmed(fields[static_cast<std::size_t>(idx_date)]));
    double c, s;
    if (entity.empty() || !date.has_value() ||
        !parse_count(fields[static_cast<std::size_t>(idx_cases)], &c) ||
        !parse_count(fields[static_cast<std::size_t>(idx_tests)], &s)) {
      note(audit, {entity, date.value_or(-1), "", "row_rejected", 0.0,
                   "line " + std::to_string(line_no) + ": unparseable date or count"});
      continue;
    }
    by_entity[entity].push_back({*date, c, s, line_no});
  }
  if (!any_row) throw EmptyFile("load_csv: no data rows in " + path.string());

  std::vector<SeriesRecord> records;
  records.reserve(by_entity.size());
  for (auto& [entity, rows] : by_entity) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    SeriesRecord rec;
    rec.series_id = entity;
    rec.group = schema == CsvSchema::National ? Group::Europe : Group::Italy;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      // Duplicate dates keep the last occurrence in file order.
      if (i + 1 < rows.size() && rows[i + 1].date == rows[i].date) {
        rec.warn_count += 1;
        note(audit, {entity, rows[i].date, "", "duplicate_date", rows[i].confirmed,
                     "superseded by line " + std::to_string(rows[i + 1].line_no)});
        continue;
      }
      rec.dates.push_back(rows[i].date);
      rec.confirmed.push_back(rows[i].confirmed);
      rec.tests.push_back(rows[i].tests);
      rec.confirmed_flags.push_back(DayFlag::raw);
      rec.tests_flags.push_back(DayFlag::raw);
      if (rows[i].confirmed > rows[i].tests) {
        rec.warn_count += 1;
        note(audit, {entity, rows[i].date, "confirmed", "confirmed_exceeds_tests",
                     rows[i].confirmed, ""});
      }
    }
    records.push_back(std::move(rec));
  }
  return records;  // std::map iteration keeps ids lexicographically stable
}

SeriesRecord normalize_daily(const SeriesRecord& record, AuditLog* audit) {
  SeriesRecord out;
  out.series_id = record.series_id;
  out.group = record.group;
  out.warn_count = record.warn_count;
  if (record.dates.empty()) return out;

  const int first = record.dates.front();
  const int last = record.dates.back();
  out.dates.reserve(static_cast<std::size_t>(last - first + 1));
  std::size_t src = 0;
  for (int day = first; day <= last; ++day) {
    out.dates.push_back(day);
    if (src < record.dates.size() && record.dates[src] == day) {
      out.confirmed.push_back(record.confirmed[src]);
      out.tests.push_back(record.tests[src]);
      out.confirmed_flags.push_back(record.confirmed_flags[src]);
      out.tests_flags.push_back(record.tests_flags[src]);
      ++src;
    } else {
      out.confirmed.push_back(0.0);
      out.tests.push_back(0.0);
      out.confirmed_flags.push_back(DayFlag::missing_filled);
      out.tests_flags.push_back(DayFlag::missing_filled);
      note(audit, {record.series_id, day, "", "missing_day_filled", 0.0, ""});
    }
  }
  return out;
}

namespace {

// Type-7 (linear interpolation) quantile of already sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void clean_column(const std::string& entity, const std::vector<int>& dates,
                  std::vector<double>* values, std::vector<DayFlag>* flags,
                  const std::string& column, double k, AuditLog* audit) {
  for (std::size_t i = 0; i < values->size(); ++i) {
    if ((*values)[i] < 0.0) {
      note(audit, {entity, dates[i], column, "removed_negative", (*values)[i], ""});
      (*values)[i] = 0.0;
      (*flags)[i] = DayFlag::removed_negative;
    }
  }
  // Recompute the threshold over survivors until stable; this makes the
  // whole operation idempotent.
  for (int pass = 0; pass < 100; ++pass) {
    std::vector<double> keep;
    keep.reserve(values->size());
    for (std::size_t i = 0; i < values->size(); ++i) {
      const DayFlag f = (*flags)[i];
      if (f != DayFlag::removed_outlier && f != DayFlag::removed_negative) {
        keep.push_back((*values)[i]);
      }
    }
    if (keep.size() < 4) break;
    std::sort(keep.begin(), keep.end());
    const double q1 = quantile_sorted(keep, 0.25);
    const double q3 = quantile_sorted(keep, 0.75);
    const double threshold = q3 + k * (q3 - q1);
    bool changed = false;
    for (std::size_t i = 0; i < values->size(); ++i) {
      const DayFlag f = (*flags)[i];
      if (f == DayFlag::removed_outlier || f == DayFlag::removed_negative) continue;
      if ((*values)[i] > threshold) {
        note(audit, {entity, dates[i], column, "removed_outlier", (*values)[i], ""});
        (*values)[i] = 0.0;
        (*flags)[i] = DayFlag::removed_outlier;
        changed = true;
      }
    }
    if (!changed) break;
  }
}

}  // namespace

SeriesRecord clean(const SeriesRecord& record, const CleaningConfig& config, AuditLog* audit) {
  SeriesRecord out = record;
  clean_column(out.series_id, out.dates, &out.confirmed, &out.confirmed_flags, "confirmed",
               config.outlier_iqr_k, audit);
  clean_column(out.series_id, out.dates, &out.tests, &out.tests_flags, "tests",
               config.outlier_iqr_k, audit);
  return out;
}

bool is_weekly_cadence(const SeriesRecord& record) {
  if (record.dates.size() < 2) return false;
  for (std::size_t i = 1; i < record.dates.size(); ++i) {
    if (record.dates[i] - record.dates[i - 1] != 7) return false;
  }
  return true;
}

namespace {

void spread_week(double total, double* out7) {
  const double base = std::floor(total / 7.0);
  for (int i = 0; i < 6; ++i) out7[i] = base;
  out7[6] = total - 6.0 * base;
}

}  // namespace

SeriesRecord weekly_to_daily(const SeriesRecord& record) {
  if (!is_weekly_cadence(record)) {
    throw CadenceError("weekly_to_daily: '" + record.series_id + "' is not on a weekly cadence");
  }
  SeriesRecord out;
  out.series_id = record.series_id;
  out.group = record.group;
  out.warn_count = record.warn_count;
  out.dates.reserve(record.size() * 7);
  for (std::size_t w = 0; w < record.size(); ++w) {
    double c7[7], s7[7];
    spread_week(record.confirmed[w], c7);
    spread_week(record.tests[w], s7);
    for (int i = 0; i < 7; ++i) {
      out.dates.push_back(record.dates[w] + i);
      out.confirmed.push_back(c7[i]);
      out.tests.push_back(s7[i]);
      out.confirmed_flags.push_back(DayFlag::smoothed_from_weekly);
      out.tests_flags.push_back(DayFlag::smoothed_from_weekly);
    }
  }
  return out;
}

RatioSeries ratio_series(const SeriesRecord& record, const WaveWindow& window,
                         const ConvergenceCriterion& criterion) {
  if (window.onset < 0 || window.close < window.onset ||
      static_cast<std::size_t>(window.close) >= record.size()) {
    throw std::invalid_argument("ratio_series: window outside record range");
  }
  RatioSeries out;
  double cum_c = 0.0, cum_s = 0.0;
  for (int i = window.onset; i <= window.close; ++i) {
    cum_c += record.confirmed[static_cast<std::size_t>(i)];
    cum_s += record.tests[static_cast<std::size_t>(i)];
    if (cum_s > 0.0) {
      if (out.first_defined < 0) out.first_defined = i - window.onset;
      out.values.push_back(cum_c / cum_s);
    } else {
      out.values.push_back(std::nan(""));
    }
  }
  if (!(cum_s > 0.0)) {
    throw ZeroTests("ratio_series: cumulative tests are zero at the window close for '" +
                    record.series_id + "'");
  }
  out.r_infinity = out.values.back();

  // Convergence: the relative day-to-day change of r_n stays below epsilon
  // across the final window_days days.
  const int n = static_cast<int>(out.values.size());
  const int tail_start = std::max(out.first_defined + 1, n - criterion.window_days);
  bool ok = n - tail_start >= 1;
  for (int i = tail_start; i < n; ++i) {
    const double prev = out.values[static_cast<std::size_t>(i - 1)];
    const double cur = out.values[static_cast<std::size_t>(i)];
    if (std::isnan(prev) || std::isnan(cur)) {
      ok = false;
      break;
    }
    const double rel = std::fabs(cur - prev) / std::max(std::fabs(prev), 1e-300);
    if (rel >= criterion.epsilon) {
      ok = false;
      break;
    }
  }
  out.converged = ok;
  return out;
}

}  // namespace polyafit
