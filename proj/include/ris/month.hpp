#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ris {

// Calendar month in UTC. Ordered and hashable through its ordinal.
struct YearMonth {
  int year{1970};
  int month{1};  // 1..12

  [[nodiscard]] constexpr int ordinal() const { return year * 12 + (month - 1); }

  static constexpr YearMonth from_ordinal(int ord) {
    int y = ord / 12;
    int m = ord % 12;
    if (m < 0) {
      m += 12;
      --y;
    }
    return YearMonth{y, m + 1};
  }

  [[nodiscard]] constexpr YearMonth plus(int months) const {
    return from_ordinal(ordinal() + months);
  }

  friend constexpr auto operator<=>(const YearMonth& a, const YearMonth& b) {
    return a.ordinal() <=> b.ordinal();
  }
  friend constexpr bool operator==(const YearMonth& a, const YearMonth& b) {
    return a.ordinal() == b.ordinal();
  }

  // "YYYY-MM"
  [[nodiscard]] std::string str() const;

  // Accepts "YYYY-MM" or "YYYY-MM-DD"; the day part is ignored.
  static YearMonth parse(std::string_view text);

  // Month containing the given UTC epoch second.
  static YearMonth from_epoch(std::int64_t seconds);

  // First and last second of the month (UTC, inclusive).
  [[nodiscard]] std::int64_t first_second() const;
  [[nodiscard]] std::int64_t last_second() const;
};

// Inclusive month interval.
struct MonthRange {
  YearMonth start;
  YearMonth end;

  [[nodiscard]] bool contains(YearMonth m) const { return start <= m && m <= end; }
  [[nodiscard]] int size() const { return end.ordinal() - start.ordinal() + 1; }

  // "YYYY-MM..YYYY-MM"
  static MonthRange parse(std::string_view text);
  [[nodiscard]] std::string str() const { return start.str() + ".." + end.str(); }
};

inline std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

inline YearMonth YearMonth::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("invalid month '" + std::string(text) + "'"); };
  if (text.size() < 7 || text[4] != '-') throw bad();
  int y = 0;
  int m = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (text[i] < '0' || text[i] > '9') throw bad();
    y = y * 10 + (text[i] - '0');
  }
  for (std::size_t i = 5; i < 7; ++i) {
    if (text[i] < '0' || text[i] > '9') throw bad();
    m = m * 10 + (text[i] - '0');
  }
  if (m < 1 || m > 12) throw bad();
  if (text.size() > 7 && text[7] != '-') throw bad();
  return YearMonth{y, m};
}

inline YearMonth YearMonth::from_epoch(std::int64_t seconds) {
  using namespace std::chrono;
  const sys_seconds tp{seconds * 1s};
  const year_month_day ymd{floor<days>(tp)};
  return YearMonth{static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month()))};
}

inline std::int64_t YearMonth::first_second() const {
  using namespace std::chrono;
  const sys_days d{std::chrono::year{year} / std::chrono::month{static_cast<unsigned>(month)} / 1};
  return duration_cast<seconds>(d.time_since_epoch()).count();
}

inline std::int64_t YearMonth::last_second() const { return plus(1).first_second() - 1; }

inline MonthRange MonthRange::parse(std::string_view text) {
  const auto sep = text.find("..");
  if (sep == std::string_view::npos) {
    throw std::invalid_argument("invalid month range '" + std::string(text) + "' (want YYYY-MM..YYYY-MM)");
  }
  MonthRange r{YearMonth::parse(text.substr(0, sep)), YearMonth::parse(text.substr(sep + 2))};
  if (r.end < r.start) {
    throw std::invalid_argument("month range '" + std::string(text) + "' ends before it starts");
  }
  return r;
}

}  // namespace ris
