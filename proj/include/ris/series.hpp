#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ris/month.hpp"

namespace ris {

enum class SeriesUnit { score, index, percent, fraction };

const char* to_string(SeriesUnit u);
SeriesUnit parse_unit(std::string_view s);

struct SeriesPoint {
  YearMonth month;
  double value{0.0};
  std::size_t n{0};  // observations behind the value; 0 for external indicators

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

// Month-indexed values with strictly increasing months. A month without a
// point is missing; nothing is interpolated.
struct MonthlySeries {
  std::string name;
  SeriesUnit unit{SeriesUnit::score};
  std::vector<SeriesPoint> points;

  [[nodiscard]] bool empty() const { return points.empty(); }
  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] std::optional<double> at(YearMonth m) const;
  [[nodiscard]] std::vector<double> values() const;
  [[nodiscard]] std::vector<YearMonth> months() const;

  // Throws std::invalid_argument if months are not strictly increasing.
  void check_ordered() const;
};

// CSV "month,value,n". Lines starting with '#' are comments.
void write_series_csv(std::ostream& out, const MonthlySeries& s);
MonthlySeries read_series_csv(std::istream& in, std::string name, SeriesUnit unit = SeriesUnit::score);

// CSV with header "DATE,VALUE", DATE as YYYY-MM-DD, one row per month.
// Non-numeric values such as FRED's "." are treated as missing.
MonthlySeries read_indicator_csv(std::istream& in, std::string name, SeriesUnit unit = SeriesUnit::index);
MonthlySeries read_indicator_csv(const std::filesystem::path& path, std::string name,
                                 SeriesUnit unit = SeriesUnit::index);

}  // namespace ris
