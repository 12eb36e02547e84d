#include "ris/series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ris/text.hpp"

namespace ris {

const char* to_string(SeriesUnit u) {
  switch (u) {
    case SeriesUnit::score:
      return "score";
    case SeriesUnit::index:
      return "index";
    case SeriesUnit::percent:
      return "percent";
    case SeriesUnit::fraction:
      return "fraction";
  }
  return "?";
}

SeriesUnit parse_unit(std::string_view s) {
  if (s == "score") return SeriesUnit::score;
  if (s == "index") return SeriesUnit::index;
  if (s == "percent") return SeriesUnit::percent;
  if (s == "fraction") return SeriesUnit::fraction;
  throw std::invalid_argument("unknown series unit '" + std::string(s) + "'");
}

std::optional<double> MonthlySeries::at(YearMonth m) const {
  auto it = std::lower_bound(points.begin(), points.end(), m,
                             [](const SeriesPoint& p, YearMonth v) { return p.month < v; });
  if (it == points.end() || it->month != m) return std::nullopt;
  return it->value;
}

std::vector<double> MonthlySeries::values() const {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.value);
  return v;
}

std::vector<YearMonth> MonthlySeries::months() const {
  std::vector<YearMonth> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.month);
  return v;
}

void MonthlySeries::check_ordered() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].month < points[i].month)) {
      throw std::invalid_argument("series '" + name + "': months not strictly increasing at " +
                                  points[i].month.str());
    }
  }
}

void write_series_csv(std::ostream& out, const MonthlySeries& s) {
  out << "month,value,n\n";
  for (const auto& p : s.points) {
    out << p.month.str() << ',' << text::format_double(p.value) << ',' << p.n << '\n';
  }
}

namespace {

std::optional<double> parse_number(std::string_view s) {
  s = text::trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

MonthlySeries read_series_csv(std::istream& in, std::string name, SeriesUnit unit) {
  MonthlySeries s{std::move(name), unit, {}};
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto v = text::trim(line);
    if (v.empty() || v.front() == '#') continue;
    if (!header) {
      header = true;
      if (v.rfind("month", 0) == 0) continue;
    }
    const auto cols = text::split(v, ',');
    if (cols.size() < 2) throw std::runtime_error(s.name + ": line " + std::to_string(lineno) + ": expected month,value,n");
    auto val = parse_number(cols[1]);
    if (!val) throw std::runtime_error(s.name + ": line " + std::to_string(lineno) + ": bad value '" + cols[1] + "'");
    std::size_t n = 0;
    if (cols.size() > 2) {
      const auto nv = text::trim(cols[2]);
      std::from_chars(nv.data(), nv.data() + nv.size(), n);
    }
    s.points.push_back({YearMonth::parse(text::trim(cols[0])), *val, n});
  }
  s.check_ordered();
  return s;
}

MonthlySeries read_indicator_csv(std::istream& in, std::string name, SeriesUnit unit) {
  MonthlySeries s{std::move(name), unit, {}};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto v = text::trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto cols = text::split(v, ',');
    if (!header) {
      header = true;
      if (cols.size() >= 2 && text::to_lower(text::trim(cols[0])) == "date") continue;
      throw std::runtime_error(s.name + ": expected header 'DATE,VALUE'");
    }
    if (cols.size() < 2) throw std::runtime_error(s.name + ": line " + std::to_string(lineno) + ": expected DATE,VALUE");
    const auto month = YearMonth::parse(text::trim(cols[0]));
    const auto val = parse_number(cols[1]);
    if (!val) continue;
    if (!s.points.empty() && !(s.points.back().month < month)) {
      throw std::runtime_error(s.name + ": line " + std::to_string(lineno) + ": month " + month.str() +
                               " is not after the previous row");
    }
    s.points.push_back({month, *val, 0});
  }
  return s;
}

MonthlySeries read_indicator_csv(const std::filesystem::path& path, std::string name, SeriesUnit unit) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open indicator file '" + path.string() + "'");
  return read_indicator_csv(in, std::move(name), unit);
}

}  // namespace ris
