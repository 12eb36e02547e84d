#include "ris/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ris::svg {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string line_chart(const Chart& chart) {
  constexpr double left = 64;
  constexpr double right = 170;
  constexpr double top = 40;
  constexpr double bottom = 40;
  const double w = chart.width;
  const double h = chart.height;
  const double pw = w - left - right;
  const double ph = h - top - bottom;

  int m_lo = std::numeric_limits<int>::max();
  int m_hi = std::numeric_limits<int>::min();
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : chart.series) {
    for (const auto& p : s.points) {
      m_lo = std::min(m_lo, p.month.ordinal());
      m_hi = std::max(m_hi, p.month.ordinal());
      y_lo = std::min(y_lo, p.value);
      y_hi = std::max(y_hi, p.value);
    }
  }
  for (const auto& m : chart.markers) {
    m_lo = std::min(m_lo, m.ordinal());
    m_hi = std::max(m_hi, m.ordinal());
  }
  const bool have_data = m_lo <= m_hi && std::isfinite(y_lo);
  if (!have_data) {
    m_lo = m_hi = 0;
    y_lo = -1.0;
    y_hi = 1.0;
  }
  if (m_hi == m_lo) ++m_hi;
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto x_of = [&](int ord) { return left + pw * (ord - m_lo) / static_cast<double>(m_hi - m_lo); };
  auto y_of = [&](double v) { return top + ph * (1.0 - (v - y_lo) / (y_hi - y_lo)); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\"" << chart.height
    << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  if (!chart.comment.empty()) {
    std::string c = chart.comment;
    for (auto pos = c.find("--"); pos != std::string::npos; pos = c.find("--")) c.replace(pos, 2, "- -");
    o << "<!-- " << c << " -->\n";
  }
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(chart.title)
    << "</text>\n";
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 4.0;
    const double y = y_of(v);
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(y)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_label(v)
      << "</text>\n";
  }

  const int first_year = YearMonth::from_ordinal(m_lo).year;
  const int last_year = YearMonth::from_ordinal(m_hi).year;
  const int step = std::max(1, (last_year - first_year + 1 + 11) / 12);
  for (int y = first_year; y <= last_year; y += step) {
    const int ord = YearMonth{y, 1}.ordinal();
    if (ord < m_lo || ord > m_hi) continue;
    const double x = x_of(ord);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x) << "\" y2=\""
      << num(top + ph + 4) << "\" stroke=\"#444\"/>\n";
    o << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 17) << "\" text-anchor=\"middle\">" << y
      << "</text>\n";
  }

  for (const auto& m : chart.markers) {
    const double x = x_of(m.ordinal());
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\"" << num(top + ph)
      << "\" stroke=\"#e75480\" stroke-dasharray=\"4 3\"><title>" << m.str() << "</title></line>\n";
  }
  if (chart.highlight) {
    const double x = x_of(chart.highlight->ordinal());
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\"" << num(top + ph)
      << "\" stroke=\"#e75480\" stroke-width=\"2\"><title>" << chart.highlight->str() << "</title></line>\n";
  }

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    const char* colour = kPalette[i % kPalette.size()];
    std::string path;
    int prev = std::numeric_limits<int>::min();
    for (const auto& p : s.points) {
      const int ord = p.month.ordinal();
      path += (ord == prev + 1 ? " L" : " M") + num(x_of(ord)) + ',' + num(y_of(p.value));
      prev = ord;
    }
    if (!path.empty()) {
      o << "<path d=\"" << path.substr(1) << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = top + 14.0 * static_cast<double>(i) + 6;
    o << "<line x1=\"" << num(left + pw + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 28)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(left + pw + 32) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace ris::svg
