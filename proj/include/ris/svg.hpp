#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ris/month.hpp"
#include "ris/series.hpp"

namespace ris::svg {

struct Chart {
  std::string title;
  std::vector<MonthlySeries> series;  // drawn in order with a fixed palette
  std::vector<YearMonth> markers;     // dashed vertical lines
  std::optional<YearMonth> highlight;  // drawn as a solid marker
  std::string comment;                 // emitted as an XML comment after the root tag
  int width{900};
  int height{360};
};

// Static line chart with a month x-axis. Gaps in a series break its line.
// Output depends only on the input, so charts are byte-stable.
std::string line_chart(const Chart& chart);

std::string escape(std::string_view s);

}  // namespace ris::svg
