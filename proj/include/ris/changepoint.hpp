#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ris/month.hpp"
#include "ris/series.hpp"

namespace ris::changepoint {

// Prefix sums of y and y^2 for O(1) segment costs.
class PrefixSums {
 public:
  explicit PrefixSums(std::span<const double> y);

  [[nodiscard]] std::size_t size() const { return sum_.size() - 1; }
  // Sum of squared deviations from the segment mean over y[i..j], inclusive.
  [[nodiscard]] double l2_cost(std::size_t i, std::size_t j) const;
  [[nodiscard]] double mean(std::size_t i, std::size_t j) const;

 private:
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

double l2_cost(const PrefixSums& prefix, std::size_t i, std::size_t j);

// Penalty beta = c * ln(n) * variance, with the population variance of the
// whole series.
struct PenaltyConfig {
  double c{1.0};
  std::size_t min_segment{2};
};

double penalty(std::span<const double> series, double c);

struct Segment {
  std::size_t start{0};
  std::size_t end{0};  // inclusive
  double mean{0.0};
  double cost{0.0};
};

struct Segmentation {
  // Index k splits the series into [..k] and [k+1..].
  std::vector<std::size_t> changepoints;
  std::vector<Segment> segments;
  double beta{0.0};
  // Sum of segment costs plus beta per changepoint.
  double total_cost{0.0};
  // Zero variance: the penalty vanishes and no changepoint is reported.
  bool degenerate{false};
};

// Exact penalized L2 segmentation with PELT pruning. Every segment has at
// least cfg.min_segment points. Requires n >= 2 * min_segment.
Segmentation pelt(std::span<const double> series, const PenaltyConfig& cfg);

// Same objective with an explicit beta.
Segmentation pelt_with_beta(std::span<const double> series, double beta, std::size_t min_segment);

struct ScanRow {
  double c{0.0};
  std::size_t min_segment{0};
  std::vector<std::size_t> changepoints;
  // Month of the first point of each new segment.
  std::vector<YearMonth> months;
};

// One PELT run per (c, m), ordered by c then m.
std::vector<ScanRow> sensitivity_scan(const MonthlySeries& series, std::vector<double> cs = {0.5, 1.0, 2.0},
                                      std::vector<std::size_t> ms = {2});

// Changepoint month closest to `focus` (earlier month wins a tie).
std::optional<YearMonth> nearest_changepoint(const std::vector<YearMonth>& months, YearMonth focus);

}  // namespace ris::changepoint
