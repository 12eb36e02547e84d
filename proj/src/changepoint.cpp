#include "ris/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ris::changepoint {

PrefixSums::PrefixSums(std::span<const double> y) : sum_(y.size() + 1, 0.0), sum_sq_(y.size() + 1, 0.0) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum_[i + 1] = sum_[i] + y[i];
    sum_sq_[i + 1] = sum_sq_[i] + y[i] * y[i];
  }
}

double PrefixSums::l2_cost(std::size_t i, std::size_t j) const {
  if (i > j || j >= size()) throw std::out_of_range("l2_cost: bad segment");
  const double len = static_cast<double>(j - i + 1);
  const double s1 = sum_[j + 1] - sum_[i];
  const double s2 = sum_sq_[j + 1] - sum_sq_[i];
  return std::max(0.0, s2 - s1 * s1 / len);
}

double PrefixSums::mean(std::size_t i, std::size_t j) const {
  return (sum_[j + 1] - sum_[i]) / static_cast<double>(j - i + 1);
}

double l2_cost(const PrefixSums& prefix, std::size_t i, std::size_t j) { return prefix.l2_cost(i, j); }

double penalty(std::span<const double> series, double c) {
  const auto n = static_cast<double>(series.size());
  if (series.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= n;
  return c * std::log(n) * var;
}

namespace {

void validate(std::span<const double> series, std::size_t min_segment) {
  if (min_segment < 1) throw std::invalid_argument("pelt: minimum segment length must be >= 1");
  if (series.size() < 2 * min_segment) {
    throw std::invalid_argument("pelt: series of length " + std::to_string(series.size()) +
                                " is shorter than twice the minimum segment length " + std::to_string(min_segment));
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw std::invalid_argument("pelt: series contains non-finite values");
  }
}

Segmentation assemble(const PrefixSums& prefix, std::vector<std::size_t> changepoints, double beta) {
  Segmentation seg;
  seg.changepoints = std::move(changepoints);
  seg.beta = beta;
  std::size_t start = 0;
  auto add = [&](std::size_t end) {
    Segment s{start, end, prefix.mean(start, end), prefix.l2_cost(start, end)};
    seg.total_cost += s.cost;
    seg.segments.push_back(s);
    start = end + 1;
  };
  for (auto cp : seg.changepoints) add(cp);
  add(prefix.size() - 1);
  seg.total_cost += beta * static_cast<double>(seg.changepoints.size());
  return seg;
}

}  // namespace

Segmentation pelt_with_beta(std::span<const double> series, double beta, std::size_t min_segment) {
  validate(series, min_segment);
  if (!(beta >= 0.0)) throw std::invalid_argument("pelt: penalty must be non-negative");
  const PrefixSums prefix(series);
  const std::size_t n = series.size();
  const std::size_t m = min_segment;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // best[t]: optimal penalized cost of y[0..t), with best[0] = -beta so that
  // every segment pays beta and the first one is refunded.
  std::vector<double> best(n + 1, kInf);
  std::vector<std::size_t> last(n + 1, 0);
  // pruned_at[s]: first t at which s was dominated; it stays usable until
  // t + m because shorter continuations cannot go through t.
  std::vector<std::size_t> pruned_at(n + 1, std::numeric_limits<std::size_t>::max());
  best[0] = -beta;
  std::vector<std::size_t> candidates{0};

  for (std::size_t t = m; t <= n; ++t) {
    double f = kInf;
    std::size_t arg = 0;
    for (auto s : candidates) {
      if (t - s < m) break;  // candidates are ascending
      const double v = best[s] + prefix.l2_cost(s, t - 1) + beta;
      if (v < f) {
        f = v;
        arg = s;
      }
    }
    best[t] = f;
    last[t] = arg;
    if (f == kInf) continue;

    const double slack = 1e-10 * (1.0 + std::fabs(f));
    for (auto s : candidates) {
      if (t - s < m) break;
      if (pruned_at[s] == std::numeric_limits<std::size_t>::max() && best[s] + prefix.l2_cost(s, t - 1) > f + slack) {
        pruned_at[s] = t;
      }
    }
    std::erase_if(candidates, [&](std::size_t s) {
      return pruned_at[s] != std::numeric_limits<std::size_t>::max() && pruned_at[s] + m <= t + 1;
    });
    if (n - t >= m) candidates.push_back(t);
  }

  std::vector<std::size_t> cps;
  for (std::size_t t = n; t > 0;) {
    const std::size_t s = last[t];
    if (s == 0) break;
    cps.push_back(s - 1);
    t = s;
  }
  std::reverse(cps.begin(), cps.end());
  return assemble(prefix, std::move(cps), beta);
}

Segmentation pelt(std::span<const double> series, const PenaltyConfig& cfg) {
  validate(series, cfg.min_segment);
  if (!(cfg.c > 0.0)) throw std::invalid_argument("pelt: penalty factor c must be positive");
  const double beta = penalty(series, cfg.c);
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (beta == 0.0 || *lo == *hi) {
    auto seg = assemble(PrefixSums(series), {}, 0.0);
    seg.degenerate = true;
    return seg;
  }
  return pelt_with_beta(series, beta, cfg.min_segment);
}

std::vector<ScanRow> sensitivity_scan(const MonthlySeries& series, std::vector<double> cs,
                                      std::vector<std::size_t> ms) {
  series.check_ordered();
  std::sort(cs.begin(), cs.end());
  std::sort(ms.begin(), ms.end());
  const auto values = series.values();
  std::vector<ScanRow> rows;
  for (double c : cs) {
    for (auto m : ms) {
      ScanRow row;
      row.c = c;
      row.min_segment = m;
      const auto seg = pelt(values, PenaltyConfig{c, m});
      row.changepoints = seg.changepoints;
      for (auto k : seg.changepoints) row.months.push_back(series.points[k + 1].month);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::optional<YearMonth> nearest_changepoint(const std::vector<YearMonth>& months, YearMonth focus) {
  std::optional<YearMonth> best;
  int best_dist = 0;
  for (const auto& m : months) {
    const int d = std::abs(m.ordinal() - focus.ordinal());
    if (!best || d < best_dist || (d == best_dist && m < *best)) {
      best = m;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace ris::changepoint
