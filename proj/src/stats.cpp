#include "ris/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ris/distributions.hpp"
#include "ris/ols.hpp"

namespace ris::stats {

AlignedPair align(const MonthlySeries& a, const MonthlySeries& b, std::optional<MonthRange> window) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("cannot align '" + a.name + "' with '" + b.name + "': " +
                                (a.empty() ? a.name : b.name) + " is empty");
  }
  a.check_ordered();
  b.check_ordered();
  AlignedPair out;
  out.x_name = a.name;
  out.y_name = b.name;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.points.size() && j < b.points.size()) {
    const auto ma = a.points[i].month;
    const auto mb = b.points[j].month;
    if (ma < mb) {
      ++i;
    } else if (mb < ma) {
      ++j;
    } else {
      if (!window || window->contains(ma)) {
        out.months.push_back(ma);
        out.x.push_back(a.points[i].value);
        out.y.push_back(b.points[j].value);
      }
      ++i;
      ++j;
    }
  }
  if (out.months.size() < 3) {
    throw std::invalid_argument("series '" + a.name + "' and '" + b.name + "' share only " +
                                std::to_string(out.months.size()) + " month(s)" +
                                (window ? " within " + window->str() : std::string()) + "; at least 3 are needed");
  }
  return out;
}

MonthlySeries difference(const MonthlySeries& s) {
  s.check_ordered();
  MonthlySeries out{s.name + "_diff", s.unit, {}};
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    if (s.points[i].month.ordinal() != s.points[i - 1].month.ordinal() + 1) continue;
    out.points.push_back({s.points[i].month, s.points[i].value - s.points[i - 1].value, s.points[i].n});
  }
  return out;
}

const char* to_string(CorrelationKind k) { return k == CorrelationKind::pearson ? "pearson" : "spearman"; }

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) throw std::invalid_argument("correlation_p_value: n must be >= 3");
  const double dof = static_cast<double>(n - 2);
  const double one_minus = (1.0 - r) * (1.0 + r);
  if (one_minus <= 0.0) return 0.0;
  return student_t_two_sided_p(r * std::sqrt(dof / one_minus), dof);
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) throw std::invalid_argument(std::string(what) + ": x and y differ in length");
  if (x.size() < 3) throw std::invalid_argument(std::string(what) + ": need at least 3 observations");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument(std::string(what) + ": non-finite value at position " + std::to_string(i));
    }
  }
}

double pearson_coefficient(std::span<const double> x, std::span<const double> y, const char* what) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument(std::string(what) + ": " + (sxx == 0.0 ? "x" : "y") +
                                " is constant, correlation undefined");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "pearson");
  const double r = pearson_coefficient(x, y, "pearson");
  return {r, correlation_p_value(r, x.size()), x.size(), CorrelationKind::pearson};
}

CorrelationResult pearson(const AlignedPair& pair) { return pearson(pair.x, pair.y); }

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    // positions i..j-1 hold equal values; ranks are 1-based
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double rho = pearson_coefficient(rx, ry, "spearman");
  return {rho, correlation_p_value(rho, x.size()), x.size(), CorrelationKind::spearman};
}

CorrelationResult spearman(const AlignedPair& pair) { return spearman(pair.x, pair.y); }

double spearman_permutation_p(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "spearman_permutation_p");
  if (x.size() > 10) throw std::invalid_argument("spearman_permutation_p: n must be <= 10");
  const auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  const double observed = std::fabs(pearson_coefficient(rx, ry, "spearman_permutation_p"));
  // Relative slack so permutations tying the observed statistic count.
  const double threshold = observed - 1e-12;
  std::sort(ry.begin(), ry.end());
  std::size_t extreme = 0;
  std::size_t total = 0;
  do {
    ++total;
    if (std::fabs(pearson_coefficient(rx, ry, "spearman_permutation_p")) >= threshold) ++extreme;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

GrangerResult granger_direction(std::span<const double> cause, std::span<const double> effect, std::size_t lag,
                                const std::string& cause_name, const std::string& effect_name) {
  if (cause.size() != effect.size()) throw std::invalid_argument("granger: series differ in length");
  if (lag < 1) throw std::invalid_argument("granger: lag must be >= 1");
  const std::size_t n = effect.size();
  if (n <= lag || n - lag <= 2 * lag + 1) {
    throw std::invalid_argument("granger: " + std::to_string(n) + " observations are too few for lag " +
                                std::to_string(lag) + " (need n - lag > 2*lag + 1)");
  }
  const std::size_t rows = n - lag;
  const std::size_t p_r = 1 + lag;
  const std::size_t p_u = 1 + 2 * lag;

  std::vector<std::string> names;
  names.reserve(p_u);
  names.emplace_back("const");
  for (std::size_t i = 1; i <= lag; ++i) names.push_back(effect_name + "[t-" + std::to_string(i) + "]");
  for (std::size_t i = 1; i <= lag; ++i) names.push_back(cause_name + "[t-" + std::to_string(i) + "]");

  Matrix restricted(rows, p_r);
  Matrix unrestricted(rows, p_u);
  std::vector<double> target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + lag;
    target[r] = effect[t];
    restricted(r, 0) = 1.0;
    unrestricted(r, 0) = 1.0;
    for (std::size_t i = 1; i <= lag; ++i) {
      restricted(r, i) = effect[t - i];
      unrestricted(r, i) = effect[t - i];
      unrestricted(r, lag + i) = cause[t - i];
    }
  }

  const auto fit_u = ols(unrestricted, target, names);
  const auto fit_r = ols(restricted, target, std::span<const std::string>(names).first(p_r));

  GrangerResult res;
  res.lag = lag;
  res.cause = cause_name;
  res.effect = effect_name;
  res.n_effective = rows;
  res.df_num = static_cast<double>(lag);
  res.df_den = static_cast<double>(rows - 2 * lag - 1);
  res.rss_restricted = fit_r.rss;
  res.rss_unrestricted = fit_u.rss;
  const double gain = std::max(0.0, fit_r.rss - fit_u.rss);
  if (fit_u.rss == 0.0) {
    res.f_statistic = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    res.f_statistic = (gain / res.df_num) / (fit_u.rss / res.df_den);
  }
  res.p_value = f_sf(res.f_statistic, res.df_num, res.df_den);
  return res;
}

GrangerPair granger(const AlignedPair& pair, std::size_t lag) {
  return {granger_direction(pair.x, pair.y, lag, pair.x_name, pair.y_name),
          granger_direction(pair.y, pair.x, lag, pair.y_name, pair.x_name)};
}

}  // namespace ris::stats
