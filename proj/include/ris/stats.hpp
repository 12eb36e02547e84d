#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ris/month.hpp"
#include "ris/series.hpp"

namespace ris::stats {

struct AlignedPair {
  std::string x_name;
  std::string y_name;
  std::vector<YearMonth> months;
  std::vector<double> x;
  std::vector<double> y;

  [[nodiscard]] std::size_t size() const { return months.size(); }
};

// Months present in both series (and inside `window`), in order. Throws
// std::invalid_argument naming both series when fewer than 3 months remain.
AlignedPair align(const MonthlySeries& a, const MonthlySeries& b, std::optional<MonthRange> window = std::nullopt);

// First differences; the first month is dropped.
MonthlySeries difference(const MonthlySeries& s);

enum class CorrelationKind { pearson, spearman };

struct CorrelationResult {
  double coefficient{0.0};
  double p_value{1.0};  // two-sided, Student-t with n-2 dof
  std::size_t n{0};
  CorrelationKind kind{CorrelationKind::pearson};
};

const char* to_string(CorrelationKind k);

// Two-sided p-value for a correlation coefficient via t = r sqrt((n-2)/(1-r^2)).
double correlation_p_value(double r, std::size_t n);

CorrelationResult pearson(std::span<const double> x, std::span<const double> y);
CorrelationResult pearson(const AlignedPair& pair);

// Ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> v);

CorrelationResult spearman(std::span<const double> x, std::span<const double> y);
CorrelationResult spearman(const AlignedPair& pair);

// Exact two-sided permutation p-value for Spearman's rho, enumerating all
// n! orderings of y. Only for n <= 10.
double spearman_permutation_p(std::span<const double> x, std::span<const double> y);

struct GrangerResult {
  std::size_t lag{0};
  double f_statistic{0.0};
  double p_value{1.0};
  std::string cause;
  std::string effect;
  std::size_t n_effective{0};  // rows entering the regressions, n - lag
  double df_num{0.0};
  double df_den{0.0};
  double rss_restricted{0.0};
  double rss_unrestricted{0.0};
};

struct GrangerPair {
  GrangerResult forward;  // x -> y
  GrangerResult reverse;  // y -> x
};

// One direction: does `cause` help predict `effect` beyond effect's own lags?
GrangerResult granger_direction(std::span<const double> cause, std::span<const double> effect, std::size_t lag,
                                const std::string& cause_name = "x", const std::string& effect_name = "y");

// Both directions of the bivariate F test at one lag.
GrangerPair granger(const AlignedPair& pair, std::size_t lag);

}  // namespace ris::stats
