#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ris/ols.hpp"
#include "ris/stats.hpp"
#include "support.hpp"

namespace {

using namespace ris;
using namespace ris::stats;

MonthlySeries monthly(std::string name, YearMonth start, std::size_t n, double offset = 0.0) {
  MonthlySeries s{std::move(name), SeriesUnit::score, {}};
  for (std::size_t i = 0; i < n; ++i) {
    s.points.push_back({start.plus(static_cast<int>(i)), offset + std::sin(static_cast<double>(i)), 1});
  }
  return s;
}

TEST(Align, Intersection) {
  const auto a = monthly("a", {2012, 1}, 12);
  const auto b = monthly("b", {2012, 6}, 13);
  const auto p = align(a, b);
  ASSERT_EQ(p.size(), 7u);
  EXPECT_EQ(p.months.front(), (YearMonth{2012, 6}));
  EXPECT_EQ(p.months.back(), (YearMonth{2012, 12}));
  EXPECT_EQ(p.x[0], *a.at({2012, 6}));
  EXPECT_EQ(p.y[0], *b.at({2012, 6}));

  const auto full = align(a, a);
  EXPECT_EQ(full.size(), 12u);
  EXPECT_EQ(full.x, full.y);
}

TEST(Align, WindowAndErrorsNameBothSeries) {
  const auto a = monthly("ris_aggregate", {2012, 1}, 24);
  const auto b = monthly("cpi", {2012, 1}, 24);
  EXPECT_EQ(align(a, b, MonthRange::parse("2012-03..2012-08")).size(), 6u);
  try {
    (void)align(a, monthly("cpi", {2014, 1}, 5));
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("ris_aggregate"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("cpi"), std::string::npos);
  }
  EXPECT_THROW((void)align(a, b, MonthRange::parse("2012-03..2012-04")), std::invalid_argument);
}

TEST(Difference, DropsFirstMonth) {
  MonthlySeries s{"x", SeriesUnit::index, {{{2012, 1}, 1.0, 0}, {{2012, 2}, 4.0, 0}, {{2012, 3}, 2.0, 0}}};
  const auto d = difference(s);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.points[0].month, (YearMonth{2012, 2}));
  EXPECT_EQ(d.points[0].value, 3.0);
  EXPECT_EQ(d.points[1].value, -2.0);
}

TEST(Pearson, Examples) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 1, 4, 3, 6};
  const auto r = pearson(x, y);
  // Reference values computed with mpmath at 50 digits.
  EXPECT_NEAR(r.coefficient, 0.82199493652678644446, 1e-12);
  EXPECT_NEAR(r.p_value, 0.087706647008065547250, 1e-12);
  EXPECT_EQ(r.n, 5u);

  std::vector<double> lin(x.size());
  std::transform(x.begin(), x.end(), lin.begin(), [](double v) { return 2 * v + 1; });
  const auto perfect = pearson(x, lin);
  EXPECT_NEAR(perfect.coefficient, 1.0, 1e-15);
  EXPECT_LT(perfect.p_value, 1e-12);
}

TEST(Pearson, ConstantSeriesIsAnError) {
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1, 1}, std::vector<double>{1, 2, 3, 4}), std::invalid_argument);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Pearson, MatchesOracleAndAffineInvariance) {
  ris::testing::Gen g(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.range(3, 80));
    const auto x = g.normal_vector(n);
    auto y = g.normal_vector(n);
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.5 * x[i];
    const auto r = pearson(x, y);
    const auto want = ris::testing::oracle_pearson(x, y);
    EXPECT_NEAR(r.coefficient, static_cast<double>(want), 1e-12);
    EXPECT_NEAR(r.p_value, static_cast<double>(ris::testing::oracle_corr_p(want, n)), 1e-9);

    const double a = g.uniform(0.1, 10);
    const double b = g.uniform(-5, 5);
    auto ax = x;
    auto nx = x;
    for (std::size_t i = 0; i < n; ++i) {
      ax[i] = a * x[i] + b;
      nx[i] = -a * x[i] + b;
    }
    EXPECT_NEAR(pearson(ax, y).coefficient, r.coefficient, 1e-12);
    EXPECT_NEAR(pearson(nx, y).coefficient, -r.coefficient, 1e-12);
  }
}

TEST(Spearman, TiesUseAverageRanks) {
  const std::vector<double> x{1, 2, 2, 4};
  const std::vector<double> y{10, 20, 20, 5};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(average_ranks(y), (std::vector<double>{2, 3.5, 3.5, 1}));
  const auto r = spearman(x, y);
  EXPECT_NEAR(r.coefficient, -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.p_value, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r.kind, CorrelationKind::spearman);
}

TEST(Spearman, MonotoneInvarianceAndAntisymmetry) {
  ris::testing::Gen g(29);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.range(4, 60));
    const auto x = g.uniform_vector(n, -2, 2);
    const auto y = g.uniform_vector(n, -2, 2);
    const auto rho = spearman(x, y).coefficient;
    EXPECT_NEAR(rho, static_cast<double>(ris::testing::oracle_spearman(x, y)), 1e-12);

    auto ex = x;
    for (auto& v : ex) v = std::exp(3 * v);
    EXPECT_NEAR(spearman(ex, y).coefficient, rho, 1e-12);

    auto ry = y;
    std::reverse(ry.begin(), ry.end());
    auto rx = x;
    std::reverse(rx.begin(), rx.end());
    auto neg = y;
    for (auto& v : neg) v = -v;
    EXPECT_NEAR(spearman(x, neg).coefficient, -rho, 1e-12);
    EXPECT_NEAR(spearman(rx, ry).coefficient, rho, 1e-12);
  }
  std::vector<double> inc{0.1, 0.5, 0.7, 1.2, 3.0};
  std::vector<double> ex(inc.size());
  std::transform(inc.begin(), inc.end(), ex.begin(), [](double v) { return std::exp(v); });
  EXPECT_DOUBLE_EQ(spearman(inc, ex).coefficient, 1.0);
}

TEST(Spearman, PermutationPValueMatchesEnumeration) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> y{2, 1, 4, 3, 6, 5};
  const double rho = std::fabs(static_cast<double>(ris::testing::oracle_spearman(x, y)));
  std::vector<double> perm = y;
  std::sort(perm.begin(), perm.end());
  int extreme = 0;
  int total = 0;
  do {
    ++total;
    if (std::fabs(static_cast<double>(ris::testing::oracle_spearman(x, perm))) >= rho - 1e-12) ++extreme;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_NEAR(spearman_permutation_p(x, y), static_cast<double>(extreme) / total, 1e-15);
  EXPECT_THROW(spearman_permutation_p(std::vector<double>(11, 0.0), std::vector<double>(11, 0.0)),
               std::invalid_argument);
}

TEST(Ols, IdentityAndExactFit) {
  Matrix id(3, 3);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1.0;
  const std::vector<double> t{4, -1, 2.5};
  const auto fit = ols(id, t);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(fit.coefficients[i], t[i], 1e-14);
  EXPECT_NEAR(fit.rss, 0.0, 1e-20);

  Matrix x(6, 1);
  std::vector<double> y(6);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = static_cast<double>(i) + 0.5;
    y[i] = 2 * x(i, 0);
  }
  const auto exact = ols(x, y);
  EXPECT_NEAR(exact.coefficients[0], 2.0, 1e-14);
  EXPECT_NEAR(exact.rss, 0.0, 1e-10);
}

TEST(Ols, MatchesNormalEquationsOracle) {
  ris::testing::Gen g(31);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(20, 4);
    std::vector<std::vector<double>> rows(20, std::vector<double>(4));
    std::vector<double> y(20);
    for (std::size_t r = 0; r < 20; ++r) {
      for (std::size_t c = 0; c < 4; ++c) x(r, c) = rows[r][c] = g.normal();
      y[r] = g.normal();
    }
    const auto fit = ols(x, y);
    const auto want = ris::testing::oracle_ols(rows, y);
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(fit.coefficients[c], static_cast<double>(want.coefficients[c]), 1e-8);
    EXPECT_NEAR(fit.rss, static_cast<double>(want.rss), 1e-8);
  }
}

TEST(Ols, RankDeficiencyNamesColumn) {
  Matrix x(5, 3);
  for (std::size_t r = 0; r < 5; ++r) {
    x(r, 0) = 1.0;
    x(r, 1) = static_cast<double>(r);
    x(r, 2) = 2.0 * static_cast<double>(r) + 1.0;
  }
  const std::vector<double> y{1, 2, 3, 4, 6};
  const std::vector<std::string> names{"const", "a", "b"};
  try {
    (void)ols(x, y, names);
    FAIL() << "expected rank deficiency";
  } catch (const RankDeficientError& e) {
    EXPECT_EQ(e.column(), 2u);
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
}

TEST(Granger, MatchesOracleAndNesting) {
  ris::testing::Gen g(37);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.range(20, 130));
    const auto x = g.normal_vector(n);
    auto y = g.normal_vector(n);
    for (std::size_t t = 1; t < n; ++t) y[t] += 0.3 * x[t - 1] + 0.2 * y[t - 1];
    for (std::size_t lag = 1; lag <= 3; ++lag) {
      const auto res = granger_direction(x, y, lag);
      EXPECT_EQ(res.n_effective, n - lag);
      EXPECT_EQ(res.df_num, static_cast<double>(lag));
      EXPECT_EQ(res.df_den, static_cast<double>(n - lag - 2 * lag - 1));
      EXPECT_GE(res.f_statistic, 0.0);
      EXPECT_LE(res.rss_unrestricted, res.rss_restricted);
      const auto want = static_cast<double>(ris::testing::oracle_granger_f(x, y, lag));
      EXPECT_NEAR(res.f_statistic, want, 1e-8 * std::max(1.0, want));
      EXPECT_GT(res.p_value, 0.0);
      EXPECT_LE(res.p_value, 1.0);

      auto xs = x;
      auto ys = y;
      for (auto& v : xs) v += 7.5;
      for (auto& v : ys) v += 7.5;
      EXPECT_NEAR(granger_direction(xs, ys, lag).f_statistic, res.f_statistic, 1e-7 * std::max(1.0, res.f_statistic));
    }
  }
}

TEST(Granger, BothDirectionsAndNames) {
  ris::testing::Gen g(41);
  AlignedPair p{"ris", "cpi", {}, g.normal_vector(40), g.normal_vector(40)};
  for (int i = 0; i < 40; ++i) p.months.push_back(YearMonth{2012, 1}.plus(i));
  const auto both = granger(p, 2);
  EXPECT_EQ(both.forward.cause, "ris");
  EXPECT_EQ(both.forward.effect, "cpi");
  EXPECT_EQ(both.reverse.cause, "cpi");
  EXPECT_EQ(both.reverse.effect, "ris");
}

TEST(Granger, Errors) {
  ris::testing::Gen g(43);
  const auto x = g.normal_vector(30);
  EXPECT_THROW(granger_direction(x, x, 1), RankDeficientError);
  EXPECT_THROW(granger_direction(x, x, 0), std::invalid_argument);
  const std::vector<double> tiny(6, 1.0);
  EXPECT_THROW(granger_direction(tiny, tiny, 2), std::invalid_argument);
}

}  // namespace
