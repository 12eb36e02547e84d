// Reference implementations used by unit and acceptance tests. They share no
// code with the library and favour directness over speed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "ris/classify.hpp"

namespace ris::testing {

// Deterministic generators on top of mt19937_64 raw output.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  // Box-Muller; the second variate is discarded to keep streams simple.
  double normal() {
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
  std::vector<double> normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Optimal partitioning without pruning, costs recomputed from scratch in
// long double. Returns changepoints (last index of each non-final segment)
// and the penalized cost.
struct OracleSegmentation {
  std::vector<std::size_t> changepoints;
  long double cost{0};
};

inline long double direct_l2(const std::vector<double>& y, std::size_t i, std::size_t j) {
  long double mean = 0;
  for (std::size_t k = i; k <= j; ++k) mean += y[k];
  mean /= static_cast<long double>(j - i + 1);
  long double c = 0;
  for (std::size_t k = i; k <= j; ++k) c += (y[k] - mean) * (y[k] - mean);
  return c;
}

inline OracleSegmentation exhaustive_segmentation(const std::vector<double>& y, double beta, std::size_t m) {
  const std::size_t n = y.size();
  const long double inf = std::numeric_limits<long double>::infinity();
  std::vector<long double> f(n + 1, inf);
  std::vector<std::size_t> arg(n + 1, 0);
  f[0] = -static_cast<long double>(beta);
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t s = 0; s + m <= t; ++s) {
      if (f[s] == inf) continue;
      const long double v = f[s] + direct_l2(y, s, t - 1) + beta;
      if (v < f[t]) {
        f[t] = v;
        arg[t] = s;
      }
    }
  }
  OracleSegmentation out;
  out.cost = f[n];
  for (std::size_t t = n; t > 0 && arg[t] > 0; t = arg[t]) out.changepoints.push_back(arg[t] - 1);
  std::reverse(out.changepoints.begin(), out.changepoints.end());
  return out;
}

// Krippendorff's alpha by enumerating every ordered pair of values within
// each unit (weight 1/(m_u - 1)).
inline double brute_force_alpha(const std::vector<classify::AnnotationSet>& sets, bool ordinal) {
  long double o[3][3] = {};
  for (const auto& u : sets) {
    std::vector<int> vals;
    for (const auto& r : u.ratings) {
      if (r) vals.push_back(classify::value(*r));
    }
    if (vals.size() < 2) continue;
    const long double w = 1.0L / static_cast<long double>(vals.size() - 1);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      for (std::size_t j = 0; j < vals.size(); ++j) {
        if (i != j) o[vals[i]][vals[j]] += w;
      }
    }
  }
  long double nc[3] = {};
  long double n = 0;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 3; ++k) nc[c] += o[c][k];
    n += nc[c];
  }
  auto d2 = [&](int c, int k) -> long double {
    if (c == k) return 0;
    if (!ordinal) return 1;
    const int lo = std::min(c, k);
    const int hi = std::max(c, k);
    long double s = -(nc[lo] + nc[hi]) / 2;
    for (int g = lo; g <= hi; ++g) s += nc[g];
    return s * s;
  };
  long double d_o = 0;
  long double d_e = 0;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 3; ++k) {
      d_o += o[c][k] * d2(c, k);
      d_e += nc[c] * nc[k] * d2(c, k);
    }
  }
  d_o /= n;
  d_e /= n * (n - 1);
  return static_cast<double>(1.0L - d_o / d_e);
}

// Two-pass Pearson in long double.
inline long double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0;
  long double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0;
  long double sxx = 0;
  long double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Mid-ranks by counting: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> oracle_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0;
    std::size_t equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++equal;
    }
    r[i] = 1.0 + static_cast<double>(less) + (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return r;
}

inline long double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return oracle_pearson(oracle_ranks(x), oracle_ranks(y));
}

// Two-sided correlation p-value through Boost's Student t in long double.
inline long double oracle_corr_p(long double r, std::size_t n) {
  const long double dof = static_cast<long double>(n - 2);
  const long double t = r * std::sqrt(dof / ((1 - r) * (1 + r)));
  boost::math::students_t_distribution<long double> dist(dof);
  return 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

// Least squares through the normal equations X'X b = X'y, solved by Gaussian
// elimination with partial pivoting in long double. Returns b and the RSS.
struct OracleOls {
  std::vector<long double> coefficients;
  long double rss{0};
};

inline OracleOls oracle_ols(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
  const std::size_t p = rows.front().size();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += static_cast<long double>(rows[r][i]) * rows[r][j];
      a[i][p] += static_cast<long double>(rows[r][i]) * y[r];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  OracleOls out;
  for (std::size_t i = 0; i < p; ++i) out.coefficients.push_back(a[i][p] / a[i][i]);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    long double fit = 0;
    for (std::size_t i = 0; i < p; ++i) fit += out.coefficients[i] * rows[r][i];
    out.rss += (y[r] - fit) * (y[r] - fit);
  }
  return out;
}

// Granger F statistic for cause -> effect from two oracle regressions.
inline long double oracle_granger_f(const std::vector<double>& cause, const std::vector<double>& effect,
                                    std::size_t lag) {
  std::vector<std::vector<double>> restricted;
  std::vector<std::vector<double>> unrestricted;
  std::vector<double> target;
  for (std::size_t t = lag; t < effect.size(); ++t) {
    std::vector<double> r{1.0};
    for (std::size_t i = 1; i <= lag; ++i) r.push_back(effect[t - i]);
    auto u = r;
    for (std::size_t i = 1; i <= lag; ++i) u.push_back(cause[t - i]);
    restricted.push_back(r);
    unrestricted.push_back(u);
    target.push_back(effect[t]);
  }
  const long double rss_r = oracle_ols(restricted, target).rss;
  const long double rss_u = oracle_ols(unrestricted, target).rss;
  const long double df_den = static_cast<long double>(target.size() - 2 * lag - 1);
  return ((rss_r - rss_u) / lag) / (rss_u / df_den);
}

}  // namespace ris::testing
