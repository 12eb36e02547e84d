#include "ris/ols.hpp"

#include <cmath>

namespace ris::stats {

namespace {
constexpr double kRankTolerance = 1e-10;

std::string column_label(std::span<const std::string> names, std::size_t j) {
  if (j < names.size()) return "'" + names[j] + "'";
  return "#" + std::to_string(j);
}
}  // namespace

OlsFit ols(const Matrix& design, std::span<const double> target, std::span<const std::string> column_names) {
  const std::size_t n = design.rows();
  const std::size_t p = design.cols();
  if (target.size() != n) throw std::invalid_argument("ols: target length does not match design rows");
  if (p == 0) throw std::invalid_argument("ols: empty design");
  if (n < p) throw std::invalid_argument("ols: fewer rows than columns");

  Matrix a = design;
  std::vector<double> qty(target.begin(), target.end());
  std::vector<double> col_norm(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j) * a(i, j);
    col_norm[j] = std::sqrt(s);
  }

  std::vector<double> v(n);
  for (std::size_t j = 0; j < p; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = j; i < n; ++i) norm2 += a(i, j) * a(i, j);
    const double norm = std::sqrt(norm2);
    if (col_norm[j] == 0.0 || norm <= kRankTolerance * col_norm[j]) {
      std::string msg = "design matrix is rank deficient: column " + column_label(column_names, j);
      if (j > 0) {
        msg += " is collinear with";
        for (std::size_t k = 0; k < j; ++k) msg += (k == 0 ? " " : ", ") + column_label(column_names, k);
      } else {
        msg += " is zero";
      }
      throw RankDeficientError(msg, j);
    }

    const double alpha = a(j, j) > 0 ? -norm : norm;
    for (std::size_t i = j; i < n; ++i) v[i] = a(i, j);
    v[j] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = j; i < n; ++i) vnorm2 += v[i] * v[i];

    a(j, j) = alpha;
    for (std::size_t i = j + 1; i < n; ++i) a(i, j) = 0.0;
    for (std::size_t k = j + 1; k < p; ++k) {
      double dot = 0.0;
      for (std::size_t i = j; i < n; ++i) dot += v[i] * a(i, k);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < n; ++i) a(i, k) -= f * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = j; i < n; ++i) dot += v[i] * qty[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = j; i < n; ++i) qty[i] -= f * v[i];
  }

  OlsFit fit;
  fit.coefficients.assign(p, 0.0);
  for (std::size_t jj = p; jj-- > 0;) {
    double s = qty[jj];
    for (std::size_t k = jj + 1; k < p; ++k) s -= a(jj, k) * fit.coefficients[k];
    fit.coefficients[jj] = s / a(jj, jj);
  }
  for (std::size_t i = p; i < n; ++i) fit.rss += qty[i] * qty[i];
  return fit;
}

}  // namespace ris::stats
