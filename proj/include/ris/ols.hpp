#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ris::stats {

// Dense row-major matrix, just enough for small regressions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<double> data_;
};

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, std::size_t column) : std::runtime_error(what), column_(column) {}
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct OlsFit {
  std::vector<double> coefficients;
  double rss{0.0};
};

// Least squares by Householder QR. A column whose component orthogonal to
// the preceding columns is negligible makes the design rank deficient; the
// error names it using `column_names` when given.
OlsFit ols(const Matrix& design, std::span<const double> target, std::span<const std::string> column_names = {});

}  // namespace ris::stats
