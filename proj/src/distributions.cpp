#include "ris/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ris::stats {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("regularized_beta: continued fraction did not converge");
}

}  // namespace

BetaPair regularized_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("regularized_beta: a and b must be positive");
  if (std::isnan(x) || x < 0.0 || x > 1.0) throw std::invalid_argument("regularized_beta: x outside [0, 1]");
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};

  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_continued_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_continued_fraction(b, a, y) / b;
  return {1.0 - upper, upper};
}

double regularized_beta(double a, double b, double x) { return regularized_beta(a, b, x, 1.0 - x).lower; }

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("student_t: dof must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double denom = dof + t2;
  return regularized_beta(dof / 2.0, 0.5, dof / denom, t2 / denom).lower;
}

double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * student_t_two_sided_p(t, dof);
  return t < 0.0 ? tail : 1.0 - tail;
}

double f_cdf(double f, double dof1, double dof2) {
  if (!(dof1 > 0.0) || !(dof2 > 0.0)) throw std::invalid_argument("f distribution: dof must be positive");
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  const double denom = dof1 * f + dof2;
  return regularized_beta(dof1 / 2.0, dof2 / 2.0, dof1 * f / denom, dof2 / denom).lower;
}

double f_sf(double f, double dof1, double dof2) {
  if (!(dof1 > 0.0) || !(dof2 > 0.0)) throw std::invalid_argument("f distribution: dof must be positive");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double denom = dof1 * f + dof2;
  return regularized_beta(dof1 / 2.0, dof2 / 2.0, dof1 * f / denom, dof2 / denom).upper;
}

}  // namespace ris::stats
