#pragma once

namespace ris::stats {

struct BetaPair {
  double lower;  // I_x(a, b)
  double upper;  // 1 - I_x(a, b), computed without cancellation
};

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
// evaluated on whichever tail converges fastest. `y` must equal 1 - x; pass
// it explicitly when it is known more precisely than 1 - x.
BetaPair regularized_beta(double a, double b, double x, double y);
double regularized_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);
// P(|T| >= |t|)
double student_t_two_sided_p(double t, double dof);

double f_cdf(double f, double dof1, double dof2);
// P(F >= f)
double f_sf(double f, double dof1, double dof2);

}  // namespace ris::stats
