#pragma once

#include <functional>

// Scalar special functions used across the library. All functions are pure
// and thread-safe.

namespace wt {

double normal_pdf(double x);
double normal_cdf(double x);
// Inverse of normal_cdf, accurate to ~1e-15 after one Halley refinement.
double normal_quantile(double p);

double student_t_pdf(double x, double nu);
double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);

// Regularized incomplete beta I_x(a,b).
double inc_beta(double a, double b, double x);
// Regularized lower incomplete gamma P(a,x).
double inc_gamma_lower(double a, double x);

double chi2_cdf(double x, double dof);

// Adaptive Simpson quadrature on [a,b] to absolute tolerance tol.
double integrate(double a, double b, double tol,
                 const std::function<double(double)>& f);

}  // namespace wt
