#pragma once

// Standard normal and Student-t distribution functions, the deterministic
// adaptive quadrature they are built on, and the closed-form envelopes used
// to cross-check the Student tail.

#include <cmath>
#include <utility>

#include "ttest/errors.hpp"

namespace ttest {

// Degrees of freedom for the Student-t family.  Kept as a distinct type so a
// raw sample size cannot silently be passed where a df is meant.
struct StudentDf {
  int n;
};

// Tolerances for the adaptive Simpson integrator.  The defaults are the ones
// used throughout the library and the test suite.
struct QuadratureConfig {
  double abs_tolerance = 1e-12;
  int max_subdivisions = 100000;
};

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol,
                            int depth, int& budget) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  // A minimum depth of 3 keeps the relative error small even when the
  // integral itself is far below the absolute tolerance (deep tails).  The
  // second acceptance clause stops refinement once delta sits at the
  // rounding noise of the panel sums themselves, where further splitting
  // cannot improve the estimate.
  if (depth > 2 &&
      (std::fabs(delta) <= 15.0 * tol ||
       std::fabs(delta) <=
           4e-16 * (std::fabs(left) + std::fabs(right)))) {
    return left + right + delta / 15.0;
  }
  if (--budget <= 0) {
    throw numerical_error("adaptive quadrature: subdivision budget exhausted");
  }
  if (depth > 60) {
    // Interval collapsed to rounding noise without meeting the tolerance.
    throw numerical_error("adaptive quadrature: interval below resolution");
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth + 1, budget) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth + 1, budget);
}

}  // namespace detail

// Deterministic adaptive Simpson quadrature of f over the finite interval
// [a, b].  Throws numerical_error when the subdivision budget runs out
// before the absolute tolerance is met.
template <typename F>
double integrate(F&& f, double a, double b, QuadratureConfig cfg = {}) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("integrate: endpoints must be finite");
  }
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = detail::simpson(a, fa, b, fb, fm);
  int budget = cfg.max_subdivisions;
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole,
                                      cfg.abs_tolerance, 0, budget);
}

// Standard normal density phi(x) = exp(-x^2/2)/sqrt(2 pi).
double std_normal_pdf(double x);

// Standard normal distribution function Phi(x).
double std_normal_cdf(double x);

// Standard normal survival function Phi_c(x) = 1 - Phi(x), accurate in the
// far right tail (complementary error function based).
double std_normal_sf(double x);

// Inverse of the survival function: the unique x with Phi_c(x) = p,
// p in (0, 1).  Bracketed bisection, |Phi_c(x) - p| <= 1e-12 guaranteed.
double std_normal_sf_inv(double p);

// Euler gamma function for positive real argument.
double gamma_fn(double y);

// Normalizing constant of the Student-t density with df.n degrees of
// freedom: C_n = Gamma((n+1)/2) / (sqrt(pi n) Gamma(n/2)).  Evaluated in
// log space so it stays finite for large n.
double student_t_constant(StudentDf df);

// Student-t density with df.n degrees of freedom.
double student_t_pdf(StudentDf df, double x);

// Student-t survival function P(T > x).  The finite part of the integral is
// done by adaptive quadrature; the unbounded tail is mapped to a finite
// interval by the substitution u = 1/y and integrated in log space, so the
// result stays meaningful even where the tail is ~1e-300.
double student_t_sf(StudentDf df, double x, QuadratureConfig cfg = {});

// Quantile of the Student-t survival function: x with P(T > x) = p.
double student_t_sf_inv(StudentDf df, double p, QuadratureConfig cfg = {});

// Two-sided envelope for the Student-t survival function, valid for x > 0
// and df.n >= 2:
//   lower = sqrt(2 pi) C_n / sqrt(1 + 1/n) * Phi_c(x sqrt(1 + 1/n))
//   upper = C_n / ((1 - 1/n) x) * (1 + x^2/n)^(-(n-1)/2)
struct SfBounds {
  double lower;
  double upper;
};
SfBounds student_sf_bounds(StudentDf df, double x);

// Mills-ratio bracket for the normal tail, valid for x > 0:
//   1/(1+x) < Phi_c(x)/phi(x) < 1/x.
struct MillsBounds {
  double lower;
  double upper;
};
MillsBounds mills_ratio_bounds(double x);

}  // namespace ttest
