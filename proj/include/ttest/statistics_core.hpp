#pragma once

// Sample container, moment estimators, the three test statistics
// (z-statistic, Student ratio, self-normalized sum), and the algebraic
// bijection between the Student ratio and the self-normalized sum.

#include <vector>

#include "ttest/errors.hpp"

namespace ttest {

// An observed sample.  Every value is finite; ingestion (sample_io) enforces
// this, and the statistics below assume it.
struct Sample {
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }
};

// Plug-in moment estimates used by the accuracy bounds:
//   mean        = sample mean
//   sigma_hat   = sqrt(mean of squared deviations)        (1/n convention)
//   sigma_tilde = sqrt(sum of squared deviations/(n-1))   (unbiased variant)
//   mu1_hat     = mean absolute deviation E|X - mean|
//   mu3_hat     = mean cubed absolute deviation E|X - mean|^3
struct MomentEstimates {
  double mean;
  double sigma_hat;
  double sigma_tilde;
  double mu1_hat;
  double mu3_hat;
};

// Computes the plug-in moments.  Requires n >= 2.
MomentEstimates sample_moments(const Sample& s);

// z-statistic (X_bar - mean0) sqrt(n) / sigma for known sigma > 0.
double zeta_statistic(const Sample& s, double mean0, double sigma);

// Student ratio t_n = (X_bar - mean0) sqrt(n) / sigma_hat.  Throws
// undefined_statistic_error when every observation equals mean0 (0/0);
// returns +-infinity for a constant sample away from mean0.
double student_statistic(const Sample& s, double mean0);

// Self-normalized sum t* = sum(X_i - mean0) / sqrt(sum (X_i - mean0)^2).
// Throws undefined_statistic_error when every observation equals mean0.
// Always satisfies |t*| <= sqrt(n).  The vector overload is the workhorse
// for simulation loops that avoid constructing a Sample per trial.
double self_normalized_sum(const Sample& s, double mean0);
double self_normalized_sum(const std::vector<double>& values, double mean0);

// The bijection between the Student ratio and the self-normalized sum:
//   t  = t* / sqrt(1 - t*^2/n)   (|t*| < sqrt(n); +-inf at the endpoints)
//   t* = t  / sqrt(1 + t^2/n)
double t_from_tstar(double tstar, int n);
double tstar_from_t(double t, int n);

// Monotone threshold map induced by the bijection: the event {t >= x} equals
// {t* >= map(x)} and conversely.
enum class ThresholdDirection {
  t_to_tstar,  // x on the Student-ratio scale -> threshold on the t* scale
  tstar_to_t,  // x on the t* scale (0 <= x <= sqrt(n)) -> Student-ratio scale
};
double tail_threshold_map(double x, int n, ThresholdDirection dir);

}  // namespace ttest
