#include "ttest/statistics_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ttest {

namespace {

void require_n_at_least(const Sample& s, int min_n, const char* who) {
  if (s.n() < min_n) {
    std::ostringstream os;
    os << who << ": sample size must be >= " << min_n << ", got " << s.n();
    throw std::domain_error(os.str());
  }
}

}  // namespace

MomentEstimates sample_moments(const Sample& s) {
  require_n_at_least(s, 2, "sample_moments");
  const int n = s.n();
  double sum = 0.0;
  for (double v : s.values) sum += v;
  const double mean = sum / n;

  double ss = 0.0, abs1 = 0.0, abs3 = 0.0;
  for (double v : s.values) {
    const double d = v - mean;
    const double a = std::fabs(d);
    ss += d * d;
    abs1 += a;
    abs3 += a * a * a;
  }
  MomentEstimates m;
  m.mean = mean;
  m.sigma_hat = std::sqrt(ss / n);
  m.sigma_tilde = std::sqrt(ss / (n - 1));
  m.mu1_hat = abs1 / n;
  m.mu3_hat = abs3 / n;
  return m;
}

double zeta_statistic(const Sample& s, double mean0, double sigma) {
  require_n_at_least(s, 1, "zeta_statistic");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error("zeta_statistic: sigma must be a positive real");
  }
  if (!std::isfinite(mean0)) {
    throw std::domain_error("zeta_statistic: mean0 must be finite");
  }
  double sum = 0.0;
  for (double v : s.values) sum += v;
  const double mean = sum / s.n();
  return (mean - mean0) * std::sqrt(static_cast<double>(s.n())) / sigma;
}

double student_statistic(const Sample& s, double mean0) {
  require_n_at_least(s, 2, "student_statistic");
  if (!std::isfinite(mean0)) {
    throw std::domain_error("student_statistic: mean0 must be finite");
  }
  const MomentEstimates m = sample_moments(s);
  const double shift = m.mean - mean0;
  if (m.sigma_hat == 0.0) {
    if (shift == 0.0) {
      throw undefined_statistic_error(
          "student_statistic: constant sample equal to mean0 (0/0)");
    }
    return shift > 0.0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
  }
  return shift * std::sqrt(static_cast<double>(s.n())) / m.sigma_hat;
}

double self_normalized_sum(const std::vector<double>& values, double mean0) {
  if (values.empty()) {
    throw std::domain_error("self_normalized_sum: sample must be nonempty");
  }
  if (!std::isfinite(mean0)) {
    throw std::domain_error("self_normalized_sum: mean0 must be finite");
  }
  double num = 0.0, den = 0.0;
  for (double v : values) {
    const double d = v - mean0;
    num += d;
    den += d * d;
  }
  if (den == 0.0) {
    throw undefined_statistic_error(
        "self_normalized_sum: every observation equals mean0");
  }
  double tstar = num / std::sqrt(den);
  // Cauchy-Schwarz gives |t*| <= sqrt(n); clamp the rounding overshoot so the
  // bound holds exactly.
  const double root_n = std::sqrt(static_cast<double>(values.size()));
  if (tstar > root_n) tstar = root_n;
  if (tstar < -root_n) tstar = -root_n;
  return tstar;
}

double self_normalized_sum(const Sample& s, double mean0) {
  return self_normalized_sum(s.values, mean0);
}

double t_from_tstar(double tstar, int n) {
  if (n < 1) throw std::domain_error("t_from_tstar: n must be >= 1");
  if (!std::isfinite(tstar)) {
    throw std::domain_error("t_from_tstar: t* must be finite");
  }
  const double ratio = tstar * tstar / n;
  if (ratio > 1.0 + 4e-16) {
    std::ostringstream os;
    os << "t_from_tstar: |t*| exceeds sqrt(n): t*=" << tstar << ", n=" << n;
    throw std::domain_error(os.str());
  }
  if (ratio >= 1.0) {
    return tstar > 0.0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
  }
  return tstar / std::sqrt(1.0 - ratio);
}

double tstar_from_t(double t, int n) {
  if (n < 1) throw std::domain_error("tstar_from_t: n must be >= 1");
  if (std::isnan(t)) throw std::domain_error("tstar_from_t: t must not be NaN");
  const double root_n = std::sqrt(static_cast<double>(n));
  // Large |t| (including infinity): rewrite as sign(t) sqrt(n)/sqrt(1 + n/t^2)
  // so t^2 cannot overflow; the limit is +-sqrt(n).
  if (std::fabs(t) > 1e150) {
    const double r = std::isinf(t) ? 0.0 : n / (t * t);
    return std::copysign(root_n / std::sqrt(1.0 + r), t);
  }
  return t / std::sqrt(1.0 + t * t / n);
}

double tail_threshold_map(double x, int n, ThresholdDirection dir) {
  if (n < 1) throw std::domain_error("tail_threshold_map: n must be >= 1");
  if (std::isnan(x)) {
    throw std::domain_error("tail_threshold_map: x must not be NaN");
  }
  if (x < 0.0) {
    throw std::domain_error("tail_threshold_map: threshold must be >= 0");
  }
  if (dir == ThresholdDirection::t_to_tstar) {
    return tstar_from_t(x, n);
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  if (x > root_n) {
    std::ostringstream os;
    os << "tail_threshold_map: t* threshold " << x << " exceeds sqrt(n) for n="
       << n;
    throw std::domain_error(os.str());
  }
  return t_from_tstar(x, n);
}

}  // namespace ttest
