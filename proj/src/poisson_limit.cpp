#include "ttest/poisson_limit.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ttest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tail_tolerance(double tol, const char* who) {
  if (!(tol > 0.0 && tol <= 1e-6)) {
    std::ostringstream os;
    os << who << ": tail_tolerance must be in (0, 1e-6], got " << tol;
    throw std::domain_error(os.str());
  }
}

// Hard stop for truncation walks; generous for any desk-scale lambda.
int poisson_walk_cap(double lambda) {
  return static_cast<int>(lambda + 200.0 * std::sqrt(lambda + 1.0) + 200.0);
}

}  // namespace

PoissonYLaw::PoissonYLaw(int n, double p) : base_(n, p) {}

double poisson_pmf(double lambda, int k) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("poisson_pmf: lambda must be a positive real");
  }
  if (k < 0) throw std::domain_error("poisson_pmf: k must be >= 0");
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

double poisson_cdf(double lambda, int k) {
  if (k < 0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += poisson_pmf(lambda, j);
  return sum;
}

double poisson_sf(double lambda, int k) {
  if (k < 0) return 1.0;
  // Sum the upper tail directly until the terms stop mattering, so small
  // survival probabilities keep their relative accuracy.
  double sum = 0.0;
  const int cap = poisson_walk_cap(lambda) + k;
  for (int j = k + 1; j <= cap; ++j) {
    const double term = poisson_pmf(lambda, j);
    sum += term;
    if (j > lambda && term < sum * 1e-18) break;
  }
  return sum;
}

DiscreteLaw y_law(const PoissonYLaw& law, double tail_tolerance) {
  check_tail_tolerance(tail_tolerance, "y_law");
  const double lambda = law.lambda();
  DiscreteLaw out;
  double cum = 0.0;
  const int cap = poisson_walk_cap(lambda);
  for (int k = 0; k <= cap; ++k) {
    const double mass = poisson_pmf(lambda, k);
    out.atoms.push_back({g_value(law.n(), law.p(), k), mass});
    cum += mass;
    if (1.0 - cum <= tail_tolerance) break;
  }
  if (1.0 - cum > tail_tolerance) {
    throw numerical_error("y_law: truncation walk failed to converge");
  }
  out.unassigned_mass = std::max(0.0, 1.0 - cum);
  out.validate();
  return out;
}

DiscreteLaw defective_y_law(double lambda, double tail_tolerance) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("defective_y_law: lambda must be a positive real");
  }
  check_tail_tolerance(tail_tolerance, "defective_y_law");
  DiscreteLaw out;
  // The k=0 cell escapes to +infinity: this is the defect of Y_lambda.
  out.atoms.push_back({kInf, std::exp(-lambda)});
  double cum = out.atoms[0].prob;
  const int cap = poisson_walk_cap(lambda);
  for (int k = 1; k <= cap; ++k) {
    const double mass = poisson_pmf(lambda, k);
    out.atoms.push_back({(lambda - k) / std::sqrt(static_cast<double>(k)),
                         mass});
    cum += mass;
    if (1.0 - cum <= tail_tolerance) break;
  }
  if (1.0 - cum > tail_tolerance) {
    throw numerical_error(
        "defective_y_law: truncation walk failed to converge");
  }
  out.unassigned_mass = std::max(0.0, 1.0 - cum);
  out.validate();
  return out;
}

DiscreteLaw eta_student_law(int n, double p, double tail_tolerance) {
  const TwoPointLaw params(n, p);  // validates n, p
  check_tail_tolerance(tail_tolerance, "eta_student_law");
  const double lambda = params.n() * params.p();
  const double np = lambda;
  DiscreteLaw out;
  out.atoms.push_back({kInf, poisson_pmf(lambda, 0)});
  double cum = out.atoms[0].prob;
  bool truncated = false;
  for (int k = 1; k < n; ++k) {
    const double mass = poisson_pmf(lambda, k);
    const double value = (np - k) / std::sqrt(k * (1.0 - static_cast<double>(k) / n));
    out.atoms.push_back({value, mass});
    cum += mass;
    if (1.0 - cum <= tail_tolerance) {
      truncated = true;
      break;
    }
  }
  if (!truncated && n >= 1) {
    // k = n has a vanishing denominator; np - n < 0 sends it to -infinity.
    out.atoms.push_back({-kInf, poisson_pmf(lambda, n)});
    cum += out.atoms.back().prob;
    // k > n leaves the real line (negative radicand): a genuine defect.
  }
  out.unassigned_mass = std::max(0.0, 1.0 - cum);
  out.validate();
  return out;
}

YCriticalValues y_critical_values(const PoissonYLaw& law, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    std::ostringstream os;
    os << "y_critical_values: eps must be in (0, 1], got " << eps;
    throw std::domain_error(os.str());
  }
  const double lambda = law.lambda();
  const double half = 0.5 * eps;
  // P(Y > g(k)) = P(pi < k) = cdf(k-1): the largest k keeping it <= eps/2.
  int k_plus = 0;
  double cum = 0.0;  // cdf(k_plus - 1)
  while (true) {
    const double next = cum + poisson_pmf(lambda, k_plus);
    if (next > half) break;
    cum = next;
    ++k_plus;
  }
  // P(Y < g(k)) = P(pi > k) = sf(k): the smallest k pushing it <= eps/2.
  int k_minus = 0;
  while (poisson_sf(lambda, k_minus) > half) {
    ++k_minus;
    if (k_minus > poisson_walk_cap(lambda)) {
      throw numerical_error("y_critical_values: lower search ran away");
    }
  }
  YCriticalValues out;
  out.k_plus = k_plus;
  out.k_minus = k_minus;
  out.c_plus = g_value(law.n(), law.p(), k_plus);
  out.c_minus = g_value(law.n(), law.p(), k_minus);
  out.degenerate = out.c_minus >= out.c_plus;
  return out;
}

double y_upper_critical(const PoissonYLaw& law, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error("y_upper_critical: eps must be in (0, 1]");
  }
  const double lambda = law.lambda();
  int k = 0;
  double cum = 0.0;
  while (true) {
    const double next = cum + poisson_pmf(lambda, k);
    if (next > eps) break;
    cum = next;
    ++k;
  }
  return g_value(law.n(), law.p(), k);
}

double y_lower_critical(const PoissonYLaw& law, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw std::domain_error("y_lower_critical: eps must be in (0, 1]");
  }
  const double lambda = law.lambda();
  int k = 0;
  while (poisson_sf(lambda, k) > eps) {
    ++k;
    if (k > poisson_walk_cap(lambda)) {
      throw numerical_error("y_lower_critical: search ran away");
    }
  }
  return g_value(law.n(), law.p(), k);
}

double tv_binomial_poisson_exact(int n, double p, double truncation) {
  if (n < 1 || !(p > 0.0 && p < 1.0)) {
    throw std::domain_error(
        "tv_binomial_poisson_exact: need n >= 1 and p in (0, 1)");
  }
  if (!(truncation > 0.0 && truncation <= 1e-10)) {
    std::ostringstream os;
    os << "tv_binomial_poisson_exact: truncation must be in (0, 1e-10], got "
       << truncation;
    throw std::domain_error(os.str());
  }
  const double lambda = n * p;
  double sum = 0.0;
  double pois_cum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double q_k = poisson_pmf(lambda, k);
    sum += std::fabs(binomial_pmf(n, p, k) - q_k);
    pois_cum += q_k;
  }
  // Poisson mass beyond n has no binomial partner: pure difference.
  const int cap = poisson_walk_cap(lambda) + n;
  for (int k = n + 1; 1.0 - pois_cum > truncation; ++k) {
    if (k > cap) {
      throw numerical_error(
          "tv_binomial_poisson_exact: tail walk failed to converge");
    }
    const double q_k = poisson_pmf(lambda, k);
    sum += q_k;
    pois_cum += q_k;
  }
  return 0.5 * sum;
}

double TvBoundInputs::delta() const {
  return -std::expm1(-n * p) * p;
}

double TvBoundInputs::delta_star() const {
  return -std::expm1(-n * p) * p * p;
}

double TvBoundInputs::eps_n() const {
  const double m = std::floor((n - 1.0) * p);
  const double second = 2.0 * (-std::expm1(-n * p)) * p / (1.0 - 1.0 / n);
  if (m < 1.0) return 1.0;  // first term infinite; the min clamps to 1
  return std::min(1.0, 1.0 / std::sqrt(2.0 * M_PI * m) + second);
}

double tv_bound(const TvBoundInputs& inputs) {
  if (inputs.n < 2 || !(inputs.p > 0.0 && inputs.p <= 0.5)) {
    throw std::domain_error("tv_bound: need n >= 2 and p in (0, 1/2]");
  }
  const double d = inputs.delta();
  const double ds = inputs.delta_star();
  return 3.0 * inputs.p / (4.0 * M_E) + 2.0 * d * d + 2.0 * ds * inputs.eps_n();
}

double tv_bound(int n, double p) { return tv_bound(TvBoundInputs{n, p}); }

double tv_tstar_vs_y_exact(const TwoPointLaw& law, double truncation) {
  if (!(truncation > 0.0 && truncation <= 1e-10)) {
    std::ostringstream os;
    os << "tv_tstar_vs_y_exact: truncation must be in (0, 1e-10], got "
       << truncation;
    throw std::domain_error(os.str());
  }
  const DiscreteLaw lhs = exact_tstar_law(law);
  const DiscreteLaw rhs = y_law(PoissonYLaw(law.n(), law.p()), truncation);
  return tv_distance(lhs, rhs);
}

}  // namespace ttest
