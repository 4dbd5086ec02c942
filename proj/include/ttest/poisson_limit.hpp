#pragma once

// The Poisson-count approximating law Y = g(pi), its defective limit, the
// Student-statistic analogue eta, exact binomial-vs-Poisson total variation,
// and the closed-form accuracy bound for TV(t*, Y).

#include "ttest/discrete_law.hpp"
#include "ttest/two_point_model.hpp"

namespace ttest {

// Parameters of the law Y = g(pi_lambda) with lambda = n p: the pushforward
// of a Poisson(np) count through the same g as the two-point model.  Shares
// the TwoPointLaw parameter constraints (n >= 1, p in (0, 1/2]).
class PoissonYLaw {
 public:
  PoissonYLaw(int n, double p);

  int n() const { return base_.n(); }
  double p() const { return base_.p(); }
  double lambda() const { return static_cast<double>(base_.n()) * base_.p(); }
  const TwoPointLaw& base() const { return base_; }

 private:
  TwoPointLaw base_;
};

// Poisson(lambda) pmf in log space, plus cdf and survival helpers that sum
// the pmf directly (no cancellation).
double poisson_pmf(double lambda, int k);
double poisson_cdf(double lambda, int k);   // P(pi <= k); k < 0 gives 0
double poisson_sf(double lambda, int k);    // P(pi > k)

// The law of Y: atoms (g(k), poisson_pmf(np, k)) for k = 0..K, where K is
// the smallest cutoff leaving at most tail_tolerance mass, recorded as
// unassigned.  The top atom is exactly (sqrt(n), e^{-np}).
// Requires tail_tolerance in (0, 1e-6].
DiscreteLaw y_law(const PoissonYLaw& law, double tail_tolerance = 1e-13);

// The defective limit law Y_lambda = (lambda - pi)/sqrt(pi): mass e^{-lambda}
// escapes to +infinity (the k=0 cell), finite atoms at (lambda-k)/sqrt(k) for
// k >= 1, truncated like y_law.
DiscreteLaw defective_y_law(double lambda, double tail_tolerance = 1e-13);

// Poisson analogue of the Student statistic,
//   eta = (np - pi)/sqrt(pi (1 - pi/n)):
// k=0 maps to +infinity (mass e^{-np}), k=n to -infinity, and k > n leaves
// the real line entirely; that escaping mass is recorded as unassigned.
DiscreteLaw eta_student_law(int n, double p, double tail_tolerance = 1e-13);

// Conservative two-sided critical values on the support of Y:
//   c_plus  = smallest support value v with P(Y > v) <= eps/2,
//   c_minus = largest  support value v with P(Y < v) <= eps/2.
// Both guarantees hold with <=; degenerate flags c_minus >= c_plus, which
// can happen at extreme levels.  Requires eps in (0, 1].
struct YCriticalValues {
  double c_minus;
  double c_plus;
  int k_minus;  // c_minus = g(k_minus)
  int k_plus;   // c_plus  = g(k_plus)
  bool degenerate;
};
YCriticalValues y_critical_values(const PoissonYLaw& law, double eps);

// One-sided conservative critical values at full level eps:
// P(Y > upper) <= eps, P(Y < lower) <= eps.
double y_upper_critical(const PoissonYLaw& law, double eps);
double y_lower_critical(const PoissonYLaw& law, double eps);

// Exact TV distance between Binomial(n, p) and Poisson(np):
//   1/2 [ sum_{k=0..n} |b_k - q_k| + P(pi > n or beyond cutoff) ],
// with the Poisson tail beyond the cutoff counted as pure difference.
// Absolute error <= truncation.  Requires truncation in (0, 1e-10].
double tv_binomial_poisson_exact(int n, double p, double truncation = 1e-12);

// Inputs and derived quantities of the closed-form accuracy bound.
struct TvBoundInputs {
  int n;
  double p;

  double delta() const;       // (1 - e^{-np}) p
  double delta_star() const;  // (1 - e^{-np}) p^2
  // min{1, (2 pi floor((n-1)p))^{-1/2} + 2(1-e^{-np})p/(1-1/n)}; when the
  // floor is 0 the first term is infinite and the min clamps to 1.
  double eps_n() const;
};

// The bound itself: 3p/(4e) + 2 delta^2 + 2 delta_star eps_n.
double tv_bound(const TvBoundInputs& inputs);
double tv_bound(int n, double p);

// Exact TV between the enumerated t* law and the (truncated) Y law on the
// merged g-mapped support.  Because g is injective this agrees with
// tv_binomial_poisson_exact up to the truncation bookkeeping; both routes
// are kept so the agreement itself can be checked.
double tv_tstar_vs_y_exact(const TwoPointLaw& law, double truncation = 1e-12);

}  // namespace ttest
