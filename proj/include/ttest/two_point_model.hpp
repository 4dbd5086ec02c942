#pragma once

// The two-point law that extremizes the self-normalized sum, its exact
// finite-n distribution, and samplers for it.  A draw takes the value
// sqrt(p/q) with probability q and -sqrt(q/p) with probability p, so it is
// centered with unit variance; writing X_i = (p - xi_i)/sqrt(pq) for
// Bernoulli(p) draws xi_i turns the self-normalized sum into a strictly
// decreasing function g of the Bernoulli count, which is what makes exact
// enumeration of the t* tail possible.

#include <cstdint>
#include <random>

#include "ttest/discrete_law.hpp"
#include "ttest/statistics_core.hpp"

namespace ttest {

// Parameters of the two-point law.  The constructor enforces n >= 1 and
// p in (0, 1/2], so a constructed value is always usable.
class TwoPointLaw {
 public:
  TwoPointLaw(int n, double p);

  int n() const { return n_; }
  double p() const { return p_; }
  double q() const { return 1.0 - p_; }

 private:
  int n_;
  double p_;
};

// Binomial(n, p) pmf/cdf evaluated in log space, accurate for n in the
// thousands.  Counts outside [0, n] follow the probability convention
// rather than throwing: pmf gives 0, cdf gives 0 below and 1 above.
// cdf(k) sums the pmf over 0..k and is capped at 1 (the log-space terms
// can overshoot by a few ulp near the full-mass end).
double binomial_pmf(int n, double p, int k);
double binomial_cdf(int n, double p, int k);

// The value of the self-normalized sum when exactly k of the n Bernoulli
// indicators fire:
//   g(k) = (np - k) / sqrt(np^2 + (q - p) k),   0 <= k <= n,
// strictly decreasing in k, with g(0) = sqrt(n) and g(n) = -sqrt(n).
double g_map(const TwoPointLaw& law, int k);

// The same map without the k <= n restriction; a Poisson count pushed
// through g lives on k = 0, 1, 2, ...  The denominator stays positive for
// every k >= 1 because p <= 1/2.
double g_value(int n, double p, int k);

// Law of the Bernoulli count S_n = sum xi_i: atoms at n, n-1, ..., 0 with
// Binomial(n, p) masses.
DiscreteLaw bernoulli_sum_law(const TwoPointLaw& law);

// Exact law of the self-normalized sum under the two-point model: atoms at
// g(0) > g(1) > ... > g(n) carrying the binomial masses.
DiscreteLaw exact_tstar_law(const TwoPointLaw& law);

// Exact tail P(t* >= x).  Since {t* >= g(k)} = {S_n <= k}, this is the
// binomial cdf at k(x) = max{k : g(k) >= x}, evaluated with a relative
// tolerance of 1e-12 on the comparison so thresholds produced by a different
// arithmetic route still include their atom.  Returns exactly 1 for
// x <= g(n) and 0 for x > g(0).
double tstar_tail_exact(const TwoPointLaw& law, double x);

// The parameter choice that places the atom g(1) exactly at x:
//   p_x = (1 + x sqrt(1 - 1/n) / sqrt(1 - x^2/n)) / n,
// for x in [0, 1] and n > 3; always lands in (0, 1/2].
double adversarial_p(double x, int n);

// Population moments of the two-point law (exact closed forms):
// mean 0, variance 1, mu1 = E|X| = 2 sqrt(pq), mu3 = E|X|^3 = (p^2+q^2)/sqrt(pq).
struct TwoPointMoments {
  double mean;
  double variance;
  double mu1;
  double mu3;
};
TwoPointMoments two_point_moments(const TwoPointLaw& law);

// Uniform double in [0, 1) built from the top 53 bits of the engine output.
// Used everywhere instead of std::uniform_real_distribution so streams are
// identical across standard library implementations.
inline double uniform_from_bits(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Draws `count` iid values from the two-point law.  Identical (seed, count)
// arguments produce bit-identical samples on every platform.
Sample sample_two_point(const TwoPointLaw& law, std::uint64_t seed, int count);

// Engine-reference variant filling out.size() values in place; simulation
// loops use it to draw many samples from one deterministic stream without
// per-trial allocation.
void sample_two_point(const TwoPointLaw& law, std::mt19937_64& rng,
                      std::vector<double>& out);

// Contaminated model: X = tau * eta + (1 - tau) * (p - xi)/sqrt(pq), with
// tau ~ Bernoulli(c/n) independent of the Bernoulli indicator xi, and eta a
// centered unit-variance law with finitely many atoms.
struct MixtureLaw {
  int n;
  double p;
  double c;           // contamination rate c/n; requires 0 <= c <= n
  DiscreteLaw eta;    // finite atoms, mean 0, variance 1 (checked to 1e-9)
};

// Draws `count` iid values from the mixture.  Two engine outputs are
// consumed per draw (tau, then the component), so streams stay aligned
// whichever branch is taken.
Sample sample_mixture(const MixtureLaw& mix, std::uint64_t seed, int count);
void sample_mixture(const MixtureLaw& mix, std::mt19937_64& rng,
                    std::vector<double>& out);

}  // namespace ttest
