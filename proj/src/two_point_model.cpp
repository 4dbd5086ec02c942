#include "ttest/two_point_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ttest {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_count_range(int n, int k, const char* who) {
  if (k < 0 || k > n) {
    std::ostringstream os;
    os << who << ": k must be in [0, " << n << "], got " << k;
    throw std::domain_error(os.str());
  }
}

// Inverse-cdf draw from a finitely supported law.
double draw_atom(const DiscreteLaw& law, double u) {
  double cum = 0.0;
  for (const DiscreteLaw::Atom& a : law.atoms) {
    cum += a.prob;
    if (u < cum) return a.value;
  }
  return law.atoms.back().value;
}

}  // namespace

TwoPointLaw::TwoPointLaw(int n, double p) : n_(n), p_(p) {
  if (n < 1) {
    throw std::domain_error("TwoPointLaw: n must be >= 1");
  }
  if (!(p > 0.0) || !(p <= 0.5)) {
    std::ostringstream os;
    os << "TwoPointLaw: p must be in (0, 1/2], got " << p;
    throw std::domain_error(os.str());
  }
}

double binomial_pmf(int n, double p, int k) {
  if (n < 1 || !(p > 0.0 && p < 1.0)) {
    throw std::domain_error("binomial_pmf: need n >= 1 and p in (0, 1)");
  }
  if (k < 0 || k > n) return 0.0;
  return std::exp(log_choose(n, k) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
}

double binomial_cdf(int n, double p, int k) {
  if (n < 1 || !(p > 0.0 && p < 1.0)) {
    throw std::domain_error("binomial_cdf: need n >= 1 and p in (0, 1)");
  }
  if (k < 0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j <= std::min(k, n); ++j) sum += binomial_pmf(n, p, j);
  return std::min(sum, 1.0);
}

double g_value(int n, double p, int k) {
  if (n < 1 || !(p > 0.0 && p <= 0.5)) {
    throw std::domain_error("g_value: need n >= 1 and p in (0, 1/2]");
  }
  if (k < 0) throw std::domain_error("g_value: k must be >= 0");
  if (k == 0) {
    // np / sqrt(np^2) == sqrt(n) exactly; avoid the rounding wobble.
    return std::sqrt(static_cast<double>(n));
  }
  const double np = n * p;
  return (np - k) / std::sqrt(np * p + (1.0 - 2.0 * p) * k);
}

double g_map(const TwoPointLaw& law, int k) {
  check_count_range(law.n(), k, "g_map");
  return g_value(law.n(), law.p(), k);
}

DiscreteLaw bernoulli_sum_law(const TwoPointLaw& law) {
  const int n = law.n();
  DiscreteLaw out;
  out.atoms.reserve(n + 1);
  for (int k = n; k >= 0; --k) {
    out.atoms.push_back({static_cast<double>(k), binomial_pmf(n, law.p(), k)});
  }
  out.validate();
  return out;
}

DiscreteLaw exact_tstar_law(const TwoPointLaw& law) {
  const int n = law.n();
  DiscreteLaw out;
  out.atoms.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    out.atoms.push_back({g_map(law, k), binomial_pmf(n, law.p(), k)});
  }
  out.validate();
  return out;
}

double tstar_tail_exact(const TwoPointLaw& law, double x) {
  if (std::isnan(x)) {
    throw std::domain_error("tstar_tail_exact: x must not be NaN");
  }
  const int n = law.n();
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  if (x > g_map(law, 0) + tol) return 0.0;
  if (x <= g_map(law, n) + tol) return 1.0;
  // g is strictly decreasing: find k(x) = max{k : g(k) >= x - tol}.
  int lo = 0, hi = n;  // invariant: g(lo) >= x - tol > g(hi)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (g_map(law, mid) >= x - tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return binomial_cdf(n, law.p(), lo);
}

double adversarial_p(double x, int n) {
  if (n <= 3) {
    throw std::domain_error("adversarial_p: n must exceed 3");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "adversarial_p: x must be in [0, 1], got " << x;
    throw std::domain_error(os.str());
  }
  const double y =
      x * std::sqrt(1.0 - 1.0 / n) / std::sqrt(1.0 - x * x / n);
  return (1.0 + y) / n;
}

TwoPointMoments two_point_moments(const TwoPointLaw& law) {
  const double p = law.p();
  const double q = law.q();
  const double root_pq = std::sqrt(p * q);
  TwoPointMoments m;
  m.mean = 0.0;
  m.variance = 1.0;
  m.mu1 = 2.0 * root_pq;
  m.mu3 = (p * p + q * q) / root_pq;
  return m;
}

void sample_two_point(const TwoPointLaw& law, std::mt19937_64& rng,
                      std::vector<double>& out) {
  const double p = law.p();
  const double hi = std::sqrt(p / law.q());
  const double lo = -std::sqrt(law.q() / p);
  for (double& v : out) {
    v = uniform_from_bits(rng) < p ? lo : hi;
  }
}

Sample sample_two_point(const TwoPointLaw& law, std::uint64_t seed, int count) {
  if (count < 1) {
    throw std::domain_error("sample_two_point: count must be >= 1");
  }
  std::mt19937_64 rng(seed);
  Sample s;
  s.values.resize(count);
  sample_two_point(law, rng, s.values);
  return s;
}

namespace {

void validate_mixture(const MixtureLaw& mix) {
  if (mix.n < 1 || !(mix.c >= 0.0) || mix.c > mix.n) {
    throw std::domain_error("sample_mixture: need n >= 1 and 0 <= c <= n");
  }
  TwoPointLaw base(mix.n, mix.p);  // validates p
  (void)base;
  mix.eta.validate();
  if (mix.eta.unassigned_mass != 0.0) {
    throw std::domain_error("sample_mixture: eta must have no unassigned mass");
  }
  double mean = 0.0, second = 0.0;
  for (const DiscreteLaw::Atom& a : mix.eta.atoms) {
    if (!std::isfinite(a.value)) {
      throw std::domain_error("sample_mixture: eta atoms must be finite");
    }
    mean += a.value * a.prob;
    second += a.value * a.value * a.prob;
  }
  if (std::fabs(mean) > 1e-9 || std::fabs(second - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "sample_mixture: eta must be centered with unit variance, got mean="
       << mean << ", E[eta^2]=" << second;
    throw std::domain_error(os.str());
  }
}

}  // namespace

void sample_mixture(const MixtureLaw& mix, std::mt19937_64& rng,
                    std::vector<double>& out) {
  validate_mixture(mix);
  const TwoPointLaw base(mix.n, mix.p);
  const double tau_prob = mix.c / mix.n;
  const double p = base.p();
  const double hi = std::sqrt(p / base.q());
  const double lo = -std::sqrt(base.q() / p);
  for (double& v : out) {
    const double u_tau = uniform_from_bits(rng);
    const double u_comp = uniform_from_bits(rng);
    if (u_tau < tau_prob) {
      v = draw_atom(mix.eta, u_comp);
    } else {
      v = u_comp < p ? lo : hi;
    }
  }
}

Sample sample_mixture(const MixtureLaw& mix, std::uint64_t seed, int count) {
  if (count < 1) {
    throw std::domain_error("sample_mixture: count must be >= 1");
  }
  std::mt19937_64 rng(seed);
  Sample s;
  s.values.resize(count);
  sample_mixture(mix, rng, s.values);
  return s;
}

}  // namespace ttest
