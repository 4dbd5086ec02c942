#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ttest/statistics_core.hpp"
#include "ttest/two_point_model.hpp"

using namespace ttest;

TEST_CASE("two-point law parameter validation") {
  CHECK_NOTHROW(TwoPointLaw(1, 0.5));
  CHECK_NOTHROW(TwoPointLaw(100, 1e-9));
  CHECK_THROWS_AS(TwoPointLaw(0, 0.1), std::domain_error);
  CHECK_THROWS_AS(TwoPointLaw(10, 0.0), std::domain_error);
  CHECK_THROWS_AS(TwoPointLaw(10, 0.50001), std::domain_error);
  CHECK_THROWS_AS(TwoPointLaw(10, -0.1), std::domain_error);
  const TwoPointLaw law(7, 0.25);
  CHECK(law.n() == 7);
  CHECK(law.p() == 0.25);
  CHECK(law.q() == 0.75);
}

TEST_CASE("binomial pmf/cdf against direct small-n arithmetic") {
  // n=5, p=0.3: pmf(k) = C(5,k) 0.3^k 0.7^(5-k)
  const double q = 0.7, p = 0.3;
  const double want[6] = {std::pow(q, 5),
                          5 * p * std::pow(q, 4),
                          10 * p * p * std::pow(q, 3),
                          10 * p * p * p * q * q,
                          5 * std::pow(p, 4) * q,
                          std::pow(p, 5)};
  double cum = 0.0;
  for (int k = 0; k <= 5; ++k) {
    CHECK(binomial_pmf(5, p, k) == doctest::Approx(want[k]).epsilon(1e-14));
    cum += want[k];
    CHECK(binomial_cdf(5, p, k) == doctest::Approx(cum).epsilon(1e-14));
  }
  CHECK(binomial_cdf(5, p, 5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(binomial_cdf(5, p, -1) == 0.0);
  CHECK(binomial_pmf(5, p, 6) == 0.0);
}

TEST_CASE("g map: exact top value, zero at the mean, monotone") {
  const TwoPointLaw law(100, 0.01);
  CHECK(g_map(law, 0) == 10.0);  // exactly sqrt(n)
  // np = 1 integer: g(np) = 0.
  CHECK(g_map(law, 1) == doctest::Approx(0.0).epsilon(1e-15));
  double prev = g_map(law, 0);
  for (int k = 1; k <= 100; ++k) {
    const double cur = g_map(law, k);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(g_map(law, -1), std::domain_error);
  CHECK_THROWS_AS(g_map(law, 101), std::domain_error);
}

TEST_CASE("exact t* law: complete, decreasing, pinned to the binomial") {
  const TwoPointLaw law(12, 0.3);
  const DiscreteLaw ts = exact_tstar_law(law);
  REQUIRE(ts.atoms.size() == 13);
  CHECK(ts.unassigned_mass == 0.0);
  CHECK(ts.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 0; k <= 12; ++k) {
    CHECK(ts.atoms[k].value == g_map(law, k));
    CHECK(ts.atoms[k].prob ==
          doctest::Approx(binomial_pmf(12, 0.3, k)).epsilon(1e-13));
  }
  CHECK_NOTHROW(ts.validate());

  const DiscreteLaw sums = bernoulli_sum_law(law);
  REQUIRE(sums.atoms.size() == 13);
  CHECK(sums.atoms.front().value == 12.0);
  CHECK(sums.atoms.back().value == 0.0);
  CHECK_NOTHROW(sums.validate());
}

TEST_CASE("t* tail: closed-form anchor points") {
  const TwoPointLaw law(100, 0.01);
  // Only k=0 reaches sqrt(n): P = q^n.
  CHECK(tstar_tail_exact(law, 10.0) ==
        doctest::Approx(0.3660323412732292).epsilon(1e-13));
  // Above the top atom the tail is exactly zero, at/below the bottom exactly 1.
  CHECK(tstar_tail_exact(law, 10.1) == 0.0);
  CHECK(tstar_tail_exact(law, -15.0) == 1.0);
  CHECK(tstar_tail_exact(law, g_map(law, 100)) == 1.0);
  // x=0 with np=1: includes k=0 and the g(1)=0 atom.
  CHECK(tstar_tail_exact(law, 0.0) ==
        doctest::Approx(0.7357619789229557).epsilon(1e-13));
}

TEST_CASE("t* tail equals the law's own tail operator everywhere") {
  const TwoPointLaw law(40, 0.17);
  const DiscreteLaw ts = exact_tstar_law(law);
  for (int k = 0; k <= 40; ++k) {
    const double v = ts.atoms[k].value;
    CHECK(tstar_tail_exact(law, v) ==
          doctest::Approx(ts.prob_at_least(v)).epsilon(1e-13));
  }
  // Between atoms.
  for (int k = 0; k < 40; ++k) {
    const double mid = 0.5 * (ts.atoms[k].value + ts.atoms[k + 1].value);
    CHECK(tstar_tail_exact(law, mid) ==
          doctest::Approx(ts.prob_at_least(mid)).epsilon(1e-13));
  }
}

TEST_CASE("t* tail is a decreasing step function") {
  const TwoPointLaw law(25, 0.2);
  double prev = 1.0;
  for (double x = -5.0; x <= 5.01; x += 0.1) {
    const double cur = tstar_tail_exact(law, x);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("adversarial p places the g(1) atom at x") {
  for (int n : {5, 13, 60, 200, 1000}) {
    for (double x : {0.05, 0.3, 0.7, 1.0}) {
      const double p = adversarial_p(x, n);
      CHECK(p > 0.0);
      CHECK(p <= 0.5);
      CHECK(g_value(n, p, 1) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(adversarial_p(0.0, n) == 1.0 / n);
  }
  CHECK_THROWS_AS(adversarial_p(0.5, 3), std::domain_error);
  CHECK_THROWS_AS(adversarial_p(-0.1, 10), std::domain_error);
  CHECK_THROWS_AS(adversarial_p(1.1, 10), std::domain_error);
}

TEST_CASE("population moments of the standardized two-point law") {
  const TwoPointLaw law(10, 0.1);
  const TwoPointMoments m = two_point_moments(law);
  CHECK(m.mean == 0.0);
  CHECK(m.variance == 1.0);
  CHECK(m.mu1 == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m.mu3 == doctest::Approx(0.82 / 0.3).epsilon(1e-15));
  // Cross-check against direct expectation over the two atoms.
  const double hi = std::sqrt(0.1 / 0.9), lo = -std::sqrt(0.9 / 0.1);
  CHECK(0.9 * hi + 0.1 * lo == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(0.9 * hi * hi + 0.1 * lo * lo == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(0.9 * std::fabs(hi) + 0.1 * std::fabs(lo) ==
        doctest::Approx(m.mu1).epsilon(1e-14));
  CHECK(0.9 * std::pow(std::fabs(hi), 3) + 0.1 * std::pow(std::fabs(lo), 3) ==
        doctest::Approx(m.mu3).epsilon(1e-14));
}

TEST_CASE("two-point sampler: determinism, support, frequencies") {
  const TwoPointLaw law(1, 0.2);
  const Sample a = sample_two_point(law, 7, 100000);
  const Sample b = sample_two_point(law, 7, 100000);
  REQUIRE(a.n() == 100000);
  for (int i = 0; i < a.n(); ++i) CHECK(a.values[i] == b.values[i]);

  const double hi = std::sqrt(0.2 / 0.8), lo = -std::sqrt(0.8 / 0.2);
  long low_count = 0;
  for (double v : a.values) {
    CHECK((v == hi || v == lo));
    if (v == lo) ++low_count;
  }
  // 4-sigma band around p = 0.2 at 1e5 draws.
  const double freq = static_cast<double>(low_count) / a.n();
  CHECK(std::fabs(freq - 0.2) < 4.0 * std::sqrt(0.2 * 0.8 / a.n()));

  CHECK_THROWS_AS(sample_two_point(law, 7, 0), std::domain_error);
}

TEST_CASE("engine-reference sampler continues one stream") {
  const TwoPointLaw law(1, 0.35);
  std::mt19937_64 rng(99);
  std::vector<double> first(50), second(50);
  sample_two_point(law, rng, first);
  sample_two_point(law, rng, second);
  const Sample seeded = sample_two_point(law, 99, 100);
  for (int i = 0; i < 50; ++i) {
    CHECK(first[i] == seeded.values[i]);
    CHECK(second[i] == seeded.values[i + 50]);
  }
}

TEST_CASE("mixture sampler: validation and component support") {
  MixtureLaw mix;
  mix.n = 50;
  mix.p = 0.1;
  mix.c = 0.0;
  mix.eta.atoms = {{1.0, 0.5}, {-1.0, 0.5}};

  const Sample pure = sample_mixture(mix, 3, 1000);
  const double hi = std::sqrt(0.1 / 0.9), lo = -std::sqrt(0.9 / 0.1);
  for (double v : pure.values) CHECK((v == hi || v == lo));

  mix.c = 50.0;  // tau probability 1: all draws from eta
  const Sample contaminated = sample_mixture(mix, 3, 1000);
  for (double v : contaminated.values) CHECK((v == 1.0 || v == -1.0));

  mix.c = -1.0;
  CHECK_THROWS_AS(sample_mixture(mix, 3, 10), std::domain_error);
  mix.c = 51.0;
  CHECK_THROWS_AS(sample_mixture(mix, 3, 10), std::domain_error);

  mix.c = 1.0;
  mix.eta.atoms = {{2.0, 0.5}, {-1.0, 0.5}};  // mean 0.5: not centered
  CHECK_THROWS_AS(sample_mixture(mix, 3, 10), std::domain_error);
  mix.eta.atoms = {{0.5, 0.5}, {-0.5, 0.5}};  // variance 0.25: not unit
  CHECK_THROWS_AS(sample_mixture(mix, 3, 10), std::domain_error);
  mix.eta.atoms = {{1.0, 0.4}, {-1.0, 0.4}};
  mix.eta.unassigned_mass = 0.2;
  CHECK_THROWS_AS(sample_mixture(mix, 3, 10), std::domain_error);
}

TEST_CASE("mixture sampler: contamination frequency near c/n") {
  MixtureLaw mix;
  mix.n = 10;
  mix.p = 0.5;
  mix.c = 2.0;  // tau probability 0.2
  mix.eta.atoms = {{3.0, 0.1}, {-1.0 / 3.0, 0.9}};
  // mean = 0.3 - 0.3 = 0; var = 0.9 + 0.1 = 1.0
  const Sample s = sample_mixture(mix, 11, 200000);
  long eta_hits = 0;
  for (double v : s.values) {
    if (v == 3.0 || v == -1.0 / 3.0) ++eta_hits;
  }
  const double freq = static_cast<double>(eta_hits) / s.n();
  CHECK(std::fabs(freq - 0.2) < 4.0 * std::sqrt(0.2 * 0.8 / s.n()));
}
