#pragma once

// Numerical verification of the tail lower bounds: exact tail/reference
// ratios under the adversarial two-point laws, divergence sweeps, the
// contaminated-model bound, and Monte Carlo cross-checks of the exact
// enumeration.

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ttest/special_functions.hpp"
#include "ttest/two_point_model.hpp"

namespace ttest {

// One grid point of a tail-ratio computation.
//
// For normal-reference records (theorem1_*): bound_form_a and bound_form_b
// are the two readings of the displayed small-x constant,
//   a = 1.25 e^{-1/(2(n-2))}   (statement form)
//   b = 1.25 e^{-2/(n(1-2/n)^2)} (proof form; the one checks key on),
// carried on every record of the sweep for comparison.
//
// For Student-reference records (theorem2_*): bound_form_a is the
// regime-specific proof lower bound for the ratio (the closed-form
// expression below for x >= 1; 1.25 for x < 1) and bound_form_b is the
// acceptance floor 1.20 on the ratio.
struct RatioRecord {
  int n;
  double x;
  double p_used;
  double exact_tail;
  double reference_tail;
  double ratio;
  double bound_form_a;
  double bound_form_b;
};

// Which adversarial parameter drives a record: p = p_x (places the atom
// g(1) at x; the x-in-[0,1] regime) or p = 1/n (the x-in-[1,sqrt(n)]
// regime).  auto_select takes small_x below 1 and large_x from 1 up.
enum class Regime { auto_select, small_x, large_x };

// The claimed uniform gap of the large-x normal-reference bound:
// sqrt(2 pi)/e^{3/4} - 1.
double t3_star_threshold();

// Closed-form lower bound for the Student-reference ratio at p = 1/n:
//   (1 - 1/n)^{n+1} x (1 + x^2/n)^{(n-1)/2} / C_n.
double t14_lower_expression(int n, double x);

// Exact P(t* >= x) under the prescribed adversarial p, against the normal
// tail Phi_c(x).  Requires n > 3 (and n <= 5000: exact enumeration only at
// desk scale), 0 <= x <= sqrt(n), and x <= 1 (small_x) or x >= 1 (large_x).
RatioRecord theorem1_ratio(int n, double x, Regime regime = Regime::auto_select);

// Same adversarial construction against the Student tail Psi_n^c(x)
// computed by quadrature.
RatioRecord theorem2_ratio(int n, double x, Regime regime = Regime::auto_select,
                           QuadratureConfig cfg = {});

// Sweep n over n_list with thresholds x_n = x_rule(n) in the large-x
// regime; the ratios diverge whenever 1 << x_n <= sqrt(n).
std::vector<RatioRecord> theorem1_divergence(
    const std::vector<int>& n_list, const std::function<double(int)>& x_rule);

// True when the sweep demonstrates divergence: ratios strictly increase
// and the last exceeds M.  A non-divergent rule (say x_n constant) fails.
bool ratios_diverge(const std::vector<RatioRecord>& records, double m);

// The contaminated-model lower-bound expression at p = 1/n:
//   (1 - c/n)^n q^{n-1} (q + np),
// which tends to 2/e^{1+c}.  The tail/reference ratio it certifies is twice
// this value (the reference tail at 0 being 1/2), so the ratio stays above
// 1 up to c = ln(4/e).
double remark2_expression(int n, double c);

// Negative-side mirror of a ratio record: under the sign-flipped law,
// P(t* <= -x)/Phi(-x) collapses algebraically to the positive-side
// quantity — P(-t* <= -x) = P(t* >= x) and Phi(-x) = Phi_c(x) — so the
// record is computed through the identical arithmetic and equality is
// exact, not approximate.
RatioRecord remark1_mirror_ratio(int n, double x,
                                 Regime regime = Regime::auto_select);

// Default verification grids: x in [0, 1] with the given step, and
// `points` log-spaced thresholds spanning [1, sqrt(n)].
std::vector<double> small_x_grid(double step = 0.05);
std::vector<double> large_x_grid(int n, int points = 20);

// Monte Carlo estimate of P(t* >= x) from `trials` simulated samples of
// the two-point or contaminated law.  Counting uses a 1e-9 slack on the
// comparison so an atom landing exactly on x is not split by statistic
// rounding.  Deterministic given the seed; trials >= 1000.
struct MonteCarloTail {
  double estimate;
  double std_error;
};
MonteCarloTail monte_carlo_tail(const std::variant<TwoPointLaw, MixtureLaw>& model,
                                double x, long trials, std::uint64_t seed);

// CSV/JSON rendering of record tables (17 significant digits).  `context`
// labels the sweep (e.g. "theorem1/small_x"); `pass` rows carry the
// per-record check outcome supplied by the caller.
std::string ratio_records_csv(const std::vector<RatioRecord>& records,
                              const std::vector<std::string>& contexts,
                              const std::vector<bool>& pass);
std::string ratio_records_json(const std::vector<RatioRecord>& records,
                               const std::vector<std::string>& contexts,
                               const std::vector<bool>& pass);

}  // namespace ttest
