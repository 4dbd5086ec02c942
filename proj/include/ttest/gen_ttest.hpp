#pragma once

// Classical Z- and T-tests, the normal-surrogate type-II error, and the
// generalized test: pick the best-approximating distribution for the
// self-normalized sum by its accuracy bound, refuse to decide when no
// candidate is accurate enough, otherwise test against that candidate's
// critical values.

#include <optional>
#include <string>
#include <vector>

#include "ttest/bounds_registry.hpp"
#include "ttest/statistics_core.hpp"

namespace ttest {

enum class Alternative { two_sided, simple, one_sided_less, one_sided_greater };

// Null mean a; for the simple alternative, b is the alternative mean and
// must differ from a (the test direction is the sign of b - a).
struct Hypotheses {
  double a = 0.0;
  Alternative alternative = Alternative::two_sided;
  double b = 0.0;
};

enum class Sidedness { two_sided, one_sided };

struct TestConfig {
  double level = 0.05;
  double applicability_threshold = 0.01;
  std::vector<CandidateKind> candidates = {
      CandidateKind::normal, CandidateKind::student_t,
      CandidateKind::poisson_y};
  std::optional<double> sigma_known;
  // Widen the acceptance region until the approximation error is absorbed:
  // the test runs at effective level max(level - 2 r_n, ...); an error is
  // raised when that is <= 0.
  bool sub_asymptotic = false;
  double student_c_star = 0.5;
};

enum class Outcome { accept_H0, reject_H0, not_applicable };
std::string outcome_name(Outcome o);

// The decision record.  The acceptance region is an interval on the scale
// of the reported statistic, closed at finite endpoints, with +-infinity
// for half-lines; boundary comparisons carry a 1e-12 relative slack so a
// statistic placed exactly on the boundary accepts.
struct TestDecision {
  Outcome outcome = Outcome::accept_H0;
  std::string statistic_name;         // "zeta", "t", or "t_star"
  double statistic_value = 0.0;
  double accept_lower = 0.0;
  double accept_upper = 0.0;
  std::optional<CandidateApprox> chosen_candidate;
  std::optional<AccuracyReport> accuracy_report;
  std::string notes;
};

// Stable-keyed JSON rendering of a decision: outcome, statistic,
// statistic_name, critical_region, candidate, r_n, notes.
std::string decision_to_json(const TestDecision& d, int indent = 2);

// Normal critical value: Phi_c^{-1}(level/2) two-sided, Phi_c^{-1}(level)
// one-sided.
double z_critical_value(double level, Sidedness sidedness);

// Z-test with known sigma (cfg.sigma_known required): accept when the
// z-statistic falls in the closed interval [-c, c] (or the one-sided
// half-line).
TestDecision z_test(const Sample& s, const Hypotheses& h,
                    const TestConfig& cfg);

// Classical T-test.  The statistic is (mean - a) sqrt(n) / sigma_hat by
// default (sigma_tilde with use_sigma_tilde); the critical value is the
// Student quantile with df = n-1 or n per the convention flag.
enum class DfConvention { n_minus_1, n };
TestDecision t_test_classical(const Sample& s, const Hypotheses& h,
                              double level,
                              DfConvention df = DfConvention::n_minus_1,
                              bool use_sigma_tilde = false);

// Type-II error under the normal surrogate for the z-statistic, at
// standardized shift delta = (a - b)/sigma:
//   two-sided: Phi_c(delta sqrt(n) - c) - Phi_c(delta sqrt(n) + c)
//   one-sided: Phi_c(delta sqrt(n) - c)
double type2_error_normal(double delta, int n, double level,
                          Sidedness sidedness);

// Shape screen for the Poisson-count candidate: the sample must look like
// a two-point law with a rare heavy lower atom.  Detection requires the
// values at or below mean - sigma_hat to be a single tight cluster (and the
// rest another), with cluster fraction p_hat in (0, 1/2].  `reason`
// explains a failed detection.
struct TwoPointShapeEstimate {
  bool detected = false;
  double p_hat = 0.0;
  std::string reason;
};
TwoPointShapeEstimate estimate_two_point_shape(const Sample& s,
                                               const MomentEstimates& m);

// The generalized test pipeline: moments -> accuracy reports for every
// configured candidate -> minimal-r_n selection -> applicability gate ->
// critical values from the chosen law, mapped to the t* scale -> decision.
TestDecision generalized_t_test(const Sample& s, const Hypotheses& h,
                                const TestConfig& cfg);

}  // namespace ttest
