#pragma once

// Computable accuracy bounds r_n for each candidate approximating
// distribution of the self-normalized sum, and the minimal-r_n selection
// rule with its applicability threshold.

#include <string>
#include <vector>

#include "ttest/statistics_core.hpp"

namespace ttest {

enum class CandidateKind { normal, student_t, poisson_y };

// Name used in reports and JSON output: "Normal", "StudentT", "PoissonY".
std::string candidate_kind_name(CandidateKind kind);

struct CandidateApprox {
  CandidateKind kind;
  int df = 0;        // StudentT only, >= 1
  int n = 0;         // PoissonY only
  double p_hat = 0;  // PoissonY only, in (0, 1/2]

  static CandidateApprox normal_law();
  static CandidateApprox student_t_law(int df);
  static CandidateApprox poisson_y_law(int n, double p_hat);
};

// A candidate together with its computed accuracy bound
//   sup_x |P(t* <= x) - F(x)| <= r_n
// and a digest of the inputs the bound was computed from.
struct AccuracyReport {
  CandidateApprox candidate;
  double r_n;
  std::string inputs_digest;
};

// Normal-approximation bound for the self-normalized sum:
//   r_n = (6.4 mu3/sigma^3 + 2 mu1/sigma) / sqrt(n)
// from the plug-in moment estimates.  Throws undefined_statistic_error when
// sigma_hat is zero (degenerate sample).
AccuracyReport normal_bound_cor2(const MomentEstimates& m, int n);

// Student-approximation bound: the normal bound plus a C*/n allowance for
// the Student-vs-normal gap.  C* has no canonical value; the default 0.5 is
// a documented heuristic and the constant is configurable.
AccuracyReport student_bound(const MomentEstimates& m, int n,
                             double c_star = 0.5);

// Poisson-count candidate bound: the closed-form TV bound at (n, p_hat);
// TV dominates the sup-distance, so it is a valid r_n.
AccuracyReport poisson_y_bound(int n, double p_hat);

// Pointwise tail bound A (1+x)^2 e^{-x^2/2} mu3/(sigma^3 sqrt(n)), stated
// valid for x^3 <= sigma^3 sqrt(n)/mu3; outside that range it throws rather
// than asserting anything.  The constant A is configuration (default 1),
// and this bound never feeds the selection rule.
struct JswConfig {
  double A = 1.0;
};
double jsw_bound(const MomentEstimates& m, int n, double x,
                 const JswConfig& cfg = {});
// Relative-error variant A (1+x)^3 mu3/(sigma^3 sqrt(n)), same validity range.
double jsw_ratio_bound(const MomentEstimates& m, int n, double x,
                       const JswConfig& cfg = {});

// The selection rule: minimal r_n, ties broken by the fixed kind order
// Normal < StudentT < PoissonY.  Throws std::domain_error on empty input.
const AccuracyReport& select_candidate(const std::vector<AccuracyReport>& reports);

// Strictly-less applicability: the candidate is usable iff r_n < threshold.
bool applicability(const AccuracyReport& report, double threshold);

// Key-value configuration for the tunable constants.  Recognized keys:
// jsw_A, student_c_star, threshold; '#' starts a comment.
struct BoundsConfig {
  double jsw_A = 1.0;
  double student_c_star = 0.5;
  double threshold = 0.01;
};
BoundsConfig load_bounds_config(const std::string& path);

}  // namespace ttest
