#pragma once

// A finitely supported law on the extended real line, stored as atoms in
// strictly decreasing value order, plus an explicit "unassigned" mass for
// truncated tails or defects.  Nothing is ever silently renormalized.

#include <vector>

#include "ttest/errors.hpp"

namespace ttest {

struct DiscreteLaw {
  struct Atom {
    double value;  // may be +-infinity, never NaN
    double prob;   // >= 0
  };

  // Atoms in strictly decreasing value order.
  std::vector<Atom> atoms;

  // Probability mass deliberately not attached to any atom: a truncated
  // tail, or the defect of a sub-probability law.
  double unassigned_mass = 0.0;

  double total_mass() const;

  // Checks the representation: ordering, non-negative masses, no NaN values,
  // and |total_mass - 1| <= tol.  Throws std::domain_error on violation.
  void validate(double tol = 1e-12) const;

  // P(V >= x) / P(V > x) / P(V < x) over the recorded atoms only;
  // unassigned mass is not attributed to any region.  Atom values within
  // 1e-12 * max(1, |x|) of x count as equal to x, so thresholds computed by
  // a slightly different route still pick up the intended atom.  Infinite
  // thresholds and atom values compare exactly.
  double prob_at_least(double x) const;
  double prob_greater(double x) const;
  double prob_less(double x) const;

  // Mean over the finite atoms (atoms at +-infinity are excluded).
  double mean_finite() const;
};

// Total variation distance between two laws on a common (merged) support:
//   TV = 1/2 * sum over merged values |p_a - p_b|,
// where each law's unassigned mass is counted as pure discrepancy (it sits
// on an unknown region of the line).  Values closer than value_match_tol
// (relative to max(1, |v|)) are treated as the same support point.
double tv_distance(const DiscreteLaw& a, const DiscreteLaw& b,
                   double value_match_tol = 1e-12);

}  // namespace ttest
