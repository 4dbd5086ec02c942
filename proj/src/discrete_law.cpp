#include "ttest/discrete_law.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>

namespace ttest {

namespace {

// Signed comparison of an atom value against a threshold with the relative
// tolerance documented in the header: -1 below, 0 equal, +1 above.
// Infinite operands compare exactly (a relative tolerance around infinity
// would swallow the whole line).
int compare_with_tol(double value, double x) {
  if (std::isinf(value) || std::isinf(x)) {
    if (value == x) return 0;
    return value > x ? 1 : -1;
  }
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  if (value > x + tol) return 1;
  if (value < x - tol) return -1;
  return 0;
}

bool same_support_point(double a, double b, double tol) {
  if (a == b) return true;  // covers equal infinities
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::fabs(a - b) <=
         tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

double DiscreteLaw::total_mass() const {
  double sum = unassigned_mass;
  for (const Atom& a : atoms) sum += a.prob;
  return sum;
}

void DiscreteLaw::validate(double tol) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (std::isnan(atoms[i].value)) {
      throw std::domain_error("DiscreteLaw: NaN atom value");
    }
    if (!(atoms[i].prob >= 0.0)) {
      throw std::domain_error("DiscreteLaw: negative atom probability");
    }
    if (i > 0 && !(atoms[i - 1].value > atoms[i].value)) {
      std::ostringstream os;
      os << "DiscreteLaw: atom values not strictly decreasing at index " << i;
      throw std::domain_error(os.str());
    }
  }
  if (!(unassigned_mass >= 0.0)) {
    throw std::domain_error("DiscreteLaw: negative unassigned mass");
  }
  const double total = total_mass();
  if (std::fabs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "DiscreteLaw: total mass " << total << " differs from 1 by more than "
       << tol;
    throw std::domain_error(os.str());
  }
}

double DiscreteLaw::prob_at_least(double x) const {
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (compare_with_tol(a.value, x) >= 0) sum += a.prob;
  }
  return sum;
}

double DiscreteLaw::prob_greater(double x) const {
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (compare_with_tol(a.value, x) > 0) sum += a.prob;
  }
  return sum;
}

double DiscreteLaw::prob_less(double x) const {
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (compare_with_tol(a.value, x) < 0) sum += a.prob;
  }
  return sum;
}

double DiscreteLaw::mean_finite() const {
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (std::isfinite(a.value)) sum += a.value * a.prob;
  }
  return sum;
}

double tv_distance(const DiscreteLaw& a, const DiscreteLaw& b,
                   double value_match_tol) {
  // Both atom lists are strictly decreasing, so a two-pointer merge visits
  // the union of supports once.
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < a.atoms.size() && j < b.atoms.size()) {
    const DiscreteLaw::Atom& pa = a.atoms[i];
    const DiscreteLaw::Atom& pb = b.atoms[j];
    if (same_support_point(pa.value, pb.value, value_match_tol)) {
      sum += std::fabs(pa.prob - pb.prob);
      ++i;
      ++j;
    } else if (pa.value > pb.value) {
      sum += pa.prob;
      ++i;
    } else {
      sum += pb.prob;
      ++j;
    }
  }
  for (; i < a.atoms.size(); ++i) sum += a.atoms[i].prob;
  for (; j < b.atoms.size(); ++j) sum += b.atoms[j].prob;
  // Unassigned mass sits on unknown support: count it as pure discrepancy.
  sum += a.unassigned_mass + b.unassigned_mass;
  return 0.5 * sum;
}

}  // namespace ttest
