#include "ttest/gen_ttest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ttest/poisson_limit.hpp"
#include "ttest/special_functions.hpp"

namespace ttest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Direction { two_sided, reject_high, reject_low };

Direction direction_of(const Hypotheses& h) {
  switch (h.alternative) {
    case Alternative::two_sided:
      return Direction::two_sided;
    case Alternative::simple:
      if (h.b == h.a) {
        throw std::domain_error(
            "Hypotheses: simple alternative requires b != a");
      }
      return h.b > h.a ? Direction::reject_high : Direction::reject_low;
    case Alternative::one_sided_greater:
      return Direction::reject_high;
    case Alternative::one_sided_less:
      return Direction::reject_low;
  }
  throw std::domain_error("Hypotheses: unknown alternative");
}

Sidedness sidedness_of(Direction d) {
  return d == Direction::two_sided ? Sidedness::two_sided
                                   : Sidedness::one_sided;
}

void check_level(double level, const char* who) {
  if (!(level > 0.0 && level < 1.0)) {
    std::ostringstream os;
    os << who << ": level must be in (0, 1), got " << level;
    throw std::domain_error(os.str());
  }
}

double boundary_slack(double bound) {
  return 1e-12 * std::max(1.0, std::fabs(bound));
}

// Closed-interval acceptance with the documented relative slack.
bool inside_region(double value, double lo, double hi) {
  const bool above = std::isinf(lo) || value >= lo - boundary_slack(lo);
  const bool below = std::isinf(hi) || value <= hi + boundary_slack(hi);
  return above && below;
}

Outcome decide(double value, double lo, double hi) {
  return inside_region(value, lo, hi) ? Outcome::accept_H0
                                      : Outcome::reject_H0;
}

std::string region_note(Direction d) {
  switch (d) {
    case Direction::two_sided: return "two-sided";
    case Direction::reject_high: return "one-sided (reject large values)";
    case Direction::reject_low: return "one-sided (reject small values)";
  }
  return "";
}

}  // namespace

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::accept_H0: return "accept_H0";
    case Outcome::reject_H0: return "reject_H0";
    case Outcome::not_applicable: return "not_applicable";
  }
  return "unknown";
}

double z_critical_value(double level, Sidedness sidedness) {
  check_level(level, "z_critical_value");
  const double tail =
      sidedness == Sidedness::two_sided ? 0.5 * level : level;
  return std_normal_sf_inv(tail);
}

TestDecision z_test(const Sample& s, const Hypotheses& h,
                    const TestConfig& cfg) {
  check_level(cfg.level, "z_test");
  if (!cfg.sigma_known.has_value()) {
    throw config_error("z_test: sigma_known must be configured");
  }
  const Direction dir = direction_of(h);
  const double c = z_critical_value(cfg.level, sidedness_of(dir));
  TestDecision d;
  d.statistic_name = "zeta";
  d.statistic_value = zeta_statistic(s, h.a, *cfg.sigma_known);
  switch (dir) {
    case Direction::two_sided:
      d.accept_lower = -c;
      d.accept_upper = c;
      break;
    case Direction::reject_high:
      d.accept_lower = -kInf;
      d.accept_upper = c;
      break;
    case Direction::reject_low:
      d.accept_lower = -c;
      d.accept_upper = kInf;
      break;
  }
  d.outcome = decide(d.statistic_value, d.accept_lower, d.accept_upper);
  std::ostringstream notes;
  notes << "z-test with known sigma, " << region_note(dir)
        << ", normal critical value " << c;
  d.notes = notes.str();
  return d;
}

TestDecision t_test_classical(const Sample& s, const Hypotheses& h,
                              double level, DfConvention df_convention,
                              bool use_sigma_tilde) {
  check_level(level, "t_test_classical");
  if (s.n() < 2) {
    throw std::domain_error("t_test_classical: sample size must be >= 2");
  }
  const Direction dir = direction_of(h);
  const MomentEstimates m = sample_moments(s);
  const double sigma = use_sigma_tilde ? m.sigma_tilde : m.sigma_hat;
  const double shift = m.mean - h.a;
  double t;
  if (sigma == 0.0) {
    if (shift == 0.0) {
      throw undefined_statistic_error(
          "t_test_classical: constant sample equal to the null mean");
    }
    t = shift > 0.0 ? kInf : -kInf;
  } else {
    t = shift * std::sqrt(static_cast<double>(s.n())) / sigma;
  }
  const int df =
      df_convention == DfConvention::n_minus_1 ? s.n() - 1 : s.n();
  const double tail =
      dir == Direction::two_sided ? 0.5 * level : level;
  const double c = student_t_sf_inv(StudentDf{df}, tail);

  TestDecision d;
  d.statistic_name = "t";
  d.statistic_value = t;
  switch (dir) {
    case Direction::two_sided:
      d.accept_lower = -c;
      d.accept_upper = c;
      break;
    case Direction::reject_high:
      d.accept_lower = -kInf;
      d.accept_upper = c;
      break;
    case Direction::reject_low:
      d.accept_lower = -c;
      d.accept_upper = kInf;
      break;
  }
  d.outcome = decide(t, d.accept_lower, d.accept_upper);
  std::ostringstream notes;
  notes << "classical T-test, " << region_note(dir) << ", df=" << df
        << ", sigma convention=" << (use_sigma_tilde ? "tilde" : "hat")
        << ", Student critical value " << c;
  d.notes = notes.str();
  return d;
}

double type2_error_normal(double delta, int n, double level,
                          Sidedness sidedness) {
  if (n < 1) throw std::domain_error("type2_error_normal: n must be >= 1");
  if (!std::isfinite(delta)) {
    throw std::domain_error("type2_error_normal: delta must be finite");
  }
  check_level(level, "type2_error_normal");
  const double c = z_critical_value(level, sidedness);
  const double arg = delta * std::sqrt(static_cast<double>(n));
  if (sidedness == Sidedness::two_sided) {
    return std_normal_sf(arg - c) - std_normal_sf(arg + c);
  }
  return std_normal_sf(arg - c);
}

TwoPointShapeEstimate estimate_two_point_shape(const Sample& s,
                                               const MomentEstimates& m) {
  TwoPointShapeEstimate est;
  if (!(m.sigma_hat > 0.0)) {
    est.reason = "degenerate sample (sigma_hat = 0)";
    return est;
  }
  const double threshold = m.mean - m.sigma_hat;
  double low_min = kInf, low_max = -kInf;
  double high_min = kInf, high_max = -kInf;
  int low_count = 0;
  for (double v : s.values) {
    if (v <= threshold) {
      ++low_count;
      low_min = std::min(low_min, v);
      low_max = std::max(low_max, v);
    } else {
      high_min = std::min(high_min, v);
      high_max = std::max(high_max, v);
    }
  }
  if (low_count == 0) {
    est.reason = "no observations at or below mean - sigma_hat";
    return est;
  }
  const double frac = static_cast<double>(low_count) / s.n();
  if (frac > 0.5) {
    est.reason = "values below mean - sigma_hat are not a minority";
    return est;
  }
  const double cluster_tol = 1e-6 * m.sigma_hat;
  if (low_max - low_min > cluster_tol) {
    est.reason = "lower values do not form a single tight atom";
    return est;
  }
  if (low_count < s.n() && high_max - high_min > cluster_tol) {
    est.reason = "upper values do not form a single tight atom";
    return est;
  }
  est.detected = true;
  est.p_hat = frac;
  return est;
}

TestDecision generalized_t_test(const Sample& s, const Hypotheses& h,
                                const TestConfig& cfg) {
  check_level(cfg.level, "generalized_t_test");
  if (!(cfg.applicability_threshold > 0.0 &&
        cfg.applicability_threshold < 1.0)) {
    throw std::domain_error(
        "generalized_t_test: applicability_threshold must be in (0, 1)");
  }
  if (cfg.candidates.empty()) {
    throw std::domain_error("generalized_t_test: empty candidate list");
  }
  if (s.n() < 2) {
    throw std::domain_error("generalized_t_test: sample size must be >= 2");
  }
  const Direction dir = direction_of(h);
  const int n = s.n();
  const double tstar = self_normalized_sum(s, h.a);
  const MomentEstimates m = sample_moments(s);

  std::ostringstream notes;
  std::vector<AccuracyReport> reports;
  for (CandidateKind kind : cfg.candidates) {
    switch (kind) {
      case CandidateKind::normal:
        reports.push_back(normal_bound_cor2(m, n));
        break;
      case CandidateKind::student_t:
        reports.push_back(student_bound(m, n, cfg.student_c_star));
        break;
      case CandidateKind::poisson_y: {
        const TwoPointShapeEstimate shape = estimate_two_point_shape(s, m);
        if (shape.detected) {
          reports.push_back(poisson_y_bound(n, shape.p_hat));
        } else {
          notes << "PoissonY candidate skipped: " << shape.reason << ". ";
        }
        break;
      }
    }
  }

  TestDecision d;
  d.statistic_name = "t_star";
  d.statistic_value = tstar;

  if (reports.empty()) {
    d.outcome = Outcome::not_applicable;
    d.accept_lower = std::numeric_limits<double>::quiet_NaN();
    d.accept_upper = std::numeric_limits<double>::quiet_NaN();
    notes << "No candidate produced an accuracy bound; the candidate list "
             "is too short for this sample.";
    d.notes = notes.str();
    return d;
  }

  const AccuracyReport best = select_candidate(reports);
  if (!applicability(best, cfg.applicability_threshold)) {
    d.outcome = Outcome::not_applicable;
    d.accuracy_report = best;
    d.accept_lower = std::numeric_limits<double>::quiet_NaN();
    d.accept_upper = std::numeric_limits<double>::quiet_NaN();
    notes << "Best accuracy bound r_n=" << best.r_n << " ("
          << candidate_kind_name(best.candidate.kind)
          << ") is not below threshold " << cfg.applicability_threshold
          << ": the approximation is not trustworthy at this sample size, "
             "or the candidate list is too short.";
    d.notes = notes.str();
    return d;
  }

  double eps_eff = cfg.level;
  if (cfg.sub_asymptotic) {
    eps_eff = cfg.level - 2.0 * best.r_n;
    if (!(eps_eff > 0.0)) {
      std::ostringstream os;
      os << "generalized_t_test: sub-asymptotic widening exhausts the level "
            "(level="
         << cfg.level << ", r_n=" << best.r_n << ")";
      throw config_error(os.str());
    }
    notes << "Sub-asymptotic region: effective level " << eps_eff << ". ";
  }

  const Sidedness sided = sidedness_of(dir);
  const double tail = sided == Sidedness::two_sided ? 0.5 * eps_eff : eps_eff;
  double lo = -kInf, hi = kInf;
  switch (best.candidate.kind) {
    case CandidateKind::normal: {
      const double z = std_normal_sf_inv(tail);
      if (dir != Direction::reject_high) lo = -z;
      if (dir != Direction::reject_low) hi = z;
      notes << "Normal critical value " << z << " applied to t*. ";
      break;
    }
    case CandidateKind::student_t: {
      const double c = student_t_sf_inv(StudentDf{best.candidate.df}, tail);
      const double y = tstar_from_t(c, n);
      if (dir != Direction::reject_high) lo = -y;
      if (dir != Direction::reject_low) hi = y;
      notes << "Student critical value " << c << " (df=" << best.candidate.df
            << ") mapped to t* threshold " << y << ". ";
      break;
    }
    case CandidateKind::poisson_y: {
      const PoissonYLaw law(best.candidate.n, best.candidate.p_hat);
      if (dir == Direction::two_sided) {
        const YCriticalValues cv = y_critical_values(law, eps_eff);
        lo = cv.c_minus;
        hi = cv.c_plus;
        if (cv.degenerate) {
          notes << "Discrete critical values are degenerate (c_minus >= "
                   "c_plus) at this level. ";
        }
      } else if (dir == Direction::reject_high) {
        hi = y_upper_critical(law, eps_eff);
      } else {
        lo = y_lower_critical(law, eps_eff);
      }
      notes << "Conservative discrete critical values from the Poisson-count "
               "law (p_hat=" << best.candidate.p_hat << "). ";
      break;
    }
  }

  d.outcome = decide(tstar, lo, hi);
  d.accept_lower = lo;
  d.accept_upper = hi;
  d.chosen_candidate = best.candidate;
  d.accuracy_report = best;
  notes << "Selected " << candidate_kind_name(best.candidate.kind)
        << " with r_n=" << best.r_n << ", " << region_note(dir)
        << " at level " << cfg.level << ".";
  if (cfg.sigma_known.has_value()) {
    notes << " (sigma_known recorded but unused: the generalized test is "
             "self-normalizing.)";
  }
  d.notes = notes.str();
  return d;
}

std::string decision_to_json(const TestDecision& d, int indent) {
  nlohmann::json j;
  j["outcome"] = outcome_name(d.outcome);
  j["statistic"] = d.statistic_value;
  j["statistic_name"] = d.statistic_name;
  if (d.outcome == Outcome::not_applicable) {
    j["critical_region"] = nullptr;
  } else {
    nlohmann::json region;
    const bool lo_finite = std::isfinite(d.accept_lower);
    const bool hi_finite = std::isfinite(d.accept_upper);
    region["shape"] = lo_finite && hi_finite
                          ? "two_sided"
                          : (hi_finite ? "accept_below" : "accept_above");
    region["accept_lower"] =
        lo_finite ? nlohmann::json(d.accept_lower) : nlohmann::json(nullptr);
    region["accept_upper"] =
        hi_finite ? nlohmann::json(d.accept_upper) : nlohmann::json(nullptr);
    j["critical_region"] = region;
  }
  if (d.chosen_candidate.has_value()) {
    nlohmann::json cand;
    cand["kind"] = candidate_kind_name(d.chosen_candidate->kind);
    if (d.chosen_candidate->kind == CandidateKind::student_t) {
      cand["df"] = d.chosen_candidate->df;
    } else if (d.chosen_candidate->kind == CandidateKind::poisson_y) {
      cand["n"] = d.chosen_candidate->n;
      cand["p_hat"] = d.chosen_candidate->p_hat;
    }
    j["candidate"] = cand;
  } else {
    j["candidate"] = nullptr;
  }
  if (d.accuracy_report.has_value()) {
    j["r_n"] = d.accuracy_report->r_n;
  } else {
    j["r_n"] = nullptr;
  }
  j["notes"] = d.notes;
  return j.dump(indent);
}

}  // namespace ttest
