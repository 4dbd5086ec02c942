#include "ttest/bounds_registry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ttest/errors.hpp"
#include "ttest/poisson_limit.hpp"

namespace ttest {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_moments(const MomentEstimates& m, const char* who) {
  if (!(m.sigma_hat > 0.0)) {
    std::ostringstream os;
    os << who << ": degenerate sample, sigma_hat = " << m.sigma_hat;
    throw undefined_statistic_error(os.str());
  }
}

double cor2_value(const MomentEstimates& m, int n) {
  const double s = m.sigma_hat;
  return (6.4 * m.mu3_hat / (s * s * s) + 2.0 * m.mu1_hat / s) /
         std::sqrt(static_cast<double>(n));
}

std::string moments_digest(const MomentEstimates& m, int n) {
  std::ostringstream os;
  os << "n=" << n << ";sigma_hat=" << format_value(m.sigma_hat)
     << ";mu1_hat=" << format_value(m.mu1_hat)
     << ";mu3_hat=" << format_value(m.mu3_hat);
  return os.str();
}

int kind_order(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::normal: return 0;
    case CandidateKind::student_t: return 1;
    case CandidateKind::poisson_y: return 2;
  }
  return 3;
}

}  // namespace

std::string candidate_kind_name(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::normal: return "Normal";
    case CandidateKind::student_t: return "StudentT";
    case CandidateKind::poisson_y: return "PoissonY";
  }
  return "Unknown";
}

CandidateApprox CandidateApprox::normal_law() {
  return CandidateApprox{CandidateKind::normal, 0, 0, 0.0};
}

CandidateApprox CandidateApprox::student_t_law(int df) {
  if (df < 1) throw std::domain_error("CandidateApprox: df must be >= 1");
  return CandidateApprox{CandidateKind::student_t, df, 0, 0.0};
}

CandidateApprox CandidateApprox::poisson_y_law(int n, double p_hat) {
  if (n < 1 || !(p_hat > 0.0 && p_hat <= 0.5)) {
    throw std::domain_error(
        "CandidateApprox: need n >= 1 and p_hat in (0, 1/2]");
  }
  return CandidateApprox{CandidateKind::poisson_y, 0, n, p_hat};
}

AccuracyReport normal_bound_cor2(const MomentEstimates& m, int n) {
  if (n < 1) throw std::domain_error("normal_bound_cor2: n must be >= 1");
  check_moments(m, "normal_bound_cor2");
  return AccuracyReport{CandidateApprox::normal_law(), cor2_value(m, n),
                        moments_digest(m, n)};
}

AccuracyReport student_bound(const MomentEstimates& m, int n, double c_star) {
  if (n < 2) throw std::domain_error("student_bound: n must be >= 2");
  if (!(c_star >= 0.0)) {
    throw std::domain_error("student_bound: c_star must be >= 0");
  }
  check_moments(m, "student_bound");
  AccuracyReport report{CandidateApprox::student_t_law(n - 1),
                        cor2_value(m, n) + c_star / n,
                        moments_digest(m, n)};
  report.inputs_digest += ";c_star=" + format_value(c_star);
  return report;
}

AccuracyReport poisson_y_bound(int n, double p_hat) {
  const CandidateApprox cand = CandidateApprox::poisson_y_law(n, p_hat);
  std::ostringstream digest;
  digest << "n=" << n << ";p_hat=" << format_value(p_hat);
  return AccuracyReport{cand, tv_bound(n, p_hat), digest.str()};
}

namespace {

void check_jsw_range(const MomentEstimates& m, int n, double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("jsw_bound: x must be >= 0");
  }
  const double s3 = m.sigma_hat * m.sigma_hat * m.sigma_hat;
  const double limit = s3 * std::sqrt(static_cast<double>(n)) / m.mu3_hat;
  if (x * x * x > limit) {
    std::ostringstream os;
    os << "jsw_bound: x=" << x << " outside stated validity range x^3 <= "
       << limit;
    throw std::domain_error(os.str());
  }
}

}  // namespace

double jsw_bound(const MomentEstimates& m, int n, double x,
                 const JswConfig& cfg) {
  if (n < 1) throw std::domain_error("jsw_bound: n must be >= 1");
  if (!(cfg.A > 0.0)) throw std::domain_error("jsw_bound: A must be > 0");
  check_moments(m, "jsw_bound");
  check_jsw_range(m, n, x);
  const double s3 = m.sigma_hat * m.sigma_hat * m.sigma_hat;
  const double one_plus = 1.0 + x;
  return cfg.A * one_plus * one_plus * std::exp(-0.5 * x * x) * m.mu3_hat /
         (s3 * std::sqrt(static_cast<double>(n)));
}

double jsw_ratio_bound(const MomentEstimates& m, int n, double x,
                       const JswConfig& cfg) {
  if (n < 1) throw std::domain_error("jsw_ratio_bound: n must be >= 1");
  if (!(cfg.A > 0.0)) throw std::domain_error("jsw_ratio_bound: A must be > 0");
  check_moments(m, "jsw_ratio_bound");
  check_jsw_range(m, n, x);
  const double s3 = m.sigma_hat * m.sigma_hat * m.sigma_hat;
  const double one_plus = 1.0 + x;
  return cfg.A * one_plus * one_plus * one_plus * m.mu3_hat /
         (s3 * std::sqrt(static_cast<double>(n)));
}

const AccuracyReport& select_candidate(
    const std::vector<AccuracyReport>& reports) {
  if (reports.empty()) {
    throw std::domain_error("select_candidate: empty report list");
  }
  const AccuracyReport* best = &reports.front();
  for (const AccuracyReport& r : reports) {
    if (r.r_n < best->r_n ||
        (r.r_n == best->r_n &&
         kind_order(r.candidate.kind) < kind_order(best->candidate.kind))) {
      best = &r;
    }
  }
  return *best;
}

bool applicability(const AccuracyReport& report, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::domain_error("applicability: threshold must be > 0");
  }
  return report.r_n < threshold;
}

BoundsConfig load_bounds_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file: " + path);
  }
  BoundsConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // Trim and skip blanks.
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << line_no << ": expected key=value, got '" << body
         << "'";
      throw config_error(os.str());
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(body.substr(0, eq));
    const std::string value_text = trim(body.substr(eq + 1));
    double value = 0.0;
    try {
      std::size_t consumed = 0;
      value = std::stod(value_text, &consumed);
      if (consumed != value_text.size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      std::ostringstream os;
      os << "config line " << line_no << ": bad numeric value '" << value_text
         << "' for key '" << key << "'";
      throw config_error(os.str());
    }
    if (key == "jsw_A") {
      if (!(value > 0.0)) throw config_error("jsw_A must be > 0");
      cfg.jsw_A = value;
    } else if (key == "student_c_star") {
      if (!(value >= 0.0)) throw config_error("student_c_star must be >= 0");
      cfg.student_c_star = value;
    } else if (key == "threshold") {
      if (!(value > 0.0 && value < 1.0)) {
        throw config_error("threshold must be in (0, 1)");
      }
      cfg.threshold = value;
    } else {
      std::ostringstream os;
      os << "config line " << line_no << ": unknown key '" << key << "'";
      throw config_error(os.str());
    }
  }
  return cfg;
}

}  // namespace ttest
