#pragma once

#include <stdexcept>
#include <string>

namespace ttest {

// Thrown when a statistic is mathematically undefined for the given sample,
// e.g. the Student ratio of a constant sample (zero denominator).
class undefined_statistic_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative numerical routine fails to reach its target
// accuracy (quadrature subdivision budget exhausted, bracketing failure, ...).
// The message carries enough state to reproduce the failing call.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown on malformed input data; `line` is 1-based where applicable.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Thrown on invalid configuration (bad key/value file, inconsistent options).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ttest
