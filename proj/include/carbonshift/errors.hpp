#pragma once

#include <stdexcept>
#include <string>

namespace carbonshift {

// Error taxonomy mirrors the process exit codes: input problems (bad files,
// bad arguments) are distinct from infeasible requests (no valid schedule,
// empty result) and from internal invariant violations.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

// A route whose carbon-data coverage falls below the configured cutoff.
// Callers typically skip the route rather than abort the whole run.
class below_cutoff_error : public infeasible_error {
 public:
  below_cutoff_error(const std::string& msg, double ratio)
      : infeasible_error(msg), coverage_ratio(ratio) {}
  double coverage_ratio;
};

}  // namespace carbonshift
