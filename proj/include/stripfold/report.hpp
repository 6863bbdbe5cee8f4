#pragma once

#include <string>
#include <vector>

namespace stripfold {

// Grid verification result: one entry per named check.  Exact-arithmetic
// checks report residual 0; floating checks report the worst deviation seen.
struct CheckResult {
  std::string name;
  bool pass = true;
  long samples = 0;
  double worst_residual = 0.0;
  std::vector<std::string> failures;  // capped; failure_count keeps the total
  long failure_count = 0;
};

inline constexpr int kMaxRecordedFailures = 16;

void record_failure(CheckResult& c, const std::string& msg);

struct GridReport {
  std::vector<CheckResult> checks;

  bool pass() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_json() const;
  std::string summary() const;  // one line per check
};

}  // namespace stripfold
