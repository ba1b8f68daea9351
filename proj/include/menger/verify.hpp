#pragma once

// Desk-scale verification suites. Reports are deterministic functions of the
// seed: no timings, no thread counts, doubles in round-trip form.

#include <cstdint>
#include <string>
#include <vector>

#include "menger/report_json.hpp"

namespace menger {

struct VerifyConfig {
  std::uint64_t seed = 7;
  bool plant_violation = false;  // corrupt one input per suite
};

struct CheckRecord {
  std::string suite;
  std::string name;
  std::int64_t cases = 0;
  std::int64_t violations = 0;
  double worst = 0.0;      // largest observed value of the checked statistic
  double threshold = 0.0;  // pass iff violations == 0; worst <= threshold for bounded statistics
  std::string detail;      // first violation
  bool pass() const { return violations == 0; }
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  bool pass() const;
  /// "suite.name" of every failing check.
  std::vector<std::string> failures() const;
};

/// geometry, sequences, multiscale, inequalities.
const std::vector<std::string>& verify_suites();

/// suite is one of verify_suites() or "all". Throws InputError otherwise.
VerifyReport run_verify(const std::string& suite, const VerifyConfig& cfg);

Json verify_report_json(const VerifyReport& r);

}  // namespace menger
