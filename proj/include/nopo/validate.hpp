#pragma once

#include <string>
#include <vector>

namespace nopo {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured statistic
  double threshold = 0.0;  ///< bound it is held against
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  bool quick = false;
  bool passed = false;
  std::vector<CheckResult> checks;
};

/// Runs one of the named property suites (opo, analytics, estimation,
/// reduction, boltzmann) at pinned seeds. Quick mode shrinks sample sizes
/// and widens the statistical thresholds accordingly; it is a smoke test,
/// not the certification run.
SuiteReport run_validation_suite(const std::string& name, bool quick = false,
                                 int n_threads = 0);

std::vector<std::string> validation_suite_names();

/// Machine-readable report (pretty-printed JSON, sorted keys).
std::string suite_report_json(const SuiteReport& report);

}  // namespace nopo
