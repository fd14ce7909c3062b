#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace revnorm::harness {

struct SelftestOptions {
  /// Corrupts one coefficient of the NLS fixture so that the reversibility
  /// invariant (and everything downstream of it) must fail.
  bool inject_fault = false;
};

struct CheckResult {
  std::string name;
  std::string invariant;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<CheckResult> checks;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::size_t failures() const;
};

/// Oracle comparisons plus parity, residual and reality suites.
[[nodiscard]] SelftestReport run_selftest(const SelftestOptions& options = {}, std::ostream* log = nullptr);

}  // namespace revnorm::harness
