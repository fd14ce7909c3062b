#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "revnorm/error.hpp"
#include "revnorm/mode_index.hpp"
#include "revnorm/spectral.hpp"

namespace revnorm {

struct ResonantEntry {
  MultiIndex key;
  double omega = 0.0;
  /// |a_J| of the offending coefficient; 0 when produced by a pure scan.
  double coefficient = 0.0;
};

/// Multisets J != conj(J) whose small divisor falls below a threshold.
struct ResonanceReport {
  double threshold = 0.0;
  std::vector<ResonantEntry> entries;
  /// Total number found; entries may be capped.
  std::uint64_t total = 0;
  /// Smallest |Omega| among the multisets that stayed above the threshold.
  double smallest_surviving_divisor = std::numeric_limits<double>::infinity();
  /// Order of the recursion at which the report was produced (0 for scans).
  int order = 0;

  [[nodiscard]] bool empty() const { return total == 0; }
  [[nodiscard]] std::string summary() const;
};

/// Raised when a homological equation meets a near-resonant multiset that
/// carries a non-negligible coefficient.
class ResonanceError : public Error {
 public:
  explicit ResonanceError(ResonanceReport report);
  [[nodiscard]] const ResonanceReport& report() const { return report_; }

 private:
  ResonanceReport report_;
};

/// Smallest |Omega| over non-self-conjugate multisets with a given mu.
struct MuBucket {
  std::int64_t mu_sq = 1;
  double mu = 1.0;
  double min_abs_omega = std::numeric_limits<double>::infinity();
  std::uint64_t count = 0;
};

struct ScanOptions {
  std::size_t max_listed = 1000;
  int threads = 1;
};

struct NonResonanceScan {
  ResonanceReport report;
  std::vector<MuBucket> buckets;  ///< sorted by mu
  /// Lower envelope |Omega| >= gamma / mu^alpha over the scanned multisets.
  double gamma = 0.0;
  double alpha = 0.0;
  double min_abs_omega = std::numeric_limits<double>::infinity();
  std::uint64_t scanned = 0;
  int max_size = 0;
};

/// Enumerates every multiset of size 1..r of omega's index set, lists those
/// with J != conj(J) and |Omega(J)| <= threshold and fits (gamma, alpha).
[[nodiscard]] NonResonanceScan scan_nonresonance(const FrequencyMap& omega, int r, double threshold,
                                                 const ScanOptions& options = {});

/// alpha is the smallest value in {0, 0.5, ..., 10} for which
/// min|Omega| * mu^alpha is non-decreasing across buckets; gamma is the
/// minimum of that product. Buckets with an exact zero give gamma = 0.
void fit_divisor_envelope(std::span<const MuBucket> buckets, double& gamma, double& alpha);

}  // namespace revnorm
