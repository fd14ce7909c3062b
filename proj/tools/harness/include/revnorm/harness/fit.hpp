#pragma once

#include <span>
#include <string>

namespace revnorm::harness {

struct LogLogFit {
  bool valid = false;
  double slope = 0.0;
  double intercept = 0.0;
  /// Standard error of the slope from the residual variance.
  double stderr_slope = 0.0;
  int points = 0;
  /// Why the fit is not valid ("not-a-fit: ...").
  std::string reason;
};

/// Least squares of log y against log x. With drop_extremes the points with
/// the smallest and largest x are left out. Zero or non-finite y values make
/// the result not-a-fit.
[[nodiscard]] LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, bool drop_extremes = true);

}  // namespace revnorm::harness
