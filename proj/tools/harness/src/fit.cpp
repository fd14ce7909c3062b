#include "revnorm/harness/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace revnorm::harness {

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, bool drop_extremes) {
  LogLogFit fit;
  if (x.size() != y.size()) {
    fit.reason = "not-a-fit: x and y differ in length";
    return fit;
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  if (drop_extremes && order.size() >= 2) {
    order.erase(order.begin());
    order.pop_back();
  }
  std::vector<double> lx, ly;
  for (auto i : order) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0) || !std::isfinite(y[i])) {
      fit.reason = "not-a-fit: zero or non-finite value";
      return fit;
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  const auto n = static_cast<double>(lx.size());
  fit.points = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    fit.reason = "not-a-fit: fewer than two points";
    return fit;
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) {
    fit.reason = "not-a-fit: all x equal";
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (lx.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ssr += e * e;
    }
    fit.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
  }
  fit.valid = true;
  return fit;
}

}  // namespace revnorm::harness
