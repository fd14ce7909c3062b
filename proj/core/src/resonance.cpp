#include "revnorm/resonance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

namespace revnorm {

std::string ResonanceReport::summary() const {
  std::ostringstream os;
  os << total << " resonant multiset(s) with |Omega| <= " << threshold;
  if (order > 0) os << " at order " << order;
  for (std::size_t i = 0; i < std::min<std::size_t>(entries.size(), 8); ++i) {
    os << "\n  " << entries[i].key.to_string() << "  Omega=" << entries[i].omega;
    if (entries[i].coefficient != 0.0) os << "  |a|=" << entries[i].coefficient;
  }
  if (std::isfinite(smallest_surviving_divisor)) os << "\n  smallest surviving divisor " << smallest_surviving_divisor;
  return os.str();
}

ResonanceError::ResonanceError(ResonanceReport report)
    : Error("resonance: " + report.summary()), report_(std::move(report)) {}

namespace {

struct Partial {
  std::vector<MuBucket> buckets;  // indexed by mu_sq
  std::vector<ResonantEntry> entries;
  std::uint64_t total = 0;
  std::uint64_t scanned = 0;
  double surviving = std::numeric_limits<double>::infinity();
};

class Scanner {
 public:
  Scanner(const FrequencyMap& omega, int r, double threshold, std::size_t max_listed)
      : omega_(omega), r_(r), threshold_(threshold), max_listed_(max_listed) {
    const auto& set = *omega.index_set();
    order_.resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) order_[i] = i;
    // Descending weight, so the third entry of a non-decreasing position
    // tuple carries the third largest weight.
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return set.mode(a).weight_sq() > set.mode(b).weight_sq();
    });
    for (auto p : order_) {
      om_.push_back(omega[p]);
      w2_.push_back(set.mode(p).weight_sq());
      modes_.push_back(set.mode(p));
    }
    max_w2_ = w2_.empty() ? 1 : w2_.front();
  }

  Partial run_first(std::size_t first) const {
    Partial part;
    part.buckets.resize(static_cast<std::size_t>(max_w2_) + 1);
    std::array<std::size_t, kMaxDegree> stack{};
    stack[0] = first;
    visit(part, stack, 1, om_[first]);
    return part;
  }

  [[nodiscard]] std::size_t size() const { return order_.size(); }

 private:
  void visit(Partial& part, std::array<std::size_t, kMaxDegree>& stack, int depth, double partial) const {
    evaluate(part, stack, depth, partial);
    if (depth == r_) return;
    for (std::size_t next = stack[static_cast<std::size_t>(depth) - 1]; next < order_.size(); ++next) {
      stack[static_cast<std::size_t>(depth)] = next;
      visit(part, stack, depth + 1, partial + om_[next]);
    }
  }

  void evaluate(Partial& part, const std::array<std::size_t, kMaxDegree>& stack, int depth, double fast) const {
    ++part.scanned;
    const std::int64_t mu_sq = depth >= 3 ? w2_[stack[2]] : 1;
    auto& bucket = part.buckets[static_cast<std::size_t>(mu_sq)];
    if (bucket.count == 0) {
      bucket.mu_sq = mu_sq;
      bucket.mu = std::sqrt(static_cast<double>(mu_sq));
    }
    ++bucket.count;
    const double af = std::abs(fast);
    const double cutoff = std::max({threshold_, std::isfinite(bucket.min_abs_omega) ? bucket.min_abs_omega : 0.0,
                                    std::isfinite(part.surviving) ? part.surviving : 0.0});
    if (std::isfinite(bucket.min_abs_omega) && std::isfinite(part.surviving) && af > cutoff * (1.0 + 1e-9) + 1e-9) {
      return;
    }
    std::array<ModeIndex, kMaxDegree> tuple{};
    for (int i = 0; i < depth; ++i) tuple[static_cast<std::size_t>(i)] = modes_[stack[static_cast<std::size_t>(i)]];
    const auto key = MultiIndex::from_tuple(std::span<const ModeIndex>(tuple.data(), static_cast<std::size_t>(depth)));
    if (key.self_conjugate()) {
      --bucket.count;
      return;
    }
    const double exact = std::abs(omega_sum(key, omega_));
    bucket.min_abs_omega = std::min(bucket.min_abs_omega, exact);
    if (exact <= threshold_) {
      const auto ckey = key.conj();
      if (key < ckey) {
        ++part.total;
        if (part.entries.size() < max_listed_) part.entries.push_back({key, omega_sum(key, omega_), 0.0});
      }
    } else {
      part.surviving = std::min(part.surviving, exact);
    }
  }

  const FrequencyMap& omega_;
  int r_;
  double threshold_;
  std::size_t max_listed_;
  std::vector<std::size_t> order_;
  std::vector<double> om_;
  std::vector<std::int64_t> w2_;
  std::vector<ModeIndex> modes_;
  std::int64_t max_w2_ = 1;
};

}  // namespace

void fit_divisor_envelope(std::span<const MuBucket> buckets, double& gamma, double& alpha) {
  gamma = 0.0;
  alpha = 0.0;
  std::vector<const MuBucket*> used;
  for (const auto& b : buckets) {
    if (b.count > 0 && std::isfinite(b.min_abs_omega)) used.push_back(&b);
  }
  if (used.empty()) return;
  for (const auto* b : used) {
    if (b->min_abs_omega == 0.0) return;
  }
  for (int step = 0; step <= 20; ++step) {
    alpha = 0.5 * step;
    bool monotone = true;
    double prev = -1.0;
    for (const auto* b : used) {
      const double v = b->min_abs_omega * std::pow(b->mu, alpha);
      if (v < prev) {
        monotone = false;
        break;
      }
      prev = v;
    }
    if (monotone) break;
  }
  gamma = std::numeric_limits<double>::infinity();
  for (const auto* b : used) gamma = std::min(gamma, b->min_abs_omega * std::pow(b->mu, alpha));
}

NonResonanceScan scan_nonresonance(const FrequencyMap& omega, int r, double threshold, const ScanOptions& options) {
  if (r < 1 || r > kMaxDegree) throw DomainError("scan_nonresonance: r out of range");
  Scanner scanner(omega, r, threshold, options.max_listed);
  const std::size_t n = scanner.size();
  std::vector<Partial> parts(n);
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) parts[i] = scanner.run_first(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) parts[i] = scanner.run_first(i);
      });
    }
  }

  NonResonanceScan out;
  out.max_size = r;
  out.report.threshold = threshold;
  std::map<std::int64_t, MuBucket> buckets;
  for (auto& p : parts) {
    out.scanned += p.scanned;
    out.report.total += p.total;
    for (auto& e : p.entries) {
      if (out.report.entries.size() < options.max_listed) out.report.entries.push_back(e);
    }
    out.report.smallest_surviving_divisor = std::min(out.report.smallest_surviving_divisor, p.surviving);
    for (const auto& b : p.buckets) {
      if (b.count == 0 && !std::isfinite(b.min_abs_omega)) continue;
      auto& dst = buckets[b.mu_sq];
      if (dst.count == 0 && !std::isfinite(dst.min_abs_omega)) {
        dst.mu_sq = b.mu_sq;
        dst.mu = b.mu;
      }
      dst.count += b.count;
      dst.min_abs_omega = std::min(dst.min_abs_omega, b.min_abs_omega);
    }
  }
  for (const auto& [k, b] : buckets) {
    out.buckets.push_back(b);
    out.min_abs_omega = std::min(out.min_abs_omega, b.min_abs_omega);
  }
  fit_divisor_envelope(out.buckets, out.gamma, out.alpha);
  return out;
}

}  // namespace revnorm
