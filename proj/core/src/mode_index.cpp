#include "revnorm/mode_index.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revnorm/error.hpp"

namespace revnorm {

ModeIndex::ModeIndex(std::span<const int> a, int delta, int species) {
  if (a.empty() || a.size() > static_cast<std::size_t>(kMaxDim)) {
    throw DomainError("ModeIndex: lattice dimension must be in 1.." + std::to_string(kMaxDim));
  }
  if (delta != 1 && delta != -1) throw DomainError("ModeIndex: delta must be +1 or -1");
  if (species < 0 || species > kMaxSpecies) throw DomainError("ModeIndex: species out of range");
  std::uint32_t code = static_cast<std::uint32_t>(species) << 27;
  code |= static_cast<std::uint32_t>(a.size() - 1) << 25;
  for (int i = 0; i < kMaxDim; ++i) {
    const int v = i < static_cast<int>(a.size()) ? a[static_cast<std::size_t>(i)] : 0;
    if (v < -kMaxLattice || v > kMaxLattice) throw DomainError("ModeIndex: lattice coordinate out of range");
    code |= static_cast<std::uint32_t>(v + 128) << (17 - 8 * i);
  }
  if (delta < 0) code |= 1u;
  code_ = code;
}

Lattice ModeIndex::lattice() const {
  Lattice out{};
  for (int i = 0; i < dim(); ++i) out[static_cast<std::size_t>(i)] = a(i);
  return out;
}

std::string ModeIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim(); ++i) {
    if (i) os << ',';
    os << a(i);
  }
  os << ';' << (delta() > 0 ? '+' : '-');
  if (species() != 0) os << ";s" << species();
  os << ')';
  return os.str();
}

double weight(ModeIndex j) { return std::sqrt(static_cast<double>(j.weight_sq())); }

MultiIndex MultiIndex::from_tuple(std::span<const ModeIndex> tuple) {
  if (tuple.size() > static_cast<std::size_t>(kMaxDegree)) {
    throw DomainError("MultiIndex: degree exceeds " + std::to_string(kMaxDegree));
  }
  MultiIndex m;
  m.size_ = static_cast<std::uint8_t>(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) m.codes_[i] = tuple[i].code();
  std::sort(m.codes_.begin(), m.codes_.begin() + m.size_);
  return m;
}

MultiIndex canonical_multi_index(std::span<const ModeIndex> tuple) { return MultiIndex::from_tuple(tuple); }

std::vector<std::pair<ModeIndex, int>> MultiIndex::entries() const {
  std::vector<std::pair<ModeIndex, int>> out;
  for (int i = 0; i < size_; ++i) {
    if (!out.empty() && out.back().first.code() == codes_[static_cast<std::size_t>(i)]) {
      ++out.back().second;
    } else {
      out.emplace_back(ModeIndex::from_code(codes_[static_cast<std::size_t>(i)]), 1);
    }
  }
  return out;
}

int MultiIndex::multiplicity(ModeIndex j) const {
  const auto c = codes();
  return static_cast<int>(std::count(c.begin(), c.end(), j.code()));
}

MultiIndex MultiIndex::conj() const {
  MultiIndex m = *this;
  for (int i = 0; i < size_; ++i) m.codes_[static_cast<std::size_t>(i)] ^= 1u;
  std::sort(m.codes_.begin(), m.codes_.begin() + m.size_);
  return m;
}

bool MultiIndex::self_conjugate() const {
  // j and conj(j) are adjacent in the code order, so a multiset equals its
  // conjugate iff every (lattice, species) group has as many + as - entries.
  int i = 0;
  while (i < size_) {
    const std::uint32_t base = codes_[static_cast<std::size_t>(i)] & ~1u;
    int balance = 0;
    while (i < size_ && (codes_[static_cast<std::size_t>(i)] & ~1u) == base) {
      balance += (codes_[static_cast<std::size_t>(i)] & 1u) ? -1 : 1;
      ++i;
    }
    if (balance != 0) return false;
  }
  return true;
}

MultiIndex MultiIndex::without_position(int pos) const {
  MultiIndex m;
  m.size_ = static_cast<std::uint8_t>(size_ - 1);
  std::size_t w = 0;
  for (int i = 0; i < size_; ++i) {
    if (i != pos) m.codes_[w++] = codes_[static_cast<std::size_t>(i)];
  }
  return m;
}

MultiIndex MultiIndex::merged(const MultiIndex& other) const {
  if (size_ + other.size_ > kMaxDegree) throw DomainError("MultiIndex: merged degree exceeds limit");
  MultiIndex m;
  m.size_ = static_cast<std::uint8_t>(size_ + other.size_);
  std::merge(codes_.begin(), codes_.begin() + size_, other.codes_.begin(), other.codes_.begin() + other.size_,
             m.codes_.begin());
  return m;
}

double MultiIndex::orderings() const {
  double num = std::tgamma(static_cast<double>(size_) + 1.0);
  for (const auto& [j, m] : entries()) num /= std::tgamma(static_cast<double>(m) + 1.0);
  return std::round(num);
}

std::size_t MultiIndex::hash() const {
  // FNV-1a over the used codes.
  std::uint64_t h = 1469598103934665603ull ^ size_;
  for (int i = 0; i < size_; ++i) {
    h ^= codes_[static_cast<std::size_t>(i)];
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::string MultiIndex::to_string() const {
  std::string s = "{";
  for (int i = 0; i < size_; ++i) {
    if (i) s += ',';
    s += (*this)[i].to_string();
  }
  return s + "}";
}

namespace {

WeightStats stats_from_sorted(std::span<std::int64_t> w2) {
  std::sort(w2.begin(), w2.end(), std::greater<>());
  WeightStats st;
  const double w1 = std::sqrt(static_cast<double>(w2[0]));
  if (w2.size() == 1) {
    st.S = 0.0;
    st.beta = w1;
    return st;
  }
  const double wb = std::sqrt(static_cast<double>(w2[1]));
  st.S = w2[0] == w2[1] ? 0.0 : w1 - wb;
  st.beta = std::sqrt(static_cast<double>(w2[0] * w2[1]));
  if (w2.size() >= 3) {
    st.mu_sq = w2[2];
    st.mu = std::sqrt(static_cast<double>(w2[2]));
  }
  return st;
}

}  // namespace

WeightStats mu_S_beta(const MultiIndex& jj) {
  if (jj.empty()) throw DomainError("mu_S_beta: empty multi-index");
  std::array<std::int64_t, kMaxDegree> w2{};
  for (int i = 0; i < jj.degree(); ++i) w2[static_cast<std::size_t>(i)] = jj[i].weight_sq();
  return stats_from_sorted(std::span(w2.data(), static_cast<std::size_t>(jj.degree())));
}

WeightStats mu_S_beta(ModeIndex j, const MultiIndex& ll) {
  std::array<std::int64_t, kMaxDegree + 1> w2{};
  w2[0] = j.weight_sq();
  for (int i = 0; i < ll.degree(); ++i) w2[static_cast<std::size_t>(i) + 1] = ll[i].weight_sq();
  return stats_from_sorted(std::span(w2.data(), static_cast<std::size_t>(ll.degree()) + 1));
}

}  // namespace revnorm
