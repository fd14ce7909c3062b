#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace revnorm {

inline constexpr int kMaxDim = 3;
inline constexpr int kMaxLattice = 127;
inline constexpr int kMaxSpecies = 15;
inline constexpr int kMaxDegree = 16;

using Lattice = std::array<int, kMaxDim>;

/// One element j = (a, delta, species) of the extended index set.
///
/// The triple is packed into a single 32-bit code whose natural order is the
/// canonical total order used everywhere (species, dimension, lattice point,
/// then sign). The sign occupies the lowest bit, so j and conj(j) are
/// neighbours in that order.
class ModeIndex {
 public:
  ModeIndex() = default;
  ModeIndex(std::span<const int> a, int delta, int species = 0);
  ModeIndex(std::initializer_list<int> a, int delta, int species = 0)
      : ModeIndex(std::span<const int>(a.begin(), a.size()), delta, species) {}

  static constexpr ModeIndex from_code(std::uint32_t code) {
    ModeIndex j;
    j.code_ = code;
    return j;
  }

  [[nodiscard]] constexpr std::uint32_t code() const { return code_; }
  [[nodiscard]] constexpr int dim() const { return static_cast<int>((code_ >> 25) & 0x3u) + 1; }
  [[nodiscard]] constexpr int delta() const { return (code_ & 1u) ? -1 : +1; }
  [[nodiscard]] constexpr int species() const { return static_cast<int>((code_ >> 27) & 0xFu); }
  [[nodiscard]] constexpr int a(int i) const {
    const int shift = 17 - 8 * i;
    return static_cast<int>((code_ >> shift) & 0xFFu) - 128;
  }
  [[nodiscard]] Lattice lattice() const;

  /// Sum of squares of the lattice coordinates (the Laplacian eigenvalue).
  [[nodiscard]] constexpr std::int64_t laplacian() const {
    std::int64_t acc = 0;
    for (int i = 0; i < dim(); ++i) acc += static_cast<std::int64_t>(a(i)) * a(i);
    return acc;
  }
  /// max(1, |a|^2); weights are compared through this exact integer.
  [[nodiscard]] constexpr std::int64_t weight_sq() const {
    const auto l = laplacian();
    return l > 1 ? l : 1;
  }
  [[nodiscard]] constexpr ModeIndex conj() const { return from_code(code_ ^ 1u); }
  /// The same lattice point and species with delta = +1.
  [[nodiscard]] constexpr ModeIndex positive() const { return from_code(code_ & ~1u); }

  [[nodiscard]] std::string to_string() const;

  constexpr auto operator<=>(const ModeIndex&) const = default;

 private:
  std::uint32_t code_ = 0;
};

/// sqrt(max(1, a_1^2 + ... + a_d^2)); always >= 1.
[[nodiscard]] double weight(ModeIndex j);
[[nodiscard]] inline ModeIndex conj_index(ModeIndex j) { return j.conj(); }

/// Canonical multiset of mode indices: the key of a monomial z_J.
///
/// Stored inline as the sorted list of codes with repetition, so equal
/// multisets compare equal bytewise and hashing needs no allocation.
class MultiIndex {
 public:
  MultiIndex() = default;

  /// Canonicalizes an arbitrary tuple (order does not matter).
  static MultiIndex from_tuple(std::span<const ModeIndex> tuple);
  static MultiIndex from_tuple(std::initializer_list<ModeIndex> tuple) {
    return from_tuple(std::span<const ModeIndex>(tuple.begin(), tuple.size()));
  }

  [[nodiscard]] int degree() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }
  [[nodiscard]] ModeIndex operator[](int i) const { return ModeIndex::from_code(codes_[static_cast<std::size_t>(i)]); }
  [[nodiscard]] std::span<const std::uint32_t> codes() const { return {codes_.data(), static_cast<std::size_t>(size_)}; }

  /// Distinct entries with their multiplicities, in canonical order.
  [[nodiscard]] std::vector<std::pair<ModeIndex, int>> entries() const;
  [[nodiscard]] int multiplicity(ModeIndex j) const;

  [[nodiscard]] MultiIndex conj() const;
  [[nodiscard]] bool self_conjugate() const;

  /// Removes one occurrence of the entry stored at sorted position pos.
  [[nodiscard]] MultiIndex without_position(int pos) const;
  /// Multiset union (sum of multiplicities).
  [[nodiscard]] MultiIndex merged(const MultiIndex& other) const;

  /// Number of distinct orderings of the multiset: k! / prod(m_i!).
  [[nodiscard]] double orderings() const;

  [[nodiscard]] std::size_t hash() const;
  [[nodiscard]] std::string to_string() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::array<std::uint32_t, kMaxDegree> codes_{};
  std::uint8_t size_ = 0;
};

[[nodiscard]] MultiIndex canonical_multi_index(std::span<const ModeIndex> tuple);

/// Weight statistics of a multi-index: third largest weight, gap between the
/// two largest weights and product of the two largest weights.
struct WeightStats {
  double mu = 1.0;
  double S = 0.0;
  double beta = 1.0;
  /// mu squared as an exact integer (used to bucket multisets by mu).
  std::int64_t mu_sq = 1;
};

/// Throws DomainError for an empty multi-index.
[[nodiscard]] WeightStats mu_S_beta(const MultiIndex& jj);
/// Same statistics for the combined multi-index (j, l) of a vector-field term.
[[nodiscard]] WeightStats mu_S_beta(ModeIndex j, const MultiIndex& ll);

}  // namespace revnorm

template <>
struct std::hash<revnorm::MultiIndex> {
  std::size_t operator()(const revnorm::MultiIndex& m) const noexcept { return m.hash(); }
};
template <>
struct std::hash<revnorm::ModeIndex> {
  std::size_t operator()(const revnorm::ModeIndex& j) const noexcept { return std::hash<std::uint32_t>{}(j.code()); }
};
