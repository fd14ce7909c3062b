#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "revnorm/mode_index.hpp"

namespace revnorm {

using cplx = std::complex<double>;

/// All (a, delta, species) with |a_i| <= K componentwise, delta in {+1,-1}
/// and species < n_species, in canonical order.
[[nodiscard]] std::vector<ModeIndex> truncated_index_set(int d, int K, int n_species);

/// A finite, conjugation-closed set of mode indices with a dense numbering.
///
/// Immutable once built and shared between states, frequency maps and
/// compiled polynomials.
class IndexSet {
 public:
  /// Galerkin box of half-width K.
  static std::shared_ptr<const IndexSet> box(int d, int K, int n_species = 1);
  /// Arbitrary set; throws DomainError unless closed under conjugation.
  static std::shared_ptr<const IndexSet> from_modes(std::vector<ModeIndex> modes);

  [[nodiscard]] std::size_t size() const { return modes_.size(); }
  [[nodiscard]] std::span<const ModeIndex> modes() const { return modes_; }
  [[nodiscard]] ModeIndex mode(std::size_t pos) const { return modes_[pos]; }
  [[nodiscard]] std::size_t conj_position(std::size_t pos) const { return conj_pos_[pos]; }
  [[nodiscard]] std::optional<std::size_t> find(ModeIndex j) const;
  /// Throws DomainError when j is not in the set.
  [[nodiscard]] std::size_t position(ModeIndex j) const;
  [[nodiscard]] bool contains(ModeIndex j) const { return find(j).has_value(); }

  /// Box metadata; K = -1 and d = dimension of the first mode for non-box sets.
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int truncation() const { return K_; }
  [[nodiscard]] int n_species() const { return n_species_; }

  [[nodiscard]] bool operator==(const IndexSet& other) const { return modes_ == other.modes_; }

 private:
  IndexSet() = default;
  void index();

  std::vector<ModeIndex> modes_;
  std::vector<std::size_t> conj_pos_;
  std::unordered_map<std::uint32_t, std::size_t> pos_;
  int dim_ = 1;
  int K_ = -1;
  int n_species_ = 1;
};

using IndexSetPtr = std::shared_ptr<const IndexSet>;

[[nodiscard]] bool same_index_set(const IndexSetPtr& a, const IndexSetPtr& b);

/// Complex amplitudes z_j over a truncated index set.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(IndexSetPtr set);
  StateVector(IndexSetPtr set, std::vector<cplx> values);

  [[nodiscard]] const IndexSetPtr& index_set() const { return set_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<const cplx> values() const { return values_; }
  [[nodiscard]] std::span<cplx> values() { return values_; }
  [[nodiscard]] cplx operator[](std::size_t pos) const { return values_[pos]; }
  [[nodiscard]] cplx& operator[](std::size_t pos) { return values_[pos]; }

  /// Throws DomainError when j is outside the index set.
  [[nodiscard]] cplx at(ModeIndex j) const { return values_[set_->position(j)]; }
  void set(ModeIndex j, cplx v) { values_[set_->position(j)] = v; }

 private:
  IndexSetPtr set_;
  std::vector<cplx> values_;
};

/// rho(z)_j = z_{conj(j)}.
[[nodiscard]] StateVector rho(const StateVector& z);
/// Entrywise complex conjugate.
[[nodiscard]] StateVector conjugate(const StateVector& z);
/// sqrt(sum_j weight(j)^{2s} |z_j|^2).
[[nodiscard]] double sobolev_norm(const StateVector& z, double s);
/// ||rho(z) - conj(z)||_s; zero exactly for real states.
[[nodiscard]] double reality_defect(const StateVector& z, double s);
/// rho(z) == conj(z) up to tol * (1 + ||z||_0).
[[nodiscard]] bool is_real_state(const StateVector& z, double tol = 0.0);
/// ||a - b||_s over a shared index set.
[[nodiscard]] double sobolev_distance(const StateVector& a, const StateVector& b, double s);

/// Frequencies omega_j over an index set, antisymmetric under conjugation.
class FrequencyMap {
 public:
  FrequencyMap() = default;
  /// positive_values[a] gives omega for every delta = +1 index; the
  /// delta = -1 entries are set to the exact negation.
  FrequencyMap(IndexSetPtr set, const std::unordered_map<ModeIndex, double>& positive_values);
  /// Takes a full table; throws DomainError unless it is antisymmetric.
  FrequencyMap(IndexSetPtr set, std::vector<double> values);

  [[nodiscard]] const IndexSetPtr& index_set() const { return set_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t pos) const { return values_[pos]; }
  /// Throws DomainError outside the domain.
  [[nodiscard]] double at(ModeIndex j) const { return values_[set_->position(j)]; }

  [[nodiscard]] bool antisymmetric() const;
  /// Smallest C with |omega_a| <= C * weight(a)^m over the domain.
  [[nodiscard]] double growth_constant(double m) const;

 private:
  IndexSetPtr set_;
  std::vector<double> values_;
};

/// Omega(J) = sum_i omega_{j_i}.
///
/// Summed group-wise as (n_plus - n_minus) * omega_{(a,+)} in canonical
/// group order, so Omega(conj J) == -Omega(J) bit for bit and self-conjugate
/// multisets give exactly 0.
[[nodiscard]] double omega_sum(const MultiIndex& jj, const FrequencyMap& omega);

}  // namespace revnorm
