#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "revnorm/mode_index.hpp"
#include "revnorm/spectral.hpp"

namespace revnorm {

enum class Parity { even, odd, neither, unknown };

[[nodiscard]] std::string_view to_string(Parity p);
[[nodiscard]] Parity parity_from_string(std::string_view s);

/// One stored monomial b_J z_J of a scalar polynomial.
///
/// Storage is symmetrized: b_J is the sum of the coefficients of every
/// ordered tuple representing the multiset J, so the monomial contributes
/// b_J * prod_i z_{j_i} to the value.
struct PolyTerm {
  MultiIndex key;
  double coef = 0.0;
};

/// Homogeneous real-coefficient polynomial sum_J b_J z_J.
///
/// Terms are kept sorted by key with no duplicates and no exact zeros.
class ScalarPolynomial {
 public:
  explicit ScalarPolynomial(int degree = 2) : degree_(degree) {}

  /// Merges duplicate keys by summation; throws DomainError if a key has the
  /// wrong degree or a coefficient is not finite.
  static ScalarPolynomial from_terms(int degree, std::vector<PolyTerm> terms);
  /// Rejects any coefficient with a non-zero imaginary part.
  static ScalarPolynomial from_complex_terms(int degree, std::span<const std::pair<MultiIndex, cplx>> terms);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::span<const PolyTerm> terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  /// Stored coefficient of key, 0 when absent.
  [[nodiscard]] double coefficient(const MultiIndex& key) const;
  [[nodiscard]] double max_abs_coefficient() const;

  [[nodiscard]] Parity parity() const { return parity_; }
  /// Attaches a parity tag after verifying it at the given relative tolerance
  /// (throws ParityError when it does not hold).
  [[nodiscard]] ScalarPolynomial with_parity(Parity p, double tol = 1e-12) const;

  [[nodiscard]] ScalarPolynomial scaled(double factor) const;
  [[nodiscard]] ScalarPolynomial operator+(const ScalarPolynomial& other) const;
  [[nodiscard]] ScalarPolynomial operator-(const ScalarPolynomial& other) const;

 private:
  int degree_;
  std::vector<PolyTerm> terms_;
  Parity parity_ = Parity::unknown;
};

/// Hash-map accumulator used to assemble polynomials term by term.
class PolyAccumulator {
 public:
  explicit PolyAccumulator(int degree) : degree_(degree) {}
  void add(const MultiIndex& key, double c) { acc_[key] += c; }
  void reserve(std::size_t n) { acc_.reserve(n); }
  [[nodiscard]] std::size_t size() const { return acc_.size(); }
  /// Drops entries that are exactly zero.
  [[nodiscard]] ScalarPolynomial finish() const;

 private:
  int degree_;
  std::unordered_map<MultiIndex, double> acc_;
};

/// One stored term a_{j,L} z_L of component j of a vector field, with the
/// same symmetrized convention over L as PolyTerm.
struct FieldTerm {
  ModeIndex out;
  MultiIndex in;
  double coef = 0.0;
};

/// Homogeneous polynomial vector field F_j(z) = sum_L a_{jL} z_L of degree m.
class PolyVectorField {
 public:
  explicit PolyVectorField(int degree = 2) : degree_(degree) {}

  static PolyVectorField from_terms(int degree, std::vector<FieldTerm> terms);
  static PolyVectorField from_complex_terms(int degree, std::span<const std::tuple<ModeIndex, MultiIndex, cplx>> terms);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::span<const FieldTerm> terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  /// Terms of component out, contiguous in storage.
  [[nodiscard]] std::span<const FieldTerm> component(ModeIndex out) const;
  [[nodiscard]] double coefficient(ModeIndex out, const MultiIndex& in) const;
  [[nodiscard]] double max_abs_coefficient() const;

  [[nodiscard]] PolyVectorField scaled(double factor) const;

 private:
  int degree_;
  std::vector<FieldTerm> terms_;
};

/// Calls fn(ell, multiplicity, reduced) once per distinct entry ell of key,
/// where reduced is key with one copy of ell removed. d/dz_ell of the stored
/// monomial c * z_key is c * multiplicity * z_reduced; this is the single
/// place where symmetrized-storage multiplicity factors are applied.
template <class Fn>
void for_each_partial(const MultiIndex& key, Fn&& fn) {
  const auto codes = key.codes();
  std::size_t i = 0;
  while (i < codes.size()) {
    std::size_t k = i;
    while (k < codes.size() && codes[k] == codes[i]) ++k;
    fn(ModeIndex::from_code(codes[i]), static_cast<int>(k - i), key.without_position(static_cast<int>(i)));
    i = k;
  }
}

/// Product of z over the entries of key (with repetition).
[[nodiscard]] cplx monomial_value(const MultiIndex& key, const StateVector& z);

/// sum_J b_J z_J; throws DomainError for an index outside z's index set.
[[nodiscard]] cplx poly_eval(const ScalarPolynomial& q, const StateVector& z);
/// Holomorphic partials dQ/dz_ell at z, one entry per index of z's set.
[[nodiscard]] std::vector<cplx> poly_gradient(const ScalarPolynomial& q, const StateVector& z);
/// F_j(z) for every j of z's index set (components outside the set are an error).
[[nodiscard]] std::vector<cplx> field_eval(const PolyVectorField& f, const StateVector& z);

/// Polynomial pre-resolved against an index set for repeated evaluation.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  CompiledPolynomial(const ScalarPolynomial& q, const IndexSet& set);

  [[nodiscard]] cplx value(std::span<const cplx> z) const;
  /// Adds scale * dQ/dz into grad.
  void add_gradient(std::span<const cplx> z, std::span<cplx> grad, double scale = 1.0) const;
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const { return coef_.size(); }

 private:
  int degree_ = 0;
  std::vector<double> coef_;
  std::vector<std::uint32_t> pos_;  // degree_ entries per term
};

/// Vector field pre-resolved against an index set.
class CompiledField {
 public:
  CompiledField() = default;
  CompiledField(const PolyVectorField& f, const IndexSet& set);

  /// out[j] += scale * F_j(z).
  void apply(std::span<const cplx> z, std::span<cplx> out, cplx scale = 1.0) const;
  [[nodiscard]] std::size_t size() const { return coef_.size(); }

 private:
  int degree_ = 0;
  std::vector<std::uint32_t> out_;
  std::vector<double> coef_;
  std::vector<std::uint32_t> pos_;
};

}  // namespace revnorm
