#pragma once

#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "revnorm/polynomial.hpp"

namespace revnorm {

/// even if |b_{conj J} - b_J| <= tol * max|b| for every stored J, odd if
/// |b_{conj J} + b_J| <= tol * max|b|, neither otherwise. Absent conjugate
/// keys count as 0. The zero polynomial classifies as even.
[[nodiscard]] Parity parity_classify(const ScalarPolynomial& q, double tol = 1e-12);
/// True when q has parity p at tolerance tol; the zero polynomial is both.
[[nodiscard]] bool has_parity(const ScalarPolynomial& q, Parity p, double tol = 1e-12);

/// Smallest C with |b_J| <= C mu^gamma beta^s / (1 + S)^2 over the stored
/// support, using the stored coefficients. 0 for the zero polynomial.
[[nodiscard]] double gamma_class_constant(const ScalarPolynomial& q, double gamma, double s);

enum class TclassFormula {
  sum_of_power,  ///< denominator mu + S^M
  power_of_sum  ///< denominator (mu + S)^M
};

/// Smallest C with |a_{jL}| <= C mu^{M+nu} / denom(mu, S) over the stored
/// support, where mu and S are taken over the combined index (j, L).
[[nodiscard]] double tclass_constant(const PolyVectorField& f, double M, double nu,
                                     TclassFormula formula = TclassFormula::sum_of_power);

/// Combinatorial constant c(k, s, gamma) of the truncated index set:
/// sum over all degree-k multisets J of mu^gamma beta^s / ((1+S)^2 prod_i w_i^s).
/// For any Q of degree k, |Q(z)| <= gamma_class_constant(Q) * c * ||z||_s^k.
[[nodiscard]] double class_bound_constant(const IndexSet& set, int k, double s, double gamma);

struct SymmetryViolation {
  ModeIndex out;
  MultiIndex in;
  double coef = 0.0;
  double partner = 0.0;  ///< stored a_{conj j, conj L}
};

struct NonRealCoefficient {
  ModeIndex out;
  MultiIndex in;
  cplx coef;
};

/// Coefficient-level check of the reality and reversibility conditions.
struct SymmetryReport {
  std::vector<SymmetryViolation> violations;
  std::vector<NonRealCoefficient> non_real;
  [[nodiscard]] bool ok() const { return violations.empty() && non_real.empty(); }
  [[nodiscard]] std::string summary() const;
};

/// Lists every term with |a_{conj j, conj L} + a_{jL}| > tol * max|a|.
[[nodiscard]] SymmetryReport check_field_symmetry(const PolyVectorField& f, double tol = 1e-12);
/// Raw variant over possibly complex coefficients: non-real ones are listed
/// separately from antisymmetry violations of the real parts.
[[nodiscard]] SymmetryReport check_field_symmetry(std::span<const std::tuple<ModeIndex, MultiIndex, cplx>> terms,
                                                  double tol = 1e-12);

}  // namespace revnorm
