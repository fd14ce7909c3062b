#pragma once

#include <span>
#include <vector>

#include "revnorm/polynomial.hpp"
#include "revnorm/resonance.hpp"
#include "revnorm/spectral.hpp"

namespace revnorm {

inline constexpr double kDefaultResTol = 1e-10;
inline constexpr double kParityTol = 1e-12;

struct HomologicalSolution {
  ScalarPolynomial solution;
  /// Smallest |Omega(J)| that was divided by (infinity if nothing was).
  double min_divisor;
};

/// Solves d_omega N = G for an odd G by b_J = a_J / Omega(J).
///
/// Self-conjugate multisets get b_J = 0. Throws ParityError when G is not odd
/// and ResonanceError when a multiset with |Omega| <= res_tol carries a
/// coefficient above res_tol * max|a|.
[[nodiscard]] HomologicalSolution solve_homological(const ScalarPolynomial& g, const FrequencyMap& omega,
                                                    double res_tol = kDefaultResTol);

/// The polynomial ||z||_s^2 = sum_j weight(j)^{2s} z_j z_{conj j} on a set.
[[nodiscard]] ScalarPolynomial sobolev_norm_polynomial(const IndexSet& set, double s);

/// Taylor pieces F^(2), F^(3), ... of a polynomial vector field; entry i has
/// degree i + 2 (possibly zero).
using TaylorFields = std::vector<PolyVectorField>;

struct BuildOptions {
  double res_tol = kDefaultResTol;
  double parity_tol = kParityTol;
  /// gamma used for the per-order class-constant diagnostics.
  double class_gamma = 0.0;
};

/// N_s^(r) = sum_{k=2}^r N_{s,k} together with build diagnostics.
struct PseudoNormFamily {
  double s = 0.0;
  int r = 2;
  /// parts[k-2] has degree k; parts[0] is ||z||_s^2.
  std::vector<ScalarPolynomial> parts;
  /// sources[k-2] = G_k for k >= 3 (sources[0] is the zero polynomial).
  std::vector<ScalarPolynomial> sources;
  /// Per order: smallest |Omega| divided by (infinity when G_k = 0).
  std::vector<double> min_divisor;
  /// Per order: gamma_class_constant(parts[k-2], class_gamma, s).
  std::vector<double> class_constants;
  double class_gamma = 0.0;
  double res_tol = kDefaultResTol;

  [[nodiscard]] const ScalarPolynomial& part(int k) const { return parts.at(static_cast<std::size_t>(k - 2)); }
};

/// Builds N_s^(r) by the recursion G_{k+1} = -sum_{m=2}^k L_{F^(k+2-m)} N_{s,m},
/// d_omega N_{s,k+1} = G_{k+1}. Pieces F^(p) missing from the list count as 0.
/// Resonance errors are annotated with the order at which they occur.
[[nodiscard]] PseudoNormFamily build_pseudonorm(std::span<const PolyVectorField> fields, const FrequencyMap& omega,
                                                double s, int r, const BuildOptions& options = {});

/// sum_k N_{s,k}(z) for a real state; throws DomainError when z is not real
/// or when the value's imaginary part exceeds 1e-10 relative.
[[nodiscard]] double pseudonorm_eval(const PseudoNormFamily& fam, const StateVector& z);

/// d/dt N_s^(r)(z(t)) along the full system, evaluated pointwise.
[[nodiscard]] double drift_rate(const PseudoNormFamily& fam, const FrequencyMap& omega,
                                std::span<const PolyVectorField> fields, const StateVector& z);

/// Homogeneous pieces of the symbolic remainder: d/dt N = -i * sum of the
/// returned polynomials (all of degree > r).
[[nodiscard]] std::vector<ScalarPolynomial> remainder_polynomials(const PseudoNormFamily& fam,
                                                                  std::span<const PolyVectorField> fields);
/// Re(-i * sum_q q(z)) over the symbolic remainder.
[[nodiscard]] double remainder_value(std::span<const ScalarPolynomial> remainder, const StateVector& z);

/// Max over orders k of the coefficient-wise residual of
/// d_omega N_{s,k+1} + sum_m L_{F^(k+2-m)} N_{s,m}, relative to the largest
/// coefficient of the two sides.
[[nodiscard]] double recursion_residual(const PseudoNormFamily& fam, const FrequencyMap& omega,
                                        std::span<const PolyVectorField> fields);

/// Value and drift of a family, pre-resolved for repeated pointwise evaluation.
class PseudoNormEvaluator {
 public:
  PseudoNormEvaluator(const PseudoNormFamily& fam, const FrequencyMap& omega, std::span<const PolyVectorField> fields);

  [[nodiscard]] cplx value(std::span<const cplx> z) const;
  /// -i sum_j (omega_j z_j + F_j(z)) dN/dz_j.
  [[nodiscard]] cplx drift(std::span<const cplx> z) const;
  /// Same derivative for the single part N_{s,2} = ||z||_s^2.
  [[nodiscard]] cplx norm_drift(std::span<const cplx> z) const;

 private:
  [[nodiscard]] cplx derivative(std::span<const cplx> z, std::size_t n_parts) const;

  std::vector<CompiledPolynomial> parts_;
  std::vector<CompiledPolynomial> rotated_;  ///< d_omega of each part
  std::vector<CompiledField> fields_;
};

}  // namespace revnorm
