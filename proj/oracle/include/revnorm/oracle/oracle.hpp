#pragma once

#include <cstdint>
#include <vector>

#include "revnorm/integrator.hpp"
#include "revnorm/model.hpp"
#include "revnorm/polynomial.hpp"
#include "revnorm/pseudonorm.hpp"

// Slow reference implementations. They work on ordered tuples and never call
// for_each_partial, so they cannot share a multiplicity bug with the fast path.
namespace revnorm::oracle {

inline constexpr std::size_t kMaxOracleSet = 12;
inline constexpr int kMaxOracleDegree = 5;

/// Thrown when an input exceeds the oracle cost guard.
class CostGuardError : public Error {
 public:
  using Error::Error;
};

/// L_F G by nested loops: every stored coefficient is spread evenly over its
/// ordered representatives, each position of each G tuple is differentiated
/// and paired with each ordered tuple of F, and the products are canonicalized.
[[nodiscard]] ScalarPolynomial brute_force_lie(const PolyVectorField& f, const ScalarPolynomial& g,
                                               const IndexSet& set);

/// Holomorphic partials from centered differences of poly_eval:
/// dQ/dz = (d/dx - i d/dy) / 2 per coordinate.
[[nodiscard]] std::vector<cplx> finite_diff_gradient(const ScalarPolynomial& q, const StateVector& z, double h);

/// Centered differences of t -> pseudonorm_eval(fam, z(t)) at interior samples
/// 1 .. n-2 of a uniformly sampled trajectory.
[[nodiscard]] std::vector<double> finite_diff_time_derivative(const PseudoNormFamily& fam, const Trajectory& traj);

/// Same for a single polynomial (complex values, no reality requirement).
[[nodiscard]] std::vector<cplx> finite_diff_time_derivative(const ScalarPolynomial& q, const Trajectory& traj);

/// Random odd polynomial with n_pairs conjugate pairs +-c on random
/// non-self-conjugate multisets.
[[nodiscard]] ScalarPolynomial random_odd_polynomial(const IndexSet& set, int degree, std::uint64_t seed,
                                                     int n_pairs);
/// Random polynomial without any symmetry.
[[nodiscard]] ScalarPolynomial random_polynomial(const IndexSet& set, int degree, std::uint64_t seed, int n_terms);
/// Random even polynomial (conjugate pairs +c, +c, self-conjugate keys allowed).
[[nodiscard]] ScalarPolynomial random_even_polynomial(const IndexSet& set, int degree, std::uint64_t seed,
                                                      int n_terms);
/// Random reversible field with n_pairs conjugate term pairs (no momentum rule).
[[nodiscard]] PolyVectorField random_sparse_field(const IndexSet& set, int degree, std::uint64_t seed, int n_pairs);

/// Random complex state (not real).
[[nodiscard]] StateVector random_state(const IndexSetPtr& set, std::uint64_t seed);

/// NLS vector field from the Fourier product of dg/d(conj psi) over ordered
/// tuples, for g = lambda |psi|^{2p} |phi|^{2q}, driving the given species.
[[nodiscard]] PolyVectorField brute_force_nls_field(const IndexSet& set, const NonlinearTerm& term, int species);

}  // namespace revnorm::oracle
