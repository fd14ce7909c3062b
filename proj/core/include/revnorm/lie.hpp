#pragma once

#include <span>

#include "revnorm/polynomial.hpp"
#include "revnorm/spectral.hpp"

namespace revnorm {

/// L_F G = sum_ell F_ell dG/dz_ell, computed on coefficients.
///
/// The result has degree deg(F) + deg(G) - 1 and is exact in the truncation:
/// every output multiset is built from indices already present in F or G.
[[nodiscard]] ScalarPolynomial lie_derivative(const PolyVectorField& f, const ScalarPolynomial& g);

/// d_omega Q = sum_ell omega_ell z_ell dQ/dz_ell, i.e. b_J -> Omega(J) b_J.
[[nodiscard]] ScalarPolynomial omega_derivative(const ScalarPolynomial& q, const FrequencyMap& omega);

/// Exact time derivative of Q along i z'_j = omega_j z_j + sum_k F^(k)_j(z):
///   -i sum_j (omega_j z_j + F_j(z)) dQ/dz_j.
[[nodiscard]] cplx time_derivative_value(const ScalarPolynomial& q, const FrequencyMap& omega,
                                         std::span<const PolyVectorField> fields, const StateVector& z);

}  // namespace revnorm
