#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "revnorm/polynomial.hpp"
#include "revnorm/pseudonorm.hpp"
#include "revnorm/spectral.hpp"

namespace revnorm {

/// lambda * (psi psibar)^p (phi phibar)^q; q = 0 for single-species models.
struct NonlinearTerm {
  int p = 2;
  int q = 0;
  double lambda = 1.0;

  [[nodiscard]] int field_degree() const { return 2 * (p + q) - 1; }
  bool operator==(const NonlinearTerm&) const = default;
};

using Nonlinearity = std::vector<NonlinearTerm>;

/// Human readable form such as "1*|psi|^4 + 0.5*|psi|^2|phi|^2".
[[nodiscard]] std::string describe(const Nonlinearity& nl);

enum class FrequencyConvention {
  laplacian,  ///< omega_a = a_1^2 + ... + a_d^2 + V_a
  weight      ///< omega_a = max(1, a_1^2 + ... + a_d^2) + V_a
};

enum class PotentialKind {
  random,  ///< V_a i.i.d. uniform on [0, 1] from the species seed
  zero
};

[[nodiscard]] std::string_view to_string(FrequencyConvention c);
[[nodiscard]] FrequencyConvention frequency_convention_from_string(std::string_view s);
[[nodiscard]] std::string_view to_string(PotentialKind k);
[[nodiscard]] PotentialKind potential_kind_from_string(std::string_view s);

struct ModelOptions {
  FrequencyConvention convention = FrequencyConvention::laplacian;
  PotentialKind potential = PotentialKind::random;
};

/// A truncated reversible system i z' = omega z + F(z) ready for the builder.
struct ModelSpec {
  std::string kind;  ///< "nls", "coupled_nls", "synthetic" or "free"
  int d = 1;
  int K = 1;
  int n_species = 1;
  IndexSetPtr set;
  FrequencyMap omega;
  /// fields[i] has degree i + 2; absent degrees are zero fields.
  TaylorFields fields;
  std::vector<std::uint64_t> seeds;
  /// One entry per species (empty for synthetic and free models).
  std::vector<Nonlinearity> nonlinearity;
  bool hamiltonian = false;
  ModelOptions options;

  /// Highest degree with a non-zero field, 0 when F = 0.
  [[nodiscard]] int max_degree() const;
  [[nodiscard]] bool linear() const { return max_degree() == 0; }
};

/// Uniform draws in [0, 1) from mt19937_64, one per lattice point of the
/// given species in canonical order. Portable across standard libraries.
[[nodiscard]] std::vector<double> uniform_draws(std::uint64_t seed, std::size_t n);

/// omega_{(a,+,sigma)} = lambda(a) + V_sigma(a), V_sigma drawn from seeds[sigma].
[[nodiscard]] FrequencyMap nls_frequencies(const IndexSetPtr& set, std::span<const std::uint64_t> seeds,
                                           const ModelOptions& options);

/// P_sigma = integral of g over the torus, as a polynomial in the Fourier
/// variables z_{(a,+,s)} = psi_a, z_{(a,-,s)} = conj(psi_a). One polynomial per
/// distinct degree of nl, in increasing degree.
[[nodiscard]] std::vector<ScalarPolynomial> nls_energy(const IndexSet& set, const Nonlinearity& nl);

/// F_{(a,+,s)} = dP/dz_{(a,-,s)}, F_{(a,-,s)} = -dP/dz_{(a,+,s)} restricted to species s.
void add_hamiltonian_field(const ScalarPolynomial& energy, int species, std::vector<FieldTerm>& out);

[[nodiscard]] ModelSpec build_nls_model(int d, int K, std::uint64_t potential_seed, const Nonlinearity& nl,
                                        const ModelOptions& options = {});
[[nodiscard]] ModelSpec build_coupled_nls_model(int d, int K, std::array<std::uint64_t, 2> seeds,
                                                const Nonlinearity& nl1, const Nonlinearity& nl2,
                                                const ModelOptions& options = {});
/// The linear system F = 0 with NLS frequencies.
[[nodiscard]] ModelSpec build_free_model(int d, int K, std::uint64_t potential_seed, const ModelOptions& options = {});

/// Reversible field with random coefficients uniform in [-scale, scale] on every
/// momentum-conserving (j, L) pair of the set, antisymmetrized so that
/// a_{conj j, conj L} = -a_{j L}.
[[nodiscard]] PolyVectorField random_reversible_field(const IndexSet& set, int degree, std::uint64_t seed,
                                                      double scale = 1.0);

/// NLS frequencies with random reversible fields of the given degrees. Unlike
/// the gauge-invariant models this has even-degree pieces, so N_{s,3} != 0.
[[nodiscard]] ModelSpec build_synthetic_model(int d, int K, std::uint64_t seed, std::span<const int> degrees,
                                              double scale = 1.0, const ModelOptions& options = {});

/// Number of stored terms violating delta_j a_j = sum_i delta_{l_i} a_{l_i}.
[[nodiscard]] std::size_t count_momentum_violations(const PolyVectorField& f);
/// Number of stored terms whose multiset has unequal +/- counts in some species.
[[nodiscard]] std::size_t count_gauge_violations(const ScalarPolynomial& q);

}  // namespace revnorm
