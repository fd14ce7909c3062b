#include <doctest.h>

#include <cmath>
#include <random>

#include "revnorm/diagnostics.hpp"
#include "revnorm/error.hpp"
#include "revnorm/oracle/oracle.hpp"
#include "revnorm/polynomial.hpp"
#include "revnorm/pseudonorm.hpp"

using namespace revnorm;

namespace {

ModeIndex m1(int a, int delta) { return ModeIndex({a}, delta); }

MultiIndex key(std::initializer_list<ModeIndex> l) { return MultiIndex::from_tuple(l); }

double rel_max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(a[i]));
  }
  return num / den;
}

}  // namespace

TEST_CASE("from_terms merges duplicates and drops zeros") {
  const auto q = ScalarPolynomial::from_terms(
      2, {{key({m1(1, 1), m1(1, -1)}), 1.0}, {key({m1(1, -1), m1(1, 1)}), 2.0}, {key({m1(0, 1), m1(0, 1)}), 0.0}});
  CHECK(q.size() == 1);
  CHECK(q.coefficient(key({m1(1, 1), m1(1, -1)})) == 3.0);
  CHECK_THROWS_AS(ScalarPolynomial::from_terms(3, {{key({m1(1, 1)}), 1.0}}), DomainError);
  CHECK_THROWS_AS(ScalarPolynomial::from_terms(1, {{key({m1(1, 1)}), NAN}}), DomainError);
}

TEST_CASE("complex coefficients are rejected") {
  const std::pair<MultiIndex, cplx> t{key({m1(1, 1), m1(1, -1)}), cplx(1.0, 0.5)};
  CHECK_THROWS(ScalarPolynomial::from_complex_terms(2, std::span(&t, 1)));
}

TEST_CASE("poly_eval") {
  const auto set = IndexSet::box(1, 1);
  StateVector z(set);
  z.set(m1(1, 1), 2.0);
  z.set(m1(1, -1), 3.0);
  const auto q = ScalarPolynomial::from_terms(2, {{key({m1(1, 1), m1(1, -1)}), 1.0}});
  CHECK(poly_eval(q, z) == cplx(6.0));
  CHECK(poly_eval(oracle::random_polynomial(*set, 3, 1, 10), StateVector(set)) == cplx(0.0));

  StateVector w(set);
  w.set(m1(1, 1), {1.0, 1.0});
  const auto h = ScalarPolynomial::from_terms(2, {{key({m1(1, 1), m1(1, 1)}), 0.5}});
  CHECK(std::abs(poly_eval(h, w) - cplx(0.0, 1.0)) < 1e-15);
}

TEST_CASE("poly_gradient") {
  const auto set = IndexSet::box(1, 1);
  const auto q = ScalarPolynomial::from_terms(2, {{key({m1(1, 1), m1(1, -1)}), 1.0}});
  const auto z = oracle::random_state(set, 2);
  const auto g = poly_gradient(q, z);
  CHECK(g[set->position(m1(1, 1))] == z.at(m1(1, -1)));
  CHECK(g[set->position(m1(1, -1))] == z.at(m1(1, 1)));

  StateVector w(set);
  w.set(m1(1, 1), 3.0);
  const auto h = ScalarPolynomial::from_terms(2, {{key({m1(1, 1), m1(1, 1)}), 0.5}});
  CHECK(poly_gradient(h, w)[set->position(m1(1, 1))] == cplx(3.0));
}

TEST_CASE("poly_gradient agrees with finite differences") {
  const auto set = IndexSet::box(1, 2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto q = oracle::random_polynomial(*set, 2 + static_cast<int>(seed % 4), seed, 25);
    const auto z = oracle::random_state(set, seed + 1000);
    const auto g = poly_gradient(q, z);
    const auto fd = oracle::finite_diff_gradient(q, z, 1e-5);
    CHECK(rel_max_diff(g, fd) <= 1e-6);
  }
}

TEST_CASE("compiled polynomial matches the reference evaluation") {
  const auto set = IndexSet::box(2, 1);
  const auto q = oracle::random_polynomial(*set, 4, 5, 60);
  const auto z = oracle::random_state(set, 6);
  const CompiledPolynomial cq(q, *set);
  CHECK(std::abs(cq.value(z.values()) - poly_eval(q, z)) <= 1e-13 * std::abs(poly_eval(q, z)));
  std::vector<cplx> grad(set->size());
  cq.add_gradient(z.values(), grad);
  CHECK(rel_max_diff(poly_gradient(q, z), grad) <= 1e-13);
}

TEST_CASE("compiled field matches field_eval") {
  const auto set = IndexSet::box(1, 2);
  const auto f = oracle::random_sparse_field(*set, 3, 8, 20);
  const auto z = oracle::random_state(set, 9);
  const CompiledField cf(f, *set);
  std::vector<cplx> out(set->size());
  cf.apply(z.values(), out);
  CHECK(rel_max_diff(field_eval(f, z), out) <= 1e-14);
}

TEST_CASE("parity_classify") {
  const auto action = ScalarPolynomial::from_terms(2, {{key({m1(1, 1), m1(1, -1)}), 1.0}});
  CHECK(parity_classify(action) == Parity::even);
  const auto p = key({m1(1, 1), m1(1, 1), m1(2, -1)});
  CHECK(parity_classify(ScalarPolynomial::from_terms(3, {{p, 1.0}, {p.conj(), -1.0}})) == Parity::odd);
  CHECK(parity_classify(ScalarPolynomial::from_terms(3, {{p, 1.0}})) == Parity::neither);
  CHECK(parity_classify(ScalarPolynomial(4)) == Parity::even);
}

TEST_CASE("parity tags are verified") {
  const auto p = key({m1(1, 1), m1(1, 1), m1(2, -1)});
  const auto q = ScalarPolynomial::from_terms(3, {{p, 1.0}});
  CHECK_THROWS_AS((void)q.with_parity(Parity::even), ParityError);
  const auto odd = ScalarPolynomial::from_terms(3, {{p, 1.0}, {p.conj(), -1.0}}).with_parity(Parity::odd);
  CHECK(odd.parity() == Parity::odd);
}

TEST_CASE("even polynomials are rho invariant and real on real states") {
  const auto set = IndexSet::box(1, 3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto q = oracle::random_even_polynomial(*set, 4, seed, 30);
    const auto z = oracle::random_state(set, seed + 50);
    const cplx a = poly_eval(q, z);
    CHECK(std::abs(poly_eval(q, rho(z)) - a) <= 1e-12 * std::abs(a));

    StateVector r(set);
    for (std::size_t i = 0; i < set->size(); ++i) {
      if (set->mode(i).delta() > 0) {
        r[i] = z[i];
        r[set->conj_position(i)] = std::conj(z[i]);
      }
    }
    const cplx v = poly_eval(q, r);
    CHECK(std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v)));
  }
}

TEST_CASE("gamma_class_constant") {
  const auto q = ScalarPolynomial::from_terms(3, {{key({m1(3, 1), m1(2, 1), m1(1, 1)}), 1.0}});
  CHECK(gamma_class_constant(q, 0.0, 1.0) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(gamma_class_constant(q.scaled(-2.5), 0.0, 1.0) == doctest::Approx(2.5 * 4.0 / 6.0).epsilon(1e-15));
  CHECK(gamma_class_constant(ScalarPolynomial(3), 0.0, 1.0) == 0.0);

  // The norm with coefficient w^{2s} on {j, conj j}, read literally.
  const auto set = IndexSet::box(1, 3);
  const double s = 2.0;
  std::vector<PolyTerm> terms;
  for (auto j : set->modes()) {
    if (j.delta() > 0) terms.push_back({key({j, j.conj()}), std::pow(weight(j), 2 * s)});
  }
  CHECK(gamma_class_constant(ScalarPolynomial::from_terms(2, terms), 0.0, s) == doctest::Approx(1.0).epsilon(1e-15));
  // Stored (symmetrized) norm carries both orderings.
  CHECK(gamma_class_constant(sobolev_norm_polynomial(*set, s), 0.0, s) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("tclass_constant") {
  const auto f = PolyVectorField::from_terms(2, {{m1(2, 1), key({m1(1, 1), m1(1, 1)}), 1.0}});
  CHECK(tclass_constant(f, 2.0, 0.0) == 2.0);
  CHECK(tclass_constant(f, 2.0, 0.0, TclassFormula::power_of_sum) == 4.0);
  CHECK(tclass_constant(PolyVectorField(3), 2.0, 0.0) == 0.0);
}

TEST_CASE("check_field_symmetry") {
  CHECK(check_field_symmetry(PolyVectorField(3)).ok());
  const auto single = PolyVectorField::from_terms(2, {{m1(2, 1), key({m1(1, 1), m1(1, 1)}), 1.0}});
  const auto rep = check_field_symmetry(single);
  CHECK(rep.violations.size() == 1);
  CHECK(rep.non_real.empty());
  const auto paired = PolyVectorField::from_terms(
      2, {{m1(2, 1), key({m1(1, 1), m1(1, 1)}), 1.0}, {m1(2, -1), key({m1(1, -1), m1(1, -1)}), -1.0}});
  CHECK(check_field_symmetry(paired).ok());

  const std::tuple<ModeIndex, MultiIndex, cplx> raw[] = {
      {m1(2, 1), key({m1(1, 1), m1(1, 1)}), cplx(1.0, 0.3)},
      {m1(2, -1), key({m1(1, -1), m1(1, -1)}), cplx(-1.0, 0.0)},
  };
  const auto r2 = check_field_symmetry(raw);
  CHECK(r2.non_real.size() == 1);
  CHECK(r2.violations.empty());
}

TEST_CASE("gamma-class bound holds on random spheres") {
  const auto set = IndexSet::box(1, 2);
  const double s = 1.0, gamma = 0.0;
  const auto q = oracle::random_even_polynomial(*set, 4, 3, 30);
  const double bound = gamma_class_constant(q, gamma, s) * class_bound_constant(*set, 4, s, gamma);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto z = oracle::random_state(set, seed);
    const double n = sobolev_norm(z, s);
    for (auto& v : z.values()) v /= n;
    worst = std::max(worst, std::abs(poly_eval(q, z)));
  }
  CHECK(worst <= bound);
}
