#include <doctest.h>

#include <cmath>

#include "revnorm/error.hpp"
#include "revnorm/io.hpp"
#include "revnorm/mode_index.hpp"
#include "revnorm/oracle/oracle.hpp"
#include "revnorm/spectral.hpp"

using namespace revnorm;

namespace {
ModeIndex m1(int a, int delta, int species = 0) { return ModeIndex({a}, delta, species); }
}  // namespace

TEST_CASE("weight") {
  CHECK(weight(m1(0, 1)) == 1.0);
  CHECK(weight(m1(3, 1)) == 3.0);
  CHECK(weight(ModeIndex({3, 4}, -1)) == 5.0);
  const auto set3 = IndexSet::box(3, 2);
  for (auto j : set3->modes()) CHECK(weight(j) >= 1.0);
}

TEST_CASE("conj_index flips the sign only") {
  const auto j = m1(2, 1);
  const auto c = conj_index(j);
  CHECK(c == m1(2, -1));
  CHECK(c.a(0) == 2);
  CHECK(c.conj() == j);
  CHECK(ModeIndex({-3, 1}, 1, 1).conj().species() == 1);
}

TEST_CASE("mode index packing round trips") {
  const auto set = IndexSet::box(2, 3, 2);
  for (auto j : set->modes()) {
    const auto l = j.lattice();
    CHECK(ModeIndex(std::span<const int>(l.data(), static_cast<std::size_t>(j.dim())), j.delta(), j.species()) == j);
  }
  CHECK_THROWS_AS(ModeIndex({1}, 0), DomainError);
  CHECK_THROWS_AS(ModeIndex({200}, 1), DomainError);
}

TEST_CASE("mu_S_beta") {
  // Weights 5, 3, 2, 1 in d = 2.
  const auto jj = MultiIndex::from_tuple(
      {ModeIndex({3, 4}, 1), ModeIndex({3, 0}, -1), ModeIndex({0, 2}, 1), ModeIndex({1, 0}, 1)});
  auto st = mu_S_beta(jj);
  CHECK(st.mu == 2.0);
  CHECK(st.S == 2.0);
  CHECK(st.beta == 15.0);

  st = mu_S_beta(MultiIndex::from_tuple({m1(4, 1), m1(-4, -1)}));
  CHECK(st.mu == 1.0);
  CHECK(st.S == 0.0);
  CHECK(st.beta == 16.0);

  st = mu_S_beta(MultiIndex::from_tuple({m1(7, 1), m1(-7, 1), m1(7, -1)}));
  CHECK(st.mu == 7.0);
  CHECK(st.S == 0.0);
  CHECK(st.beta == 49.0);

  st = mu_S_beta(MultiIndex::from_tuple({m1(3, 1)}));
  CHECK(st.mu == 1.0);
  CHECK(st.S == 0.0);
  CHECK(st.beta == 3.0);

  CHECK_THROWS_AS((void)mu_S_beta(MultiIndex{}), DomainError);
}

TEST_CASE("mu_S_beta is permutation and conjugation invariant") {
  const auto q = oracle::random_polynomial(*IndexSet::box(1, 4), 5, 3, 100);
  for (const auto& t : q.terms()) {
    const auto a = mu_S_beta(t.key);
    const auto b = mu_S_beta(t.key.conj());
    CHECK(a.mu == b.mu);
    CHECK(a.S == b.S);
    CHECK(a.beta == b.beta);
  }
}

TEST_CASE("omega_sum") {
  const auto set = IndexSet::box(1, 3);
  std::unordered_map<ModeIndex, double> sq;
  for (int a = -3; a <= 3; ++a) sq[m1(a, 1)] = a * a;
  const FrequencyMap om(set, sq);
  CHECK(omega_sum(MultiIndex::from_tuple({m1(1, 1), m1(1, 1), m1(2, -1)}), om) == -2.0);
  CHECK(omega_sum(MultiIndex::from_tuple({m1(3, 1), m1(3, -1)}), om) == 0.0);

  const auto small = IndexSet::box(1, 2);
  std::unordered_map<ModeIndex, double> v;
  for (int a = -2; a <= 2; ++a) v[m1(a, 1)] = 0.0;
  v[m1(1, 1)] = 1.3;
  v[m1(2, 1)] = 4.7;
  const FrequencyMap om2(small, v);
  CHECK(omega_sum(MultiIndex::from_tuple({m1(2, 1), m1(1, -1), m1(1, -1)}), om2) == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("omega_sum is exactly antisymmetric under conjugation") {
  const auto set = IndexSet::box(2, 2);
  std::unordered_map<ModeIndex, double> v;
  std::uint64_t k = 1;
  for (auto j : set->modes()) {
    if (j.delta() > 0) v[j] = std::sqrt(static_cast<double>(++k)) * 0.731;
  }
  const FrequencyMap om(set, v);
  const auto q = oracle::random_polynomial(*set, 4, 9, 300);
  for (const auto& t : q.terms()) CHECK(omega_sum(t.key.conj(), om) == -omega_sum(t.key, om));
  CHECK(omega_sum(MultiIndex::from_tuple({ModeIndex({1, 2}, 1), ModeIndex({1, 2}, -1), ModeIndex({0, 1}, 1),
                                          ModeIndex({0, 1}, -1)}),
                  om) == 0.0);
}

TEST_CASE("frequency map rejects non-antisymmetric tables") {
  const auto set = IndexSet::box(1, 1);
  std::vector<double> bad(set->size(), 1.0);
  CHECK_THROWS_AS(FrequencyMap(set, bad), DomainError);
}

TEST_CASE("rho and reality") {
  const auto set = IndexSet::box(1, 1);
  StateVector z(set);
  z.set(m1(1, 1), {2.0, 1.0});
  const auto r = rho(z);
  CHECK(r.at(m1(1, -1)) == cplx(2.0, 1.0));
  CHECK(r.at(m1(1, 1)) == cplx(0.0, 0.0));

  StateVector w(set);
  w.set(m1(1, 1), {1.0, 2.0});
  w.set(m1(1, -1), {1.0, -2.0});
  CHECK(is_real_state(w));
  CHECK(reality_defect(w, 2.0) == 0.0);
  CHECK_FALSE(is_real_state(z));
}

TEST_CASE("sobolev_norm") {
  const auto set = IndexSet::box(1, 2);
  StateVector z(set);
  CHECK(sobolev_norm(z, 1.0) == 0.0);
  z.set(m1(2, 1), 0.5);
  CHECK(sobolev_norm(z, 1.0) == 1.0);
  StateVector y(set);
  y.set(m1(1, 1), 1.0);
  y.set(m1(2, 1), 1.0);
  CHECK(sobolev_norm(y, 2.0) == doctest::Approx(4.1231056256).epsilon(1e-10));

  const auto r = oracle::random_state(IndexSet::box(2, 2), 4);
  CHECK(sobolev_norm(rho(r), 1.5) == doctest::Approx(sobolev_norm(r, 1.5)).epsilon(1e-15));
}

TEST_CASE("truncated_index_set") {
  CHECK(truncated_index_set(1, 1, 1).size() == 6);
  CHECK(truncated_index_set(2, 1, 1).size() == 18);
  CHECK(truncated_index_set(1, 2, 2).size() == 20);
  const auto modes = truncated_index_set(2, 2, 2);
  CHECK(std::is_sorted(modes.begin(), modes.end()));
  const auto set = IndexSet::from_modes(modes);
  for (std::size_t i = 0; i < set->size(); ++i) CHECK(set->mode(set->conj_position(i)) == set->mode(i).conj());
  CHECK_THROWS_AS(IndexSet::from_modes({m1(1, 1)}), DomainError);
}

TEST_CASE("canonical multi index") {
  const std::vector<ModeIndex> a{m1(2, 1), m1(1, -1), m1(2, 1)};
  const std::vector<ModeIndex> b{m1(1, -1), m1(2, 1), m1(2, 1)};
  CHECK(canonical_multi_index(a) == canonical_multi_index(b));
  CHECK(canonical_multi_index(a).hash() == canonical_multi_index(b).hash());
  CHECK(MultiIndex::from_tuple({m1(1, 1)}).degree() == 1);
  const auto k = canonical_multi_index(a);
  CHECK(k.multiplicity(m1(2, 1)) == 2);
  CHECK(k.orderings() == 3.0);
  CHECK(MultiIndex::from_tuple({m1(1, 1), m1(1, -1)}).self_conjugate());
  CHECK_FALSE(k.self_conjugate());
}

TEST_CASE("state vector JSON records") {
  const auto set = IndexSet::box(2, 1, 2);
  const auto z = oracle::random_state(set, 17);
  const auto doc = io::state_to_json(z);
  REQUIRE(doc.is_array());
  CHECK(doc[0].contains("a"));
  CHECK(doc[0].contains("delta"));
  CHECK(doc[0].contains("species"));
  CHECK(doc[0].contains("re"));
  CHECK(doc[0].contains("im"));
  const auto back = io::state_from_json(nlohmann::json::parse(doc.dump()), set);
  CHECK(sobolev_distance(back, z, 0.0) == 0.0);
}
