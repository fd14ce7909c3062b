#include <doctest.h>

#include <cmath>
#include <limits>

#include "revnorm/io.hpp"
#include "revnorm/model.hpp"
#include "revnorm/oracle/oracle.hpp"
#include "revnorm/pseudonorm.hpp"

using namespace revnorm;
using nlohmann::json;

TEST_CASE("polynomial format") {
  const auto q = oracle::random_odd_polynomial(*IndexSet::box(2, 1), 3, 4, 6).with_parity(Parity::odd);
  const auto doc = io::polynomial_to_json(q);
  CHECK(doc.at("degree") == 3);
  CHECK(doc.at("parity") == "odd");
  REQUIRE(doc.at("terms").is_array());
  const auto& t0 = doc.at("terms")[0];
  CHECK(t0.contains("idx"));
  CHECK(t0.contains("coef"));
  CHECK(t0.at("idx")[0].size() == 4);  // a1, a2, delta, species
  const auto back = io::polynomial_from_json(json::parse(doc.dump()));
  CHECK((back - q).is_zero());
  CHECK(back.parity() == Parity::odd);
}

TEST_CASE("field format") {
  const auto f = random_reversible_field(*IndexSet::box(1, 2), 3, 2);
  const auto doc = io::field_to_json(f);
  CHECK(doc.at("terms")[0].contains("out"));
  const auto back = io::field_from_json(json::parse(doc.dump()));
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.terms()[i].coef == f.terms()[i].coef);
}

TEST_CASE("family round trip is bit exact") {
  const auto m = build_nls_model(1, 3, 7, {{2, 0, 1.0}});
  const auto fam = build_pseudonorm(m.fields, m.omega, 2.0, 4);
  const auto doc = io::family_to_json(fam);
  CHECK(doc.contains("s"));
  CHECK(doc.contains("r"));
  CHECK(doc.contains("divisor_stats"));
  CHECK(doc.contains("parts"));
  const auto back = io::family_from_json(json::parse(doc.dump()));
  CHECK(back.r == fam.r);
  CHECK(back.s == fam.s);
  REQUIRE(back.parts.size() == fam.parts.size());
  for (std::size_t k = 0; k < fam.parts.size(); ++k) {
    REQUIRE(back.parts[k].size() == fam.parts[k].size());
    for (std::size_t i = 0; i < fam.parts[k].size(); ++i) {
      CHECK(back.parts[k].terms()[i].coef == fam.parts[k].terms()[i].coef);
    }
  }
  CHECK(io::family_to_json(back).dump() == doc.dump());
}

TEST_CASE("model round trip") {
  const auto m = build_coupled_nls_model(1, 2, {1, 2}, {{2, 1, 1.0}}, {{1, 1, 0.5}});
  const auto doc = io::model_to_json(m);
  for (const char* k : {"d", "K", "n_species", "seeds", "nonlinearity", "omega", "fields", "hamiltonian"}) {
    CHECK(doc.contains(k));
  }
  const auto back = io::model_from_json(json::parse(doc.dump()));
  CHECK(io::model_to_json(back).dump() == doc.dump());
}

TEST_CASE("infinity is stored as null") {
  CHECK(io::number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(std::isinf(io::number_from_json(json(nullptr))));
  CHECK(io::number_from_json(io::number(0.1)) == 0.1);
}
