#include "revnorm/io.hpp"

#include <cmath>
#include <limits>

#include "revnorm/error.hpp"

namespace revnorm::io {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from_json(const json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

json mode_to_json(ModeIndex j) {
  json out = json::array();
  for (int i = 0; i < j.dim(); ++i) out.push_back(j.a(i));
  out.push_back(j.delta());
  out.push_back(j.species());
  return out;
}

ModeIndex mode_from_json(const json& v) {
  if (!v.is_array() || v.size() < 3 || v.size() > static_cast<std::size_t>(kMaxDim) + 2) {
    throw DomainError("mode index must be [a_1, ..., a_d, delta, species], got " + v.dump());
  }
  std::vector<int> a;
  for (std::size_t i = 0; i + 2 < v.size(); ++i) a.push_back(v[i].get<int>());
  return ModeIndex(a, v[v.size() - 2].get<int>(), v[v.size() - 1].get<int>());
}

json multi_index_to_json(const MultiIndex& m) {
  json out = json::array();
  for (int i = 0; i < m.degree(); ++i) out.push_back(mode_to_json(m[i]));
  return out;
}

MultiIndex multi_index_from_json(const json& v) {
  std::vector<ModeIndex> modes;
  for (const auto& e : v) modes.push_back(mode_from_json(e));
  return MultiIndex::from_tuple(modes);
}

json state_to_json(const StateVector& z) {
  json out = json::array();
  const auto& set = *z.index_set();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto j = set.mode(i);
    json a = json::array();
    for (int k = 0; k < j.dim(); ++k) a.push_back(j.a(k));
    out.push_back({{"a", a}, {"delta", j.delta()}, {"species", j.species()}, {"re", z[i].real()}, {"im", z[i].imag()}});
  }
  return out;
}

StateVector state_from_json(const json& v, const IndexSetPtr& set) {
  StateVector z(set);
  for (const auto& e : v) {
    std::vector<int> a = e.at("a").get<std::vector<int>>();
    const ModeIndex j(a, e.at("delta").get<int>(), e.value("species", 0));
    z.set(j, cplx(e.at("re").get<double>(), e.at("im").get<double>()));
  }
  return z;
}

json polynomial_to_json(const ScalarPolynomial& q) {
  json terms = json::array();
  for (const auto& t : q.terms()) terms.push_back({{"idx", multi_index_to_json(t.key)}, {"coef", t.coef}});
  return {{"degree", q.degree()}, {"parity", std::string(to_string(q.parity()))}, {"terms", terms}};
}

ScalarPolynomial polynomial_from_json(const json& v) {
  std::vector<PolyTerm> terms;
  for (const auto& t : v.at("terms")) terms.push_back({multi_index_from_json(t.at("idx")), t.at("coef").get<double>()});
  auto q = ScalarPolynomial::from_terms(v.at("degree").get<int>(), std::move(terms));
  const auto parity = parity_from_string(v.value("parity", std::string("unknown")));
  return q.with_parity(parity);
}

json field_to_json(const PolyVectorField& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    terms.push_back({{"out", mode_to_json(t.out)}, {"idx", multi_index_to_json(t.in)}, {"coef", t.coef}});
  }
  return {{"degree", f.degree()}, {"terms", terms}};
}

PolyVectorField field_from_json(const json& v) {
  std::vector<FieldTerm> terms;
  for (const auto& t : v.at("terms")) {
    terms.push_back({mode_from_json(t.at("out")), multi_index_from_json(t.at("idx")), t.at("coef").get<double>()});
  }
  return PolyVectorField::from_terms(v.at("degree").get<int>(), std::move(terms));
}

json family_to_json(const PseudoNormFamily& fam) {
  json stats = json::array();
  json parts = json::array();
  for (std::size_t i = 0; i < fam.parts.size(); ++i) {
    stats.push_back({{"order", static_cast<int>(i) + 2},
                     {"min_divisor", number(fam.min_divisor[i])},
                     {"class_constant", number(fam.class_constants.at(i))},
                     {"terms", fam.parts[i].size()}});
    parts.push_back(polynomial_to_json(fam.parts[i]));
  }
  json sources = json::array();
  for (const auto& g : fam.sources) sources.push_back(polynomial_to_json(g));
  return {{"s", fam.s},         {"r", fam.r},          {"res_tol", fam.res_tol}, {"class_gamma", fam.class_gamma},
          {"divisor_stats", stats}, {"parts", parts}, {"sources", sources}};
}

PseudoNormFamily family_from_json(const json& v) {
  PseudoNormFamily fam;
  fam.s = v.at("s").get<double>();
  fam.r = v.at("r").get<int>();
  fam.res_tol = v.value("res_tol", kDefaultResTol);
  fam.class_gamma = v.value("class_gamma", 0.0);
  for (const auto& p : v.at("parts")) fam.parts.push_back(polynomial_from_json(p));
  if (v.contains("sources")) {
    for (const auto& g : v.at("sources")) fam.sources.push_back(polynomial_from_json(g));
  }
  for (const auto& st : v.at("divisor_stats")) {
    fam.min_divisor.push_back(number_from_json(st.at("min_divisor")));
    fam.class_constants.push_back(number_from_json(st.at("class_constant")));
  }
  if (static_cast<int>(fam.parts.size()) != fam.r - 1) throw DomainError("family file: expected r - 1 parts");
  for (std::size_t i = 0; i < fam.parts.size(); ++i) {
    if (fam.parts[i].degree() != static_cast<int>(i) + 2) throw DomainError("family file: part degrees out of order");
  }
  return fam;
}

namespace {

json nonlinearity_to_json(const Nonlinearity& nl) {
  json out = json::array();
  for (const auto& t : nl) out.push_back({{"p", t.p}, {"q", t.q}, {"lambda", t.lambda}});
  return out;
}

Nonlinearity nonlinearity_from_json(const json& v) {
  Nonlinearity nl;
  for (const auto& t : v) nl.push_back({t.at("p").get<int>(), t.value("q", 0), t.value("lambda", 1.0)});
  return nl;
}

}  // namespace

json model_to_json(const ModelSpec& m) {
  json omega = json::array();
  for (std::size_t i = 0; i < m.set->size(); ++i) {
    const auto j = m.set->mode(i);
    if (j.delta() < 0) continue;
    json a = json::array();
    for (int k = 0; k < j.dim(); ++k) a.push_back(j.a(k));
    omega.push_back({{"a", a}, {"species", j.species()}, {"omega", m.omega[i]}});
  }
  json fields = json::array();
  for (const auto& f : m.fields) fields.push_back(field_to_json(f));
  json nls = json::array();
  for (const auto& nl : m.nonlinearity) nls.push_back(nonlinearity_to_json(nl));
  json descr = json::array();
  for (const auto& nl : m.nonlinearity) descr.push_back(describe(nl));
  return {{"kind", m.kind},
          {"d", m.d},
          {"K", m.K},
          {"n_species", m.n_species},
          {"seeds", m.seeds},
          {"nonlinearity", nls},
          {"nonlinearity_text", descr},
          {"frequency_convention", std::string(to_string(m.options.convention))},
          {"potential", std::string(to_string(m.options.potential))},
          {"truncation", "box"},
          {"hamiltonian", m.hamiltonian},
          {"omega", omega},
          {"fields", fields}};
}

ModelSpec model_from_json(const json& v) {
  ModelSpec m;
  m.kind = v.value("kind", std::string("nls"));
  m.d = v.at("d").get<int>();
  m.K = v.at("K").get<int>();
  m.n_species = v.value("n_species", 1);
  m.set = IndexSet::box(m.d, m.K, m.n_species);
  m.seeds = v.value("seeds", std::vector<std::uint64_t>{});
  for (const auto& nl : v.value("nonlinearity", json::array())) m.nonlinearity.push_back(nonlinearity_from_json(nl));
  m.options.convention = frequency_convention_from_string(v.value("frequency_convention", std::string("laplacian")));
  m.options.potential = potential_kind_from_string(v.value("potential", std::string("random")));
  m.hamiltonian = v.value("hamiltonian", false);
  std::unordered_map<ModeIndex, double> positive;
  for (const auto& e : v.at("omega")) {
    positive[ModeIndex(e.at("a").get<std::vector<int>>(), +1, e.value("species", 0))] = e.at("omega").get<double>();
  }
  if (positive.size() * 2 != m.set->size()) throw DomainError("model file: omega must list every (a, species) once");
  m.omega = FrequencyMap(m.set, positive);
  for (const auto& f : v.at("fields")) m.fields.push_back(field_from_json(f));
  for (std::size_t i = 0; i < m.fields.size(); ++i) {
    if (m.fields[i].degree() != static_cast<int>(i) + 2) throw DomainError("model file: fields out of degree order");
  }
  return m;
}

json report_to_json(const ResonanceReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json item = {{"idx", multi_index_to_json(e.key)}, {"text", e.key.to_string()}, {"omega", e.omega}};
    if (e.coefficient != 0.0) item["coefficient"] = e.coefficient;
    entries.push_back(item);
  }
  return {{"threshold", r.threshold},
          {"total", r.total},
          {"order", r.order},
          {"smallest_surviving_divisor", number(r.smallest_surviving_divisor)},
          {"resonances", entries}};
}

json scan_to_json(const NonResonanceScan& scan) {
  json buckets = json::array();
  for (const auto& b : scan.buckets) {
    buckets.push_back({{"mu", b.mu}, {"mu_sq", b.mu_sq}, {"min_abs_omega", number(b.min_abs_omega)}, {"count", b.count}});
  }
  return {{"report", report_to_json(scan.report)},
          {"max_size", scan.max_size},
          {"scanned", scan.scanned},
          {"min_abs_omega", number(scan.min_abs_omega)},
          {"gamma", number(scan.gamma)},
          {"alpha", scan.alpha},
          {"buckets", buckets}};
}

}  // namespace revnorm::io
