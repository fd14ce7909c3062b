#include "revnorm/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "revnorm/diagnostics.hpp"
#include "revnorm/error.hpp"

namespace revnorm {

std::string describe(const Nonlinearity& nl) {
  std::ostringstream os;
  for (std::size_t i = 0; i < nl.size(); ++i) {
    if (i > 0) os << " + ";
    os << nl[i].lambda << "*|psi|^" << 2 * nl[i].p;
    if (nl[i].q > 0) os << "|phi|^" << 2 * nl[i].q;
  }
  return os.str();
}

std::string_view to_string(FrequencyConvention c) {
  return c == FrequencyConvention::laplacian ? "laplacian" : "weight";
}

FrequencyConvention frequency_convention_from_string(std::string_view s) {
  if (s == "laplacian") return FrequencyConvention::laplacian;
  if (s == "weight") return FrequencyConvention::weight;
  throw DomainError("unknown frequency convention '" + std::string(s) + "'");
}

std::string_view to_string(PotentialKind k) { return k == PotentialKind::random ? "random" : "zero"; }

PotentialKind potential_kind_from_string(std::string_view s) {
  if (s == "random") return PotentialKind::random;
  if (s == "zero") return PotentialKind::zero;
  throw DomainError("unknown potential kind '" + std::string(s) + "'");
}

int ModelSpec::max_degree() const {
  int m = 0;
  for (const auto& f : fields) {
    if (!f.is_zero()) m = std::max(m, f.degree());
  }
  return m;
}

std::vector<double> uniform_draws(std::uint64_t seed, std::size_t n) {
  // std::uniform_real_distribution is implementation defined; the top 53
  // bits of the engine output are not.
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return out;
}

FrequencyMap nls_frequencies(const IndexSetPtr& set, std::span<const std::uint64_t> seeds,
                             const ModelOptions& options) {
  if (seeds.size() < static_cast<std::size_t>(set->n_species())) {
    throw DomainError("nls_frequencies: one seed per species required");
  }
  std::unordered_map<ModeIndex, double> positive;
  for (int sp = 0; sp < set->n_species(); ++sp) {
    std::vector<ModeIndex> modes;
    for (auto j : set->modes()) {
      if (j.delta() > 0 && j.species() == sp) modes.push_back(j);
    }
    std::vector<double> v(modes.size(), 0.0);
    if (options.potential == PotentialKind::random) v = uniform_draws(seeds[static_cast<std::size_t>(sp)], modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto lap = options.convention == FrequencyConvention::laplacian ? modes[i].laplacian() : modes[i].weight_sq();
      positive[modes[i]] = static_cast<double>(lap) + v[i];
    }
  }
  return FrequencyMap(set, positive);
}

namespace {

struct Group {
  std::vector<ModeIndex> modes;
  Lattice momentum{};
  double count = 1.0;  // ordered tuples representing the multiset
};

void enumerate_multisets(std::span<const ModeIndex> pool, int size,
                         const std::function<void(std::span<const ModeIndex>)>& fn) {
  std::vector<ModeIndex> stack(static_cast<std::size_t>(size));
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int depth) {
    if (depth == size) {
      fn(stack);
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      stack[static_cast<std::size_t>(depth)] = pool[i];
      rec(i, depth + 1);
    }
  };
  rec(0, 0);
}

Lattice signed_momentum(std::span<const ModeIndex> modes) {
  Lattice m{};
  for (auto j : modes) {
    for (int i = 0; i < j.dim(); ++i) m[static_cast<std::size_t>(i)] += j.delta() * j.a(i);
  }
  return m;
}

std::vector<Group> groups_of(const IndexSet& set, int species, int delta, int size) {
  std::vector<Group> out;
  if (size == 0) {
    out.push_back({});
    return out;
  }
  std::vector<ModeIndex> pool;
  for (auto j : set.modes()) {
    if (j.species() == species && j.delta() == delta) pool.push_back(j);
  }
  enumerate_multisets(pool, size, [&](std::span<const ModeIndex> ms) {
    Group g;
    g.modes.assign(ms.begin(), ms.end());
    g.momentum = signed_momentum(ms);
    g.count = MultiIndex::from_tuple(ms).orderings();
    out.push_back(std::move(g));
  });
  return out;
}

std::vector<Group> combine(const std::vector<Group>& a, const std::vector<Group>& b) {
  std::vector<Group> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      Group g;
      g.modes = x.modes;
      g.modes.insert(g.modes.end(), y.modes.begin(), y.modes.end());
      for (std::size_t i = 0; i < g.momentum.size(); ++i) g.momentum[i] = x.momentum[i] + y.momentum[i];
      g.count = x.count * y.count;
      out.push_back(std::move(g));
    }
  }
  return out;
}

void validate_nonlinearity(const Nonlinearity& nl, int n_species) {
  if (nl.empty()) throw DomainError("nonlinearity must have at least one term");
  for (const auto& t : nl) {
    if (t.p < 0 || t.q < 0 || t.p + t.q < 2) throw DomainError("nonlinear term must have total degree 2(p+q) >= 4");
    if (n_species == 1 && t.q != 0) throw DomainError("single-species nonlinearity cannot involve phi");
    if (!std::isfinite(t.lambda)) throw DomainError("non-finite nonlinear coefficient");
    if (t.field_degree() > kMaxDegree) throw DomainError("nonlinearity degree exceeds limit");
  }
}

TaylorFields assemble_fields(std::vector<FieldTerm> terms) {
  std::map<int, std::vector<FieldTerm>> by_degree;
  for (auto& t : terms) by_degree[t.in.degree()].push_back(t);
  TaylorFields out;
  for (auto& [deg, ts] : by_degree) {
    while (static_cast<int>(out.size()) + 2 < deg) out.emplace_back(static_cast<int>(out.size()) + 2);
    out.push_back(PolyVectorField::from_terms(deg, std::move(ts)));
  }
  return out;
}

void verify_model(const ModelSpec& m) {
  if (!m.omega.antisymmetric()) throw DomainError("model frequencies are not antisymmetric");
  for (const auto& f : m.fields) {
    const auto rep = check_field_symmetry(f);
    if (!rep.ok()) throw ParityError("model field of degree " + std::to_string(f.degree()) + ": " + rep.summary());
  }
}

}  // namespace

std::vector<ScalarPolynomial> nls_energy(const IndexSet& set, const Nonlinearity& nl) {
  const int d = set.dim();
  std::map<int, PolyAccumulator> acc;
  for (const auto& t : nl) {
    const int deg = 2 * (t.p + t.q);
    const double norm = std::pow(2.0 * std::acos(-1.0), -0.5 * d * (deg - 2));
    auto plus = combine(groups_of(set, 0, +1, t.p), groups_of(set, 1, +1, t.q));
    auto minus = combine(groups_of(set, 0, -1, t.p), groups_of(set, 1, -1, t.q));
    std::map<Lattice, std::vector<std::size_t>> by_momentum;
    for (std::size_t i = 0; i < minus.size(); ++i) by_momentum[minus[i].momentum].push_back(i);
    auto [it, inserted] = acc.try_emplace(deg, deg);
    for (const auto& x : plus) {
      Lattice need{};
      for (std::size_t i = 0; i < need.size(); ++i) need[i] = -x.momentum[i];
      auto hit = by_momentum.find(need);
      if (hit == by_momentum.end()) continue;
      for (auto i : hit->second) {
        std::vector<ModeIndex> modes = x.modes;
        modes.insert(modes.end(), minus[i].modes.begin(), minus[i].modes.end());
        it->second.add(MultiIndex::from_tuple(modes), t.lambda * norm * x.count * minus[i].count);
      }
    }
  }
  std::vector<ScalarPolynomial> out;
  for (const auto& [deg, a] : acc) out.push_back(a.finish());
  return out;
}

void add_hamiltonian_field(const ScalarPolynomial& energy, int species, std::vector<FieldTerm>& out) {
  for (const auto& t : energy.terms()) {
    for_each_partial(t.key, [&](ModeIndex ell, int mult, const MultiIndex& reduced) {
      if (ell.species() != species) return;
      const double c = t.coef * static_cast<double>(mult);
      // dP/dz_{(a,-)} drives (a,+); -dP/dz_{(a,+)} drives (a,-).
      out.push_back({ell.conj(), reduced, ell.delta() < 0 ? c : -c});
    });
  }
}

ModelSpec build_nls_model(int d, int K, std::uint64_t potential_seed, const Nonlinearity& nl,
                          const ModelOptions& options) {
  if (K < 1) throw DomainError("build_nls_model: K must be >= 1");
  validate_nonlinearity(nl, 1);
  ModelSpec m;
  m.kind = "nls";
  m.d = d;
  m.K = K;
  m.n_species = 1;
  m.set = IndexSet::box(d, K, 1);
  m.seeds = {potential_seed};
  m.omega = nls_frequencies(m.set, m.seeds, options);
  std::vector<FieldTerm> terms;
  for (const auto& p : nls_energy(*m.set, nl)) add_hamiltonian_field(p, 0, terms);
  m.fields = assemble_fields(std::move(terms));
  m.nonlinearity = {nl};
  m.hamiltonian = true;
  m.options = options;
  verify_model(m);
  return m;
}

ModelSpec build_coupled_nls_model(int d, int K, std::array<std::uint64_t, 2> seeds, const Nonlinearity& nl1,
                                  const Nonlinearity& nl2, const ModelOptions& options) {
  if (K < 1) throw DomainError("build_coupled_nls_model: K must be >= 1");
  validate_nonlinearity(nl1, 2);
  validate_nonlinearity(nl2, 2);
  ModelSpec m;
  m.kind = "coupled_nls";
  m.d = d;
  m.K = K;
  m.n_species = 2;
  m.set = IndexSet::box(d, K, 2);
  m.seeds = {seeds[0], seeds[1]};
  m.omega = nls_frequencies(m.set, m.seeds, options);
  std::vector<FieldTerm> terms;
  for (const auto& p : nls_energy(*m.set, nl1)) add_hamiltonian_field(p, 0, terms);
  for (const auto& p : nls_energy(*m.set, nl2)) add_hamiltonian_field(p, 1, terms);
  m.fields = assemble_fields(std::move(terms));
  m.nonlinearity = {nl1, nl2};
  m.hamiltonian = nl1 == nl2;
  m.options = options;
  verify_model(m);
  return m;
}

ModelSpec build_free_model(int d, int K, std::uint64_t potential_seed, const ModelOptions& options) {
  ModelSpec m;
  m.kind = "free";
  m.d = d;
  m.K = K;
  m.set = IndexSet::box(d, K, 1);
  m.seeds = {potential_seed};
  m.omega = nls_frequencies(m.set, m.seeds, options);
  m.hamiltonian = true;
  m.options = options;
  return m;
}

PolyVectorField random_reversible_field(const IndexSet& set, int degree, std::uint64_t seed, double scale) {
  if (degree < 2 || degree > kMaxDegree) throw DomainError("random_reversible_field: degree out of range");
  std::map<Lattice, std::vector<MultiIndex>> by_momentum;
  enumerate_multisets(set.modes(), degree, [&](std::span<const ModeIndex> ms) {
    by_momentum[signed_momentum(ms)].push_back(MultiIndex::from_tuple(ms));
  });
  std::mt19937_64 rng(seed);
  std::vector<FieldTerm> terms;
  for (auto j : set.modes()) {
    if (j.delta() < 0) continue;
    const auto hit = by_momentum.find(signed_momentum(std::span<const ModeIndex>(&j, 1)));
    if (hit == by_momentum.end()) continue;
    for (const auto& ll : hit->second) {
      const double c = scale * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
      terms.push_back({j, ll, c});
      terms.push_back({j.conj(), ll.conj(), -c});
    }
  }
  return PolyVectorField::from_terms(degree, std::move(terms));
}

ModelSpec build_synthetic_model(int d, int K, std::uint64_t seed, std::span<const int> degrees, double scale,
                                const ModelOptions& options) {
  ModelSpec m = build_free_model(d, K, seed, options);
  m.kind = "synthetic";
  m.hamiltonian = false;
  std::vector<int> degs(degrees.begin(), degrees.end());
  std::sort(degs.begin(), degs.end());
  degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
  for (int deg : degs) {
    while (static_cast<int>(m.fields.size()) + 2 < deg) m.fields.emplace_back(static_cast<int>(m.fields.size()) + 2);
    m.fields.push_back(random_reversible_field(*m.set, deg, seed + 1000003ULL * static_cast<std::uint64_t>(deg), scale));
  }
  verify_model(m);
  return m;
}

std::size_t count_momentum_violations(const PolyVectorField& f) {
  std::size_t bad = 0;
  for (const auto& t : f.terms()) {
    const auto in = signed_momentum(std::span<const ModeIndex>(&t.out, 1));
    std::vector<ModeIndex> modes;
    for (int i = 0; i < t.in.degree(); ++i) modes.push_back(t.in[i]);
    if (signed_momentum(modes) != in) ++bad;
  }
  return bad;
}

std::size_t count_gauge_violations(const ScalarPolynomial& q) {
  std::size_t bad = 0;
  for (const auto& t : q.terms()) {
    std::array<int, kMaxSpecies + 1> balance{};
    for (int i = 0; i < t.key.degree(); ++i) balance[static_cast<std::size_t>(t.key[i].species())] += t.key[i].delta();
    if (std::any_of(balance.begin(), balance.end(), [](int b) { return b != 0; })) ++bad;
  }
  return bad;
}

}  // namespace revnorm
