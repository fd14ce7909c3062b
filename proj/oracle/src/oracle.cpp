#include "revnorm/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>

namespace revnorm::oracle {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::vector<ModeIndex>> orderings(const MultiIndex& key) {
  std::vector<ModeIndex> t;
  for (int i = 0; i < key.degree(); ++i) t.push_back(key[i]);
  std::sort(t.begin(), t.end());
  std::vector<std::vector<ModeIndex>> out;
  do {
    out.push_back(t);
  } while (std::next_permutation(t.begin(), t.end()));
  return out;
}

MultiIndex random_key(const IndexSet& set, int degree, std::mt19937_64& rng) {
  std::vector<ModeIndex> t;
  for (int i = 0; i < degree; ++i) t.push_back(set.mode(rng() % set.size()));
  return MultiIndex::from_tuple(t);
}

}  // namespace

ScalarPolynomial brute_force_lie(const PolyVectorField& f, const ScalarPolynomial& g, const IndexSet& set) {
  if (set.size() > kMaxOracleSet || f.degree() > kMaxOracleDegree || g.degree() > kMaxOracleDegree) {
    throw CostGuardError("brute_force_lie: instance exceeds the oracle cost guard (set <= 12, degrees <= 5)");
  }
  const int out_degree = f.degree() + g.degree() - 1;
  std::map<MultiIndex, double> acc;
  // Ordered expansion of F: component -> list of (tuple, coefficient).
  std::map<ModeIndex, std::vector<std::pair<std::vector<ModeIndex>, double>>> fx;
  for (const auto& t : f.terms()) {
    const auto ords = orderings(t.in);
    for (const auto& o : ords) fx[t.out].push_back({o, t.coef / static_cast<double>(ords.size())});
  }
  for (const auto& t : g.terms()) {
    const auto ords = orderings(t.key);
    const double c = t.coef / static_cast<double>(ords.size());
    for (const auto& o : ords) {
      for (std::size_t i = 0; i < o.size(); ++i) {
        auto it = fx.find(o[i]);
        if (it == fx.end()) continue;
        std::vector<ModeIndex> rest;
        for (std::size_t k = 0; k < o.size(); ++k) {
          if (k != i) rest.push_back(o[k]);
        }
        for (const auto& [u, a] : it->second) {
          std::vector<ModeIndex> prod = rest;
          prod.insert(prod.end(), u.begin(), u.end());
          acc[MultiIndex::from_tuple(prod)] += c * a;
        }
      }
    }
  }
  std::vector<PolyTerm> terms;
  for (const auto& [k, c] : acc) {
    if (c != 0.0) terms.push_back({k, c});
  }
  return ScalarPolynomial::from_terms(out_degree, std::move(terms));
}

std::vector<cplx> finite_diff_gradient(const ScalarPolynomial& q, const StateVector& z, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_gradient: h must be > 0");
  std::vector<cplx> out(z.size());
  StateVector w = z;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const cplx orig = z[i];
    w[i] = orig + h;
    const cplx xp = poly_eval(q, w);
    w[i] = orig - h;
    const cplx xm = poly_eval(q, w);
    w[i] = orig + cplx(0.0, h);
    const cplx yp = poly_eval(q, w);
    w[i] = orig - cplx(0.0, h);
    const cplx ym = poly_eval(q, w);
    w[i] = orig;
    const cplx dx = (xp - xm) / (2.0 * h);
    const cplx dy = (yp - ym) / (2.0 * h);
    out[i] = 0.5 * (dx - cplx(0.0, 1.0) * dy);
  }
  return out;
}

namespace {

void check_grid(const Trajectory& traj) {
  if (traj.states.size() < 3) throw DomainError("finite_diff_time_derivative: need at least 3 samples");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t k = 2; k < traj.times.size(); ++k) {
    if (std::abs((traj.times[k] - traj.times[k - 1]) - h) > 1e-9 * std::abs(h) + 1e-15) {
      throw DomainError("finite_diff_time_derivative: samples are not uniformly spaced");
    }
  }
}

}  // namespace

std::vector<double> finite_diff_time_derivative(const PseudoNormFamily& fam, const Trajectory& traj) {
  check_grid(traj);
  std::vector<double> v;
  for (const auto& z : traj.states) v.push_back(pseudonorm_eval(fam, z));
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) out.push_back((v[k + 1] - v[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]));
  return out;
}

std::vector<cplx> finite_diff_time_derivative(const ScalarPolynomial& q, const Trajectory& traj) {
  check_grid(traj);
  std::vector<cplx> v;
  for (const auto& z : traj.states) v.push_back(poly_eval(q, z));
  std::vector<cplx> out;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) out.push_back((v[k + 1] - v[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]));
  return out;
}

ScalarPolynomial random_odd_polynomial(const IndexSet& set, int degree, std::uint64_t seed, int n_pairs) {
  std::mt19937_64 rng(seed);
  std::vector<PolyTerm> terms;
  int made = 0;
  for (int attempt = 0; made < n_pairs && attempt < 100 * n_pairs + 100; ++attempt) {
    const auto key = random_key(set, degree, rng);
    if (key.self_conjugate()) continue;
    const double c = 2.0 * uniform01(rng) - 1.0;
    terms.push_back({key, c});
    terms.push_back({key.conj(), -c});
    ++made;
  }
  return ScalarPolynomial::from_terms(degree, std::move(terms));
}

ScalarPolynomial random_polynomial(const IndexSet& set, int degree, std::uint64_t seed, int n_terms) {
  std::mt19937_64 rng(seed);
  std::vector<PolyTerm> terms;
  for (int i = 0; i < n_terms; ++i) {
    const auto key = random_key(set, degree, rng);
    terms.push_back({key, 2.0 * uniform01(rng) - 1.0});
  }
  return ScalarPolynomial::from_terms(degree, std::move(terms));
}

ScalarPolynomial random_even_polynomial(const IndexSet& set, int degree, std::uint64_t seed, int n_terms) {
  std::mt19937_64 rng(seed);
  std::vector<PolyTerm> terms;
  for (int i = 0; i < n_terms; ++i) {
    const auto key = random_key(set, degree, rng);
    const double c = 2.0 * uniform01(rng) - 1.0;
    terms.push_back({key, c});
    if (!key.self_conjugate()) terms.push_back({key.conj(), c});
  }
  return ScalarPolynomial::from_terms(degree, std::move(terms));
}

PolyVectorField random_sparse_field(const IndexSet& set, int degree, std::uint64_t seed, int n_pairs) {
  std::mt19937_64 rng(seed);
  std::vector<FieldTerm> terms;
  for (int i = 0; i < n_pairs; ++i) {
    const auto out = set.mode(rng() % set.size());
    const auto in = random_key(set, degree, rng);
    const double c = 2.0 * uniform01(rng) - 1.0;
    terms.push_back({out, in, c});
    terms.push_back({out.conj(), in.conj(), -c});
  }
  return PolyVectorField::from_terms(degree, std::move(terms));
}

StateVector random_state(const IndexSetPtr& set, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  StateVector z(set);
  for (auto& v : z.values()) {
    const double re = 2.0 * uniform01(rng) - 1.0;
    v = cplx(re, 2.0 * uniform01(rng) - 1.0);
  }
  return z;
}

PolyVectorField brute_force_nls_field(const IndexSet& set, const NonlinearTerm& term, int species) {
  const int d = set.dim();
  const double pi = std::acos(-1.0);
  const double norm = std::pow(2.0 * pi, -static_cast<double>(d) * (term.p + term.q - 1));
  const double power = species == 0 ? term.p : term.q;
  std::vector<FieldTerm> out;
  for (auto j : set.modes()) {
    if (j.species() != species) continue;
    const int dj = j.delta();
    // Group sizes (plus psi, plus phi, minus psi, minus phi) for this output.
    std::array<int, 4> sizes{term.p, term.q, term.p, term.q};
    sizes[static_cast<std::size_t>((dj > 0 ? 2 : 0) + species)] -= 1;
    std::array<std::vector<ModeIndex>, 4> pools;
    for (auto m : set.modes()) {
      const int g = (m.delta() > 0 ? 0 : 2) + m.species();
      if (g < 4) pools[static_cast<std::size_t>(g)].push_back(m);
    }
    std::vector<ModeIndex> tuple;
    std::function<void(int, int)> rec = [&](int group, int left) {
      if (group == 4) {
        Lattice mom{};
        for (auto m : tuple) {
          for (int i = 0; i < d; ++i) mom[static_cast<std::size_t>(i)] += m.delta() * m.a(i);
        }
        for (int i = 0; i < d; ++i) {
          if (mom[static_cast<std::size_t>(i)] != dj * j.a(i)) return;
        }
        out.push_back({j, MultiIndex::from_tuple(tuple), dj * term.lambda * power * norm});
        return;
      }
      if (left == 0) {
        const int next = group + 1;
        rec(next, next < 4 ? sizes[static_cast<std::size_t>(next)] : 0);
        return;
      }
      for (auto m : pools[static_cast<std::size_t>(group)]) {
        tuple.push_back(m);
        rec(group, left - 1);
        tuple.pop_back();
      }
    };
    rec(0, sizes[0]);
  }
  return PolyVectorField::from_terms(term.field_degree(), std::move(out));
}

}  // namespace revnorm::oracle
