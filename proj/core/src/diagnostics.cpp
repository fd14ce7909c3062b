#include "revnorm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "revnorm/error.hpp"

namespace revnorm {

bool has_parity(const ScalarPolynomial& q, Parity p, double tol) {
  if (p != Parity::even && p != Parity::odd) return false;
  const double sign = p == Parity::even ? 1.0 : -1.0;
  const double scale = tol * q.max_abs_coefficient();
  for (const auto& t : q.terms()) {
    if (std::abs(q.coefficient(t.key.conj()) - sign * t.coef) > scale) return false;
  }
  return true;
}

Parity parity_classify(const ScalarPolynomial& q, double tol) {
  if (has_parity(q, Parity::even, tol)) return Parity::even;
  if (has_parity(q, Parity::odd, tol)) return Parity::odd;
  return Parity::neither;
}

double gamma_class_constant(const ScalarPolynomial& q, double gamma, double s) {
  if (gamma < 0 || s < 0) throw DomainError("gamma_class_constant: gamma and s must be >= 0");
  double c = 0.0;
  for (const auto& t : q.terms()) {
    const auto st = mu_S_beta(t.key);
    const double bound = std::pow(st.mu, gamma) * std::pow(st.beta, s) / ((1.0 + st.S) * (1.0 + st.S));
    c = std::max(c, std::abs(t.coef) / bound);
  }
  return c;
}

double tclass_constant(const PolyVectorField& f, double M, double nu, TclassFormula formula) {
  if (M < 0 || nu < 0) throw DomainError("tclass_constant: M and nu must be >= 0");
  double c = 0.0;
  for (const auto& t : f.terms()) {
    const auto st = mu_S_beta(t.out, t.in);
    const double denom = formula == TclassFormula::sum_of_power ? st.mu + std::pow(st.S, M) : std::pow(st.mu + st.S, M);
    const double bound = std::pow(st.mu, M + nu) / denom;
    c = std::max(c, std::abs(t.coef) / bound);
  }
  return c;
}

namespace {

template <class Fn>
void for_each_multiset(std::size_t n, int k, Fn&& fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    fn(std::span<const std::size_t>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - 1) --i;
    if (i < 0) return;
    const std::size_t v = idx[static_cast<std::size_t>(i)] + 1;
    for (int l = i; l < k; ++l) idx[static_cast<std::size_t>(l)] = v;
  }
}

}  // namespace

double class_bound_constant(const IndexSet& set, int k, double s, double gamma) {
  if (k < 1 || k > kMaxDegree) throw DomainError("class_bound_constant: bad degree");
  std::vector<ModeIndex> tuple(static_cast<std::size_t>(k));
  double total = 0.0;
  for_each_multiset(set.size(), k, [&](std::span<const std::size_t> idx) {
    double wprod = 1.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      tuple[i] = set.mode(idx[i]);
      wprod *= std::pow(weight(tuple[i]), s);
    }
    const auto st = mu_S_beta(MultiIndex::from_tuple(tuple));
    total += std::pow(st.mu, gamma) * std::pow(st.beta, s) / ((1.0 + st.S) * (1.0 + st.S) * wprod);
  });
  return total;
}

std::string SymmetryReport::summary() const {
  std::ostringstream os;
  os << violations.size() << " antisymmetry violation(s), " << non_real.size() << " non-real coefficient(s)";
  for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 5); ++i) {
    const auto& v = violations[i];
    os << "\n  a[" << v.out.to_string() << "," << v.in.to_string() << "] = " << v.coef << ", partner " << v.partner;
  }
  return os.str();
}

SymmetryReport check_field_symmetry(const PolyVectorField& f, double tol) {
  SymmetryReport rep;
  const double scale = tol * f.max_abs_coefficient();
  for (const auto& t : f.terms()) {
    const double partner = f.coefficient(t.out.conj(), t.in.conj());
    if (std::abs(partner + t.coef) > scale) rep.violations.push_back({t.out, t.in, t.coef, partner});
  }
  return rep;
}

SymmetryReport check_field_symmetry(std::span<const std::tuple<ModeIndex, MultiIndex, cplx>> terms, double tol) {
  SymmetryReport rep;
  std::map<std::pair<ModeIndex, MultiIndex>, cplx> table;
  double max_abs = 0.0;
  for (const auto& [out, in, c] : terms) {
    table[{out, in}] += c;
    max_abs = std::max(max_abs, std::abs(c));
  }
  const double scale = tol * max_abs;
  for (const auto& [key, c] : table) {
    if (std::abs(c.imag()) > scale) rep.non_real.push_back({key.first, key.second, c});
    auto it = table.find({key.first.conj(), key.second.conj()});
    const double partner = it == table.end() ? 0.0 : it->second.real();
    if (std::abs(partner + c.real()) > scale) rep.violations.push_back({key.first, key.second, c.real(), partner});
  }
  return rep;
}

}  // namespace revnorm
