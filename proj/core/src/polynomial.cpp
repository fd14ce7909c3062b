#include "revnorm/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "revnorm/error.hpp"

namespace revnorm {

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::neither: return "neither";
    case Parity::unknown: return "unknown";
  }
  return "unknown";
}

Parity parity_from_string(std::string_view s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  if (s == "neither") return Parity::neither;
  if (s == "unknown") return Parity::unknown;
  throw DomainError("unknown parity tag '" + std::string(s) + "'");
}

namespace {

void check_degree(int expected, const MultiIndex& key) {
  if (key.degree() != expected) {
    throw DomainError("term " + key.to_string() + " has degree " + std::to_string(key.degree()) +
                      ", expected " + std::to_string(expected));
  }
}

void check_finite(double c) {
  if (!std::isfinite(c)) throw DomainError("non-finite coefficient");
}

}  // namespace

ScalarPolynomial ScalarPolynomial::from_terms(int degree, std::vector<PolyTerm> terms) {
  if (degree < 1 || degree > kMaxDegree) throw DomainError("polynomial degree out of range");
  for (const auto& t : terms) {
    check_degree(degree, t.key);
    check_finite(t.coef);
  }
  std::sort(terms.begin(), terms.end(), [](const PolyTerm& a, const PolyTerm& b) { return a.key < b.key; });
  ScalarPolynomial q(degree);
  for (const auto& t : terms) {
    if (!q.terms_.empty() && q.terms_.back().key == t.key) {
      q.terms_.back().coef += t.coef;
    } else {
      q.terms_.push_back(t);
    }
  }
  std::erase_if(q.terms_, [](const PolyTerm& t) { return t.coef == 0.0; });
  return q;
}

ScalarPolynomial ScalarPolynomial::from_complex_terms(int degree, std::span<const std::pair<MultiIndex, cplx>> terms) {
  std::vector<PolyTerm> real_terms;
  real_terms.reserve(terms.size());
  for (const auto& [key, c] : terms) {
    if (c.imag() != 0.0) throw DomainError("complex coefficient on " + key.to_string() + " rejected");
    real_terms.push_back({key, c.real()});
  }
  return from_terms(degree, std::move(real_terms));
}

double ScalarPolynomial::coefficient(const MultiIndex& key) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const PolyTerm& t, const MultiIndex& k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->coef : 0.0;
}

double ScalarPolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coef));
  return m;
}

ScalarPolynomial ScalarPolynomial::with_parity(Parity p, double tol) const {
  const double scale = tol * max_abs_coefficient();
  if (p == Parity::even || p == Parity::odd) {
    const double sign = p == Parity::even ? 1.0 : -1.0;
    for (const auto& t : terms_) {
      if (std::abs(coefficient(t.key.conj()) - sign * t.coef) > scale) {
        throw ParityError("polynomial is not " + std::string(to_string(p)) + " at " + t.key.to_string());
      }
    }
  }
  ScalarPolynomial q = *this;
  q.parity_ = p;
  return q;
}

ScalarPolynomial ScalarPolynomial::scaled(double factor) const {
  ScalarPolynomial q(degree_);
  if (factor == 0.0) return q;
  q.terms_ = terms_;
  for (auto& t : q.terms_) t.coef *= factor;
  q.parity_ = parity_;
  return q;
}

ScalarPolynomial ScalarPolynomial::operator+(const ScalarPolynomial& other) const {
  if (other.degree_ != degree_) throw DomainError("adding polynomials of different degree");
  std::vector<PolyTerm> all(terms_.begin(), terms_.end());
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return from_terms(degree_, std::move(all));
}

ScalarPolynomial ScalarPolynomial::operator-(const ScalarPolynomial& other) const { return *this + other.scaled(-1.0); }

ScalarPolynomial PolyAccumulator::finish() const {
  std::vector<PolyTerm> terms;
  terms.reserve(acc_.size());
  for (const auto& [k, c] : acc_) {
    if (c != 0.0) terms.push_back({k, c});
  }
  return ScalarPolynomial::from_terms(degree_, std::move(terms));
}

PolyVectorField PolyVectorField::from_terms(int degree, std::vector<FieldTerm> terms) {
  if (degree < 1 || degree > kMaxDegree) throw DomainError("vector field degree out of range");
  for (const auto& t : terms) {
    check_degree(degree, t.in);
    check_finite(t.coef);
    if (!t.in.empty() && t.in[0].dim() != t.out.dim()) throw DomainError("vector field term mixes lattice dimensions");
  }
  auto less = [](const FieldTerm& a, const FieldTerm& b) {
    if (a.out != b.out) return a.out < b.out;
    return a.in < b.in;
  };
  std::sort(terms.begin(), terms.end(), less);
  PolyVectorField f(degree);
  for (const auto& t : terms) {
    if (!f.terms_.empty() && f.terms_.back().out == t.out && f.terms_.back().in == t.in) {
      f.terms_.back().coef += t.coef;
    } else {
      f.terms_.push_back(t);
    }
  }
  std::erase_if(f.terms_, [](const FieldTerm& t) { return t.coef == 0.0; });
  return f;
}

PolyVectorField PolyVectorField::from_complex_terms(int degree,
                                                    std::span<const std::tuple<ModeIndex, MultiIndex, cplx>> terms) {
  std::vector<FieldTerm> real_terms;
  real_terms.reserve(terms.size());
  for (const auto& [out, in, c] : terms) {
    if (c.imag() != 0.0) {
      throw DomainError("complex coefficient on " + out.to_string() + " x " + in.to_string() + " rejected");
    }
    real_terms.push_back({out, in, c.real()});
  }
  return from_terms(degree, std::move(real_terms));
}

std::span<const FieldTerm> PolyVectorField::component(ModeIndex out) const {
  auto lo = std::lower_bound(terms_.begin(), terms_.end(), out,
                             [](const FieldTerm& t, ModeIndex j) { return t.out < j; });
  auto hi = std::upper_bound(lo, terms_.end(), out, [](ModeIndex j, const FieldTerm& t) { return j < t.out; });
  return {lo, hi};
}

double PolyVectorField::coefficient(ModeIndex out, const MultiIndex& in) const {
  const auto comp = component(out);
  auto it = std::lower_bound(comp.begin(), comp.end(), in, [](const FieldTerm& t, const MultiIndex& m) { return t.in < m; });
  return it != comp.end() && it->in == in ? it->coef : 0.0;
}

double PolyVectorField::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coef));
  return m;
}

PolyVectorField PolyVectorField::scaled(double factor) const {
  PolyVectorField f(degree_);
  if (factor == 0.0) return f;
  f.terms_ = terms_;
  for (auto& t : f.terms_) t.coef *= factor;
  return f;
}

cplx monomial_value(const MultiIndex& key, const StateVector& z) {
  cplx v = 1.0;
  for (auto c : key.codes()) v *= z.at(ModeIndex::from_code(c));
  return v;
}

cplx poly_eval(const ScalarPolynomial& q, const StateVector& z) {
  cplx acc = 0.0;
  for (const auto& t : q.terms()) acc += t.coef * monomial_value(t.key, z);
  return acc;
}

std::vector<cplx> poly_gradient(const ScalarPolynomial& q, const StateVector& z) {
  std::vector<cplx> grad(z.size(), cplx{});
  const auto& set = *z.index_set();
  for (const auto& t : q.terms()) {
    for_each_partial(t.key, [&](ModeIndex ell, int mult, const MultiIndex& reduced) {
      grad[set.position(ell)] += t.coef * static_cast<double>(mult) * monomial_value(reduced, z);
    });
  }
  return grad;
}

std::vector<cplx> field_eval(const PolyVectorField& f, const StateVector& z) {
  std::vector<cplx> out(z.size(), cplx{});
  const auto& set = *z.index_set();
  for (const auto& t : f.terms()) out[set.position(t.out)] += t.coef * monomial_value(t.in, z);
  return out;
}

CompiledPolynomial::CompiledPolynomial(const ScalarPolynomial& q, const IndexSet& set) : degree_(q.degree()) {
  coef_.reserve(q.size());
  pos_.reserve(q.size() * static_cast<std::size_t>(degree_));
  for (const auto& t : q.terms()) {
    coef_.push_back(t.coef);
    for (auto c : t.key.codes()) pos_.push_back(static_cast<std::uint32_t>(set.position(ModeIndex::from_code(c))));
  }
}

cplx CompiledPolynomial::value(std::span<const cplx> z) const {
  cplx acc = 0.0;
  const std::uint32_t* p = pos_.data();
  const auto k = static_cast<std::size_t>(degree_);
  for (std::size_t t = 0; t < coef_.size(); ++t, p += k) {
    cplx m = z[p[0]];
    for (std::size_t i = 1; i < k; ++i) m *= z[p[i]];
    acc += coef_[t] * m;
  }
  return acc;
}

void CompiledPolynomial::add_gradient(std::span<const cplx> z, std::span<cplx> grad, double scale) const {
  const auto k = static_cast<std::size_t>(degree_);
  std::array<cplx, kMaxDegree + 1> prefix{};
  std::array<cplx, kMaxDegree + 1> suffix{};
  const std::uint32_t* p = pos_.data();
  for (std::size_t t = 0; t < coef_.size(); ++t, p += k) {
    prefix[0] = 1.0;
    for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * z[p[i]];
    suffix[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * z[p[i]];
    const double c = scale * coef_[t];
    for (std::size_t i = 0; i < k; ++i) grad[p[i]] += c * (prefix[i] * suffix[i + 1]);
  }
}

CompiledField::CompiledField(const PolyVectorField& f, const IndexSet& set) : degree_(f.degree()) {
  out_.reserve(f.size());
  coef_.reserve(f.size());
  pos_.reserve(f.size() * static_cast<std::size_t>(degree_));
  for (const auto& t : f.terms()) {
    out_.push_back(static_cast<std::uint32_t>(set.position(t.out)));
    coef_.push_back(t.coef);
    for (auto c : t.in.codes()) pos_.push_back(static_cast<std::uint32_t>(set.position(ModeIndex::from_code(c))));
  }
}

void CompiledField::apply(std::span<const cplx> z, std::span<cplx> out, cplx scale) const {
  const auto k = static_cast<std::size_t>(degree_);
  const std::uint32_t* p = pos_.data();
  for (std::size_t t = 0; t < coef_.size(); ++t, p += k) {
    cplx m = z[p[0]];
    for (std::size_t i = 1; i < k; ++i) m *= z[p[i]];
    out[out_[t]] += scale * (coef_[t] * m);
  }
}

}  // namespace revnorm
