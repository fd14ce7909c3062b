#include "revnorm/lie.hpp"

#include <string>

#include "revnorm/error.hpp"

namespace revnorm {

ScalarPolynomial lie_derivative(const PolyVectorField& f, const ScalarPolynomial& g) {
  const int out_degree = f.degree() + g.degree() - 1;
  if (out_degree > kMaxDegree) {
    throw DomainError("lie_derivative: output degree " + std::to_string(out_degree) + " exceeds limit");
  }
  PolyAccumulator acc(out_degree);
  if (f.is_zero() || g.is_zero()) return acc.finish();
  acc.reserve(g.size() * 4);
  for (const auto& gt : g.terms()) {
    for_each_partial(gt.key, [&](ModeIndex ell, int mult, const MultiIndex& reduced) {
      const double gb = gt.coef * static_cast<double>(mult);
      for (const auto& ft : f.component(ell)) acc.add(reduced.merged(ft.in), ft.coef * gb);
    });
  }
  return acc.finish();
}

ScalarPolynomial omega_derivative(const ScalarPolynomial& q, const FrequencyMap& omega) {
  std::vector<PolyTerm> terms;
  terms.reserve(q.size());
  for (const auto& t : q.terms()) {
    const double om = omega_sum(t.key, omega);
    if (om != 0.0) terms.push_back({t.key, om * t.coef});
  }
  return ScalarPolynomial::from_terms(q.degree(), std::move(terms));
}

cplx time_derivative_value(const ScalarPolynomial& q, const FrequencyMap& omega,
                           std::span<const PolyVectorField> fields, const StateVector& z) {
  if (!same_index_set(omega.index_set(), z.index_set())) {
    throw DomainError("time_derivative_value: frequency map and state live on different index sets");
  }
  // The linear part goes through d_omega Q so that conjugate pairs cancel
  // exactly; F = 0 then gives an exact zero for any gauge-balanced Q.
  cplx acc = poly_eval(omega_derivative(q, omega), z);
  if (fields.empty()) return cplx(0.0, -1.0) * acc;
  const auto grad = poly_gradient(q, z);
  for (const auto& f : fields) {
    if (f.is_zero()) continue;
    const auto fz = field_eval(f, z);
    for (std::size_t i = 0; i < z.size(); ++i) acc += fz[i] * grad[i];
  }
  return cplx(0.0, -1.0) * acc;
}

}  // namespace revnorm
