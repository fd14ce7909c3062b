#include "revnorm/pseudonorm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "revnorm/diagnostics.hpp"
#include "revnorm/error.hpp"
#include "revnorm/lie.hpp"

namespace revnorm {

HomologicalSolution solve_homological(const ScalarPolynomial& g, const FrequencyMap& omega, double res_tol) {
  if (!has_parity(g, Parity::odd, kParityTol)) {
    throw ParityError("solve_homological: right-hand side of degree " + std::to_string(g.degree()) +
                      " is not odd (classified " + std::string(to_string(parity_classify(g))) + ")");
  }
  const double max_a = g.max_abs_coefficient();
  ResonanceReport report;
  report.threshold = res_tol;
  double min_div = std::numeric_limits<double>::infinity();
  std::vector<PolyTerm> terms;
  terms.reserve(g.size());
  for (const auto& t : g.terms()) {
    if (t.key.self_conjugate()) {
      // Odd parity already forces these to (numerical) zero.
      continue;
    }
    const double om = omega_sum(t.key, omega);
    if (std::abs(om) <= res_tol) {
      if (std::abs(t.coef) > res_tol * max_a) {
        ++report.total;
        report.entries.push_back({t.key, om, std::abs(t.coef)});
      }
      continue;
    }
    min_div = std::min(min_div, std::abs(om));
    terms.push_back({t.key, t.coef / om});
  }
  report.smallest_surviving_divisor = min_div;
  if (!report.empty()) throw ResonanceError(std::move(report));
  auto n = ScalarPolynomial::from_terms(g.degree(), std::move(terms)).with_parity(Parity::even, kParityTol);
  return {std::move(n), min_div};
}

ScalarPolynomial sobolev_norm_polynomial(const IndexSet& set, double s) {
  std::vector<PolyTerm> terms;
  for (auto j : set.modes()) {
    if (j.delta() < 0) continue;
    // z_j z_{conj j} appears for j and conj(j): stored coefficient 2 w^{2s}.
    terms.push_back({MultiIndex::from_tuple({j, j.conj()}), 2.0 * std::pow(static_cast<double>(j.weight_sq()), s)});
  }
  return ScalarPolynomial::from_terms(2, std::move(terms)).with_parity(Parity::even);
}

namespace {

const PolyVectorField* field_of_degree(std::span<const PolyVectorField> fields, int p) {
  const auto i = static_cast<std::size_t>(p - 2);
  if (p < 2 || i >= fields.size() || fields[i].is_zero()) return nullptr;
  return &fields[i];
}

void validate_fields(std::span<const PolyVectorField> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].is_zero()) continue;
    if (fields[i].degree() != static_cast<int>(i) + 2) {
      throw DomainError("Taylor field at position " + std::to_string(i) + " has degree " +
                        std::to_string(fields[i].degree()) + ", expected " + std::to_string(i + 2));
    }
    const auto rep = check_field_symmetry(fields[i]);
    if (!rep.ok()) throw ParityError("F^(" + std::to_string(i + 2) + ") fails the reversibility check: " + rep.summary());
  }
}

}  // namespace

PseudoNormFamily build_pseudonorm(std::span<const PolyVectorField> fields, const FrequencyMap& omega, double s, int r,
                                  const BuildOptions& options) {
  if (r < 2 || r > kMaxDegree) throw DomainError("build_pseudonorm: r must be in 2.." + std::to_string(kMaxDegree));
  if (s < 0) throw DomainError("build_pseudonorm: s must be >= 0");
  if (!omega.antisymmetric()) throw DomainError("build_pseudonorm: frequencies are not antisymmetric");
  validate_fields(fields);

  PseudoNormFamily fam;
  fam.s = s;
  fam.r = r;
  fam.class_gamma = options.class_gamma;
  fam.res_tol = options.res_tol;
  fam.parts.push_back(sobolev_norm_polynomial(*omega.index_set(), s));
  fam.sources.emplace_back(2);
  fam.min_divisor.push_back(std::numeric_limits<double>::infinity());

  for (int k = 2; k <= r - 1; ++k) {
    ScalarPolynomial g(k + 1);
    for (int m = 2; m <= k; ++m) {
      const auto* f = field_of_degree(fields, k + 2 - m);
      if (f == nullptr) continue;
      g = g - lie_derivative(*f, fam.part(m));
    }
    if (!has_parity(g, Parity::odd, options.parity_tol)) {
      throw ParityError("G_" + std::to_string(k + 1) + " is not odd (classified " +
                        std::string(to_string(parity_classify(g, options.parity_tol))) + ")");
    }
    try {
      auto sol = solve_homological(g, omega, options.res_tol);
      fam.parts.push_back(std::move(sol.solution));
      fam.min_divisor.push_back(sol.min_divisor);
    } catch (const ResonanceError& e) {
      auto rep = e.report();
      rep.order = k + 1;
      throw ResonanceError(std::move(rep));
    }
    fam.sources.push_back(g.with_parity(Parity::odd, options.parity_tol));
  }
  for (const auto& p : fam.parts) fam.class_constants.push_back(gamma_class_constant(p, options.class_gamma, s));
  return fam;
}

namespace {

void require_real(const StateVector& z) {
  const double defect = reality_defect(z, 0.0);
  if (defect > 1e-8 * (1e-300 + sobolev_norm(z, 0.0))) {
    throw DomainError("state is not real (rho(z) != conj(z)); defect " + std::to_string(defect));
  }
}

}  // namespace

double pseudonorm_eval(const PseudoNormFamily& fam, const StateVector& z) {
  require_real(z);
  cplx acc = 0.0;
  double gross = 0.0;
  for (const auto& p : fam.parts) {
    const cplx v = poly_eval(p, z);
    acc += v;
    gross += std::abs(v);
  }
  if (std::abs(acc.imag()) > 1e-10 * gross) {
    throw DomainError("pseudonorm_eval: imaginary part " + std::to_string(acc.imag()) + " is not negligible");
  }
  return acc.real();
}

double drift_rate(const PseudoNormFamily& fam, const FrequencyMap& omega, std::span<const PolyVectorField> fields,
                  const StateVector& z) {
  require_real(z);
  cplx acc = 0.0;
  double gross = 0.0;
  for (const auto& p : fam.parts) {
    const cplx v = time_derivative_value(p, omega, fields, z);
    acc += v;
    gross += std::abs(v);
  }
  if (std::abs(acc.imag()) > 1e-10 * gross + 1e-300) {
    throw DomainError("drift_rate: imaginary part " + std::to_string(acc.imag()) + " is not negligible");
  }
  return acc.real();
}

std::vector<ScalarPolynomial> remainder_polynomials(const PseudoNormFamily& fam,
                                                    std::span<const PolyVectorField> fields) {
  std::map<int, ScalarPolynomial> by_degree;
  for (int k = 2; k <= fam.r; ++k) {
    for (int p = 2; p < static_cast<int>(fields.size()) + 2; ++p) {
      const auto* f = field_of_degree(fields, p);
      if (f == nullptr || k + p - 1 <= fam.r) continue;
      auto term = lie_derivative(*f, fam.part(k));
      auto [it, inserted] = by_degree.try_emplace(k + p - 1, k + p - 1);
      it->second = it->second + term;
    }
  }
  std::vector<ScalarPolynomial> out;
  for (auto& [deg, q] : by_degree) out.push_back(std::move(q));
  return out;
}

double remainder_value(std::span<const ScalarPolynomial> remainder, const StateVector& z) {
  cplx acc = 0.0;
  for (const auto& q : remainder) acc += poly_eval(q, z);
  return (cplx(0.0, -1.0) * acc).real();
}

double recursion_residual(const PseudoNormFamily& fam, const FrequencyMap& omega,
                          std::span<const PolyVectorField> fields) {
  double worst = 0.0;
  for (int k = 2; k <= fam.r - 1; ++k) {
    ScalarPolynomial lhs = omega_derivative(fam.part(k + 1), omega);
    double scale = lhs.max_abs_coefficient();
    for (int m = 2; m <= k; ++m) {
      const auto* f = field_of_degree(fields, k + 2 - m);
      if (f == nullptr) continue;
      const auto l = lie_derivative(*f, fam.part(m));
      scale = std::max(scale, l.max_abs_coefficient());
      lhs = lhs + l;
    }
    // Self-conjugate multisets are invisible to d_omega; their part of the
    // source is round-off and is excluded like in the solver.
    double res = 0.0;
    for (const auto& t : lhs.terms()) {
      if (!t.key.self_conjugate()) res = std::max(res, std::abs(t.coef));
    }
    if (scale > 0.0) worst = std::max(worst, res / scale);
  }
  return worst;
}

PseudoNormEvaluator::PseudoNormEvaluator(const PseudoNormFamily& fam, const FrequencyMap& omega,
                                         std::span<const PolyVectorField> fields) {
  const auto& set = *omega.index_set();
  for (const auto& p : fam.parts) {
    parts_.emplace_back(p, set);
    rotated_.emplace_back(omega_derivative(p, omega), set);
  }
  for (const auto& f : fields) {
    if (!f.is_zero()) fields_.emplace_back(f, set);
  }
}

cplx PseudoNormEvaluator::value(std::span<const cplx> z) const {
  cplx acc = 0.0;
  for (const auto& p : parts_) acc += p.value(z);
  return acc;
}

cplx PseudoNormEvaluator::derivative(std::span<const cplx> z, std::size_t n_parts) const {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < n_parts; ++k) acc += rotated_[k].value(z);
  if (!fields_.empty()) {
    std::vector<cplx> grad(z.size(), cplx{});
    for (std::size_t k = 0; k < n_parts; ++k) parts_[k].add_gradient(z, grad);
    std::vector<cplx> velocity(z.size(), cplx{});
    for (const auto& f : fields_) f.apply(z, velocity);
    for (std::size_t i = 0; i < z.size(); ++i) acc += velocity[i] * grad[i];
  }
  return cplx(0.0, -1.0) * acc;
}

cplx PseudoNormEvaluator::drift(std::span<const cplx> z) const { return derivative(z, parts_.size()); }

cplx PseudoNormEvaluator::norm_drift(std::span<const cplx> z) const { return derivative(z, 1); }

}  // namespace revnorm
