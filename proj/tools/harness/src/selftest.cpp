#include "revnorm/harness/selftest.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "revnorm/diagnostics.hpp"
#include "revnorm/integrator.hpp"
#include "revnorm/io.hpp"
#include "revnorm/lie.hpp"
#include "revnorm/model.hpp"
#include "revnorm/oracle/oracle.hpp"
#include "revnorm/pseudonorm.hpp"
#include "revnorm/resonance.hpp"

namespace revnorm::harness {

bool SelftestReport::passed() const { return failures() == 0; }

std::size_t SelftestReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.passed ? 0 : 1;
  return n;
}

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

Outcome expect(bool ok, const std::string& detail) { return {ok, detail}; }

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

double poly_difference(const ScalarPolynomial& a, const ScalarPolynomial& b) {
  std::map<MultiIndex, double> diff;
  for (const auto& t : a.terms()) diff[t.key] += t.coef;
  for (const auto& t : b.terms()) diff[t.key] -= t.coef;
  double m = 0.0;
  for (const auto& [k, v] : diff) m = std::max(m, std::abs(v));
  const double scale = std::max({a.max_abs_coefficient(), b.max_abs_coefficient(), 1e-300});
  return m / scale;
}

double field_difference(const PolyVectorField& a, const PolyVectorField& b) {
  std::map<std::pair<ModeIndex, MultiIndex>, double> diff;
  for (const auto& t : a.terms()) diff[{t.out, t.in}] += t.coef;
  for (const auto& t : b.terms()) diff[{t.out, t.in}] -= t.coef;
  double m = 0.0;
  for (const auto& [k, v] : diff) m = std::max(m, std::abs(v));
  return m / std::max({a.max_abs_coefficient(), b.max_abs_coefficient(), 1e-300});
}

ModeIndex m1(int a, int delta) { return ModeIndex({a}, delta); }

StateVector scaled(StateVector z, double eps) {
  for (auto& v : z.values()) v *= eps;
  return z;
}

FrequencyMap random_omega(const IndexSetPtr& set, std::uint64_t seed) {
  const std::uint64_t seeds[] = {seed};
  ModelOptions o;
  return nls_frequencies(set, seeds, o);
}

ModelSpec corrupt(ModelSpec m) {
  auto& f = m.fields.back();
  std::vector<FieldTerm> terms(f.terms().begin(), f.terms().end());
  terms.front().coef *= 1.5;
  f = PolyVectorField::from_terms(f.degree(), std::move(terms));
  return m;
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options, std::ostream* log) {
  SelftestReport report;
  auto check = [&](const std::string& name, const std::string& invariant, const std::function<Outcome()>& fn) {
    CheckResult r{name, invariant, false, ""};
    try {
      const auto o = fn();
      r.passed = o.ok;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    if (log != nullptr) {
      *log << (r.passed ? "PASS " : "FAIL ") << name;
      if (!r.passed) *log << "  [invariant: " << invariant << "]";
      if (!r.detail.empty()) *log << "  " << r.detail;
      *log << '\n';
    }
    report.checks.push_back(std::move(r));
  };

  // Fixtures.
  auto nls = build_nls_model(1, 2, 7, {{2, 0, 1.0}});
  if (options.inject_fault) nls = corrupt(std::move(nls));
  const auto set1 = IndexSet::box(1, 1);
  const auto set2 = IndexSet::box(1, 2);
  const auto set3 = IndexSet::box(1, 3);

  check("weight", "weight(j) = sqrt(max(1, |a|^2))", [] {
    const bool ok = weight(m1(0, 1)) == 1.0 && weight(m1(3, 1)) == 3.0 && weight(ModeIndex({3, 4}, 1)) == 5.0;
    return expect(ok, "");
  });
  check("conj involution", "conj(conj j) = j, weight preserved", [] {
    const auto set = IndexSet::box(2, 2, 2);
    for (auto j : set->modes()) {
      if (j.conj().conj() != j || weight(j.conj()) != weight(j) || j.conj().delta() != -j.delta()) {
        return expect(false, j.to_string());
      }
    }
    return expect(true, "");
  });
  check("mu S beta", "mu = w3, S = w1 - w2, beta = w1 w2", [] {
    const auto st = mu_S_beta(MultiIndex::from_tuple(
        {ModeIndex({3, 4}, 1), ModeIndex({3, 0}, 1), ModeIndex({2, 0}, -1), ModeIndex({1, 0}, 1)}));
    return expect(st.mu == 2.0 && st.S == 2.0 && st.beta == 15.0, "mu=" + sci(st.mu) + " S=" + sci(st.S));
  });
  check("omega_sum", "Omega(conj J) = -Omega(J) exactly", [&] {
    ModelOptions o;
    o.potential = PotentialKind::zero;
    const std::uint64_t seed[] = {0};
    const auto om = nls_frequencies(set3, seed, o);
    const double v = omega_sum(MultiIndex::from_tuple({m1(1, 1), m1(1, 1), m1(2, -1)}), om);
    const auto rnd = random_omega(set3, 5);
    const auto q = oracle::random_polynomial(*set3, 4, 3, 50);
    for (const auto& t : q.terms()) {
      if (omega_sum(t.key.conj(), rnd) != -omega_sum(t.key, rnd)) return expect(false, t.key.to_string());
    }
    return expect(v == -2.0, "Omega = " + sci(v));
  });
  check("sobolev norm", "||z||_s^2 = sum w^{2s} |z_j|^2", [&] {
    StateVector z(set2);
    z.set(m1(1, 1), 1.0);
    z.set(m1(2, 1), 1.0);
    return expect(std::abs(sobolev_norm(z, 2.0) - std::sqrt(17.0)) < 1e-14, "");
  });
  check("index set size", "box has (2K+1)^d * 2 * species entries", [] {
    const bool ok = truncated_index_set(1, 1, 1).size() == 6 && truncated_index_set(2, 1, 1).size() == 18 &&
                    truncated_index_set(1, 2, 2).size() == 20;
    return expect(ok, "");
  });
  check("rho and reality", "rho is an involution; rho(z) = conj(z) for real z", [&] {
    StateVector z(set1);
    z.set(m1(1, 1), {1.0, 2.0});
    z.set(m1(1, -1), {1.0, -2.0});
    const auto w = oracle::random_state(set2, 9);
    const auto back = rho(rho(w));
    return expect(is_real_state(z) && sobolev_distance(back, w, 0.0) == 0.0, "");
  });
  check("canonical multi index", "permutation invariant, conj compatible", [] {
    const auto a = MultiIndex::from_tuple({m1(2, 1), m1(1, -1), m1(2, 1)});
    const auto b = MultiIndex::from_tuple({m1(1, -1), m1(2, 1), m1(2, 1)});
    const auto c = MultiIndex::from_tuple({m1(2, -1), m1(1, 1), m1(2, -1)});
    return expect(a == b && a.conj() == c, "");
  });
  check("poly_eval", "sum_J b_J z_J", [&] {
    StateVector z(set1);
    z.set(m1(1, 1), 2.0);
    z.set(m1(1, -1), 3.0);
    const auto q = ScalarPolynomial::from_terms(2, {{MultiIndex::from_tuple({m1(1, 1), m1(1, -1)}), 1.0}});
    StateVector w(set1);
    w.set(m1(1, 1), {1.0, 1.0});
    const auto h = ScalarPolynomial::from_terms(2, {{MultiIndex::from_tuple({m1(1, 1), m1(1, 1)}), 0.5}});
    return expect(poly_eval(q, z) == cplx(6.0) && std::abs(poly_eval(h, w) - cplx(0.0, 1.0)) < 1e-15, "");
  });
  check("gradient vs finite differences", "poly_gradient = dQ/dz (oracle)", [&] {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto q = oracle::random_polynomial(*set2, 4, seed, 30);
      const auto z = oracle::random_state(set2, seed + 100);
      const auto g = poly_gradient(q, z);
      const auto fd = oracle::finite_diff_gradient(q, z, 1e-5);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        num = std::max(num, std::abs(g[i] - fd[i]));
        den = std::max(den, std::abs(g[i]));
      }
      worst = std::max(worst, num / den);
    }
    return expect(worst <= 1e-6, "max relative error " + sci(worst));
  });
  check("parity classification", "even / odd / neither", [] {
    const auto p = MultiIndex::from_tuple({m1(1, 1), m1(1, 1), m1(2, -1)});
    const auto even = ScalarPolynomial::from_terms(2, {{MultiIndex::from_tuple({m1(1, 1), m1(1, -1)}), 1.0}});
    const auto odd = ScalarPolynomial::from_terms(3, {{p, 1.0}, {p.conj(), -1.0}});
    const auto neither = ScalarPolynomial::from_terms(3, {{p, 1.0}});
    return expect(parity_classify(even) == Parity::even && parity_classify(odd) == Parity::odd &&
                      parity_classify(neither) == Parity::neither,
                  "");
  });
  check("gamma class constant", "C = max |b| (1+S)^2 / (mu^gamma beta^s)", [] {
    const auto q = ScalarPolynomial::from_terms(3, {{MultiIndex::from_tuple({m1(3, 1), m1(2, 1), m1(1, 1)}), 1.0}});
    const double c = gamma_class_constant(q, 0.0, 1.0);
    return expect(std::abs(c - 4.0 / 6.0) < 1e-15, "C = " + sci(c));
  });
  check("T class constant", "both denominators of the field class bound", [] {
    const auto f = PolyVectorField::from_terms(2, {{m1(2, 1), MultiIndex::from_tuple({m1(1, 1), m1(1, 1)}), 1.0}});
    const double a = tclass_constant(f, 2.0, 0.0, TclassFormula::sum_of_power);
    const double b = tclass_constant(f, 2.0, 0.0, TclassFormula::power_of_sum);
    return expect(a == 2.0 && b == 4.0, "sum of power " + sci(a) + ", power of sum " + sci(b));
  });
  auto lie_check = [&](const IndexSetPtr& set, int m, int n, std::uint64_t seed) {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto f = oracle::random_sparse_field(*set, m, seed + k, 6);
      const auto g = oracle::random_polynomial(*set, n, seed + 50 + k, 8);
      worst = std::max(worst, poly_difference(lie_derivative(f, g), oracle::brute_force_lie(f, g, *set)));
    }
    return expect(worst <= 1e-12, "max relative difference " + sci(worst));
  };
  check("lie vs brute force (2,2)", "L_F G coefficients (oracle)", [&] { return lie_check(set1, 2, 2, 10); });
  check("lie vs brute force (3,2)", "L_F G coefficients (oracle)", [&] { return lie_check(set2, 3, 2, 20); });
  check("lie vs brute force (3,3)", "L_F G coefficients (oracle)", [&] { return lie_check(set2, 3, 3, 30); });
  check("lie derivative parity", "reversible F, even G -> odd L_F G", [&] {
    const auto f = oracle::random_sparse_field(*set2, 3, 41, 10);
    const auto g = oracle::random_even_polynomial(*set2, 4, 42, 10);
    return expect(parity_classify(lie_derivative(f, g)) == Parity::odd, "");
  });
  check("omega derivative of the norm", "d_omega ||z||_s^2 = 0", [&] {
    return expect(omega_derivative(sobolev_norm_polynomial(*set3, 2.0), random_omega(set3, 3)).is_zero(), "");
  });
  check("chain identity", "time derivative = -i sum (omega z + F) dQ/dz", [&] {
    const auto q = oracle::random_polynomial(*set2, 3, 61, 20);
    const auto om = random_omega(set2, 62);
    const auto f = oracle::random_sparse_field(*set2, 3, 63, 10);
    const auto z = oracle::random_state(set2, 64);
    const std::vector<PolyVectorField> fs{f};
    const cplx a = time_derivative_value(q, om, fs, z);
    // Independent form: -i sum_j (omega_j z_j + F_j(z)) dQ/dz_j from the gradient.
    const auto grad = poly_gradient(q, z);
    const auto fz = field_eval(f, z);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) acc += (om[i] * z[i] + fz[i]) * grad[i];
    const cplx b = cplx(0.0, -1.0) * acc;
    return expect(std::abs(a - b) <= 1e-12 * std::abs(a), "relative difference " + sci(std::abs(a - b) / std::abs(a)));
  });
  check("homological example", "b_J = a_J / Omega(J)", [&] {
    ModelOptions o;
    o.potential = PotentialKind::zero;
    const std::uint64_t seed[] = {0};
    const auto om = nls_frequencies(set2, seed, o);
    const auto p = MultiIndex::from_tuple({m1(1, 1), m1(1, 1), m1(2, -1)});
    const auto g = ScalarPolynomial::from_terms(3, {{p, 1.0}, {p.conj(), -1.0}});
    const auto n = solve_homological(g, om).solution;
    return expect(n.coefficient(p) == -0.5 && n.coefficient(p.conj()) == -0.5 && n.parity() == Parity::even, "");
  });
  check("homological residual", "d_omega N = G to 1e-12, N even", [&] {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto g = oracle::random_odd_polynomial(*set3, 3 + static_cast<int>(seed % 3), seed, 20);
      const auto om = random_omega(set3, seed + 7);
      const auto n = solve_homological(g, om).solution;
      if (parity_classify(n) != Parity::even) return expect(false, "solution not even");
      worst = std::max(worst, poly_difference(omega_derivative(n, om), g));
    }
    return expect(worst <= 1e-12, "max residual " + sci(worst));
  });
  check("resonant monomial rejected", "self-conjugate coefficient is not odd", [&] {
    const auto key = MultiIndex::from_tuple({m1(1, 1), m1(1, -1), m1(2, 1), m1(2, -1)});
    const auto g = ScalarPolynomial::from_terms(4, {{key, 0.7}});
    try {
      (void)solve_homological(g, random_omega(set2, 1));
    } catch (const ParityError&) {
      return expect(true, "");
    }
    return expect(false, "no error raised");
  });
  check("NLS field reversibility", "a_{conj j, conj L} = -a_{jL} with real coefficients", [&] {
    for (const auto& f : nls.fields) {
      const auto rep = check_field_symmetry(f);
      if (!rep.ok()) return expect(false, rep.summary());
    }
    return expect(true, "");
  });
  check("NLS momentum selection", "delta_j a_j = sum delta_l a_l", [&] {
    std::size_t bad = 0;
    for (const auto& f : nls.fields) bad += count_momentum_violations(f);
    return expect(bad == 0, std::to_string(bad) + " violating term(s)");
  });
  check("NLS Fourier product oracle", "F = dP/dz_conj matches the Fourier product", [&] {
    const auto ref = oracle::brute_force_nls_field(*nls.set, {2, 0, 1.0}, 0);
    const double diff = field_difference(nls.fields.back(), ref);
    return expect(diff <= 1e-12, "relative difference " + sci(diff));
  });
  check("coupled NLS", "g1 != g2 gives a reversible non-Hamiltonian model", [] {
    const auto m = build_coupled_nls_model(1, 1, {3, 4}, {{2, 1, 1.0}}, {{1, 1, 1.0}});
    bool ok = !m.hamiltonian;
    for (const auto& f : m.fields) ok = ok && check_field_symmetry(f).ok();
    return expect(ok, "");
  });
  check("parity and residual chain", "G_k odd, N_k even, exact recursion", [&] {
    const auto fam = build_pseudonorm(nls.fields, nls.omega, 2.0, 4);
    for (std::size_t i = 1; i < fam.parts.size(); ++i) {
      if (!has_parity(fam.sources[i], Parity::odd) || !has_parity(fam.parts[i], Parity::even)) {
        return expect(false, "order " + std::to_string(i + 2));
      }
    }
    const double res = recursion_residual(fam, nls.omega, nls.fields);
    return expect(res <= 1e-12, "residual " + sci(res));
  });
  check("drift vs symbolic remainder", "pointwise drift = -i sum Q_{r+1}(z)", [&] {
    const auto fam = build_pseudonorm(nls.fields, nls.omega, 2.0, 4);
    const auto z = scaled(random_real_direction(nls.set, 2.0, 5), 0.1);
    const double a = drift_rate(fam, nls.omega, nls.fields, z);
    const double b = remainder_value(remainder_polynomials(fam, nls.fields), z);
    return expect(std::abs(a - b) <= 1e-10 * std::abs(a), "relative difference " + sci(std::abs(a - b) / std::abs(a)));
  });
  check("drift vs finite difference in time", "drift_rate = d/dt N along the flow", [&] {
    const auto fam = build_pseudonorm(nls.fields, nls.omega, 2.0, 3);
    const auto z0 = scaled(random_real_direction(nls.set, 2.0, 6), 0.05);
    IntegratorOptions o;
    o.dt = 1e-4;
    o.estimate_error = false;
    const auto tr = integrate(nls, z0, 6e-4, o);
    const auto fd = oracle::finite_diff_time_derivative(fam, tr);
    double worst = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      const double d = drift_rate(fam, nls.omega, nls.fields, tr.states[k + 1]);
      worst = std::max(worst, std::abs(fd[k] - d) / std::abs(d));
    }
    return expect(worst <= 1e-5, "max relative difference " + sci(worst));
  });
  check("linear flow exact", "F = 0 gives z_j(T) = exp(-i omega_j T) z_j(0)", [] {
    const auto m = build_free_model(1, 3, 2);
    const auto z0 = oracle::random_state(m.set, 3);
    IntegratorOptions o;
    o.dt = 0.01;
    const auto tr = integrate(m, z0, 1.0, o);
    double worst = 0.0;
    for (std::size_t i = 0; i < z0.size(); ++i) {
      const cplx exact = std::polar(1.0, -m.omega[i] * 1.0) * z0[i];
      worst = std::max(worst, std::abs(tr.final_state()[i] - exact));
    }
    return expect(worst <= 1e-13, "max error " + sci(worst));
  });
  check("flow reversibility", "rho(Phi^t z) = Phi^-t(rho z)", [&] {
    const auto z0 = scaled(random_real_direction(nls.set, 2.0, 8), 0.1);
    const double res = check_reversibility_flow(nls, z0, 1.0, 1e-3, 2.0);
    return expect(res <= 1e-8, "residual " + sci(res));
  });
  check("reality preservation", "real initial data stay real", [&] {
    const double eps = 0.1;
    const auto z0 = scaled(random_real_direction(nls.set, 2.0, 9), eps);
    IntegratorOptions o;
    o.dt = 1e-2;
    o.stride = 10;
    const auto tr = integrate(nls, z0, 20.0, o);
    const double defect = max_reality_defect(tr, 2.0);
    return expect(defect <= 1e-9 * eps, "max defect " + sci(defect));
  });
  check("mass conservation", "sum |z_(a,+)|^2 conserved by gauge-invariant NLS", [&] {
    const auto z0 = scaled(random_real_direction(nls.set, 0.0, 10), 0.2);
    IntegratorOptions o;
    o.dt = 1e-2;
    const auto tr = integrate(nls, z0, 10.0, o);
    auto mass = [&](const StateVector& z) {
      double acc = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (nls.set->mode(i).delta() > 0) acc += std::norm(z[i]);
      }
      return acc;
    };
    const double rel = std::abs(mass(tr.final_state()) - mass(z0)) / mass(z0);
    return expect(rel <= 1e-10, "relative change " + sci(rel));
  });
  check("rectangle resonance", "V = 0, d = 2 has Omega = 0 on a rectangle", [] {
    ModelOptions o;
    o.potential = PotentialKind::zero;
    const auto m = build_free_model(2, 1, 0, o);
    ScanOptions so;
    so.max_listed = 1u << 20;
    const auto scan = scan_nonresonance(m.omega, 4, 1e-12, so);
    const auto rect = MultiIndex::from_tuple(
        {ModeIndex({0, 0}, 1), ModeIndex({1, 0}, -1), ModeIndex({1, 1}, 1), ModeIndex({0, 1}, -1)});
    for (const auto& e : scan.report.entries) {
      if (e.key == rect || e.key == rect.conj()) return expect(true, "");
    }
    return expect(false, "rectangle not listed");
  });
  check("family JSON round trip", "load(dump(N)) = N bit for bit", [&] {
    const auto fam = build_pseudonorm(nls.fields, nls.omega, 2.0, 4);
    const auto back = io::family_from_json(nlohmann::json::parse(io::family_to_json(fam).dump()));
    bool same = back.parts.size() == fam.parts.size();
    for (std::size_t i = 0; same && i < fam.parts.size(); ++i) {
      same = poly_difference(fam.parts[i], back.parts[i]) == 0.0;
    }
    return expect(same, "");
  });

  if (log != nullptr) {
    *log << report.checks.size() - report.failures() << " of " << report.checks.size() << " checks passed\n";
  }
  return report;
}

}  // namespace revnorm::harness
