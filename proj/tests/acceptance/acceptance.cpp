// Acceptance run: one PASS/FAIL line per criterion, "info:" lines for the
// measured quantities. Exit status is the number of failed criteria.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "revnorm/diagnostics.hpp"
#include "revnorm/harness/commands.hpp"
#include "revnorm/harness/config.hpp"
#include "revnorm/integrator.hpp"
#include "revnorm/lie.hpp"
#include "revnorm/model.hpp"
#include "revnorm/oracle/oracle.hpp"
#include "revnorm/pseudonorm.hpp"
#include "revnorm/resonance.hpp"

using namespace revnorm;
using namespace revnorm::harness;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failed = 0;

void info(const std::string& line) { std::cout << "info: " << line << std::endl; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0) o.require(secs < limit_s, "runtime " + fmt(secs) + " s exceeds " + fmt(limit_s) + " s");
  failed += o.pass ? 0 : 1;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " [" << fmt(secs) << " s]";
  if (!o.detail.empty()) std::cout << " -- " << o.detail;
  std::cout << std::endl;
}

Config config(const char* name) { return load_config(std::string(REVNORM_CONFIGS) + "/" + name); }

// Parity defects by direct lookup of the conjugate key, relative to the
// largest coefficient. Independent of parity_classify.
double parity_defect(const ScalarPolynomial& q, int sign) {
  double scale = 0.0, defect = 0.0;
  for (const auto& t : q.terms()) scale = std::max(scale, std::abs(t.coef));
  for (const auto& t : q.terms()) {
    defect = std::max(defect, std::abs(q.coefficient(t.key.conj()) - sign * t.coef));
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

bool all_finite(const ScalarPolynomial& q) {
  return std::all_of(q.terms().begin(), q.terms().end(), [](const PolyTerm& t) { return std::isfinite(t.coef); });
}

double direct_omega(const FrequencyMap& omega, const MultiIndex& key) {
  double acc = 0.0;
  for (int i = 0; i < key.degree(); ++i) acc += omega.at(key[i]);
  return acc;
}

const PolyVectorField* field_of_degree(const ModelSpec& m, int deg) {
  for (const auto& f : m.fields) {
    if (f.degree() == deg && !f.is_zero()) return &f;
  }
  return nullptr;
}

// Recomputes every G_k from the stored parts and checks the parity chain.
void check_chain(const ModelSpec& m, const PseudoNormFamily& fam, Outcome& o, const std::string& tag) {
  double worst_g = 0.0, worst_n = 0.0;
  bool finite = true;
  for (int k = 3; k <= fam.r; ++k) {
    ScalarPolynomial g(k);
    for (int j = 2; j <= k - 1; ++j) {
      if (const auto* f = field_of_degree(m, k + 1 - j)) g = g - lie_derivative(*f, fam.part(j));
    }
    worst_g = std::max(worst_g, parity_defect(g, -1));
    worst_n = std::max(worst_n, parity_defect(fam.part(k), 1));
    finite = finite && all_finite(fam.part(k)) && all_finite(g);
  }
  worst_n = std::max(worst_n, parity_defect(fam.part(2), 1));
  info(tag + ": max odd defect of G_k " + fmt(worst_g) + ", max even defect of N_k " + fmt(worst_n) +
       ", terms in N_r " + std::to_string(fam.part(fam.r).size()));
  o.require(worst_g <= 1e-12, tag + ": G_k not odd (" + fmt(worst_g) + ")");
  o.require(worst_n <= 1e-12, tag + ": N_k not even (" + fmt(worst_n) + ")");
  o.require(finite, tag + ": non-finite coefficient");
}

StateVector scaled(StateVector z, double eps) {
  for (auto& v : z.values()) v *= eps;
  return z;
}

// Four distinct lattice points, zero signed momentum, Omega exactly zero.
bool is_rectangle(const ResonantEntry& e) {
  if (e.key.degree() != 4 || e.omega != 0.0 || e.key.self_conjugate()) return false;
  std::array<int, kMaxDim> momentum{};
  std::vector<Lattice> points;
  for (int i = 0; i < 4; ++i) {
    const auto j = e.key[i];
    for (int c = 0; c < j.dim(); ++c) momentum[static_cast<std::size_t>(c)] += j.delta() * j.a(c);
    points.push_back(j.lattice());
  }
  std::sort(points.begin(), points.end());
  return std::adjacent_find(points.begin(), points.end()) == points.end() &&
         std::all_of(momentum.begin(), momentum.end(), [](int v) { return v == 0; });
}

int hw_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);

  criterion(1, "homological exactness on 50 random odd polynomials", 10.0, [] {
    Outcome o;
    double worst = 0.0;
    int not_even = 0;
    for (int i = 0; i < 50; ++i) {
      const int K = 1 + i % 4;
      const int deg = 3 + i % 3;
      const auto set = IndexSet::box(1, K);
      const std::uint64_t seed = 100 + static_cast<std::uint64_t>(i);
      const auto omega = nls_frequencies(set, std::span(&seed, 1), {});
      const auto g = oracle::random_odd_polynomial(*set, deg, 500 + static_cast<std::uint64_t>(i), 6);
      const auto sol = solve_homological(g, omega).solution;
      double scale = 0.0, res = 0.0;
      for (const auto& t : g.terms()) scale = std::max(scale, std::abs(t.coef));
      for (const auto& t : g.terms()) {
        res = std::max(res, std::abs(direct_omega(omega, t.key) * sol.coefficient(t.key) - t.coef));
      }
      for (const auto& t : sol.terms()) {
        res = std::max(res, std::abs(direct_omega(omega, t.key) * t.coef - g.coefficient(t.key)));
      }
      worst = std::max(worst, res / scale);
      not_even += parity_defect(sol, 1) > 1e-12 || parity_classify(sol) != Parity::even;
    }
    info("criterion 1: worst relative residual " + fmt(worst) + ", solutions not even " + std::to_string(not_even));
    o.require(worst <= 1e-12, "residual " + fmt(worst));
    o.require(not_even == 0, std::to_string(not_even) + " solutions not classified even");
    return o;
  });

  const auto nls_cfg = config("nls_d1_K6_r4.json");
  const auto nls = make_model(nls_cfg);

  criterion(2, "parity and reality chain, NLS d=1 K=6, r=3,4", 60.0, [&] {
    Outcome o;
    for (int r : {3, 4}) {
      const auto fam = build_pseudonorm(nls.fields, nls.omega, 2.0, r);
      check_chain(nls, fam, o, "NLS r=" + std::to_string(r));
    }
    return o;
  });

  criterion(3, "lie_derivative and poly_gradient against oracles", 0.0, [] {
    Outcome o;
    double worst_lie = 0.0, worst_grad = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto set = IndexSet::box(1, 1 + i % 2);
      const auto seed = static_cast<std::uint64_t>(i);
      const auto f = oracle::random_sparse_field(*set, 2 + (i / 2) % 2, 1000 + seed, 4);
      const auto g = oracle::random_polynomial(*set, 2 + (i / 4) % 2, 2000 + seed, 6);
      worst_lie =
          std::max(worst_lie, (lie_derivative(f, g) - oracle::brute_force_lie(f, g, *set)).max_abs_coefficient());

      const auto q = oracle::random_polynomial(*IndexSet::box(1, 2), 2 + i % 4, 3000 + seed, 8);
      const auto z = oracle::random_state(IndexSet::box(1, 2), 4000 + seed);
      const auto grad = poly_gradient(q, z);
      const auto fd = oracle::finite_diff_gradient(q, z, 1e-5);
      double scale = 0.0, diff = 0.0;
      for (std::size_t k = 0; k < grad.size(); ++k) {
        scale = std::max(scale, std::abs(grad[k]));
        diff = std::max(diff, std::abs(grad[k] - fd[k]));
      }
      worst_grad = std::max(worst_grad, diff / scale);
    }
    info("criterion 3: max |lie - brute force| " + fmt(worst_lie) + ", max relative gradient error " +
         fmt(worst_grad));
    o.require(worst_lie <= 1e-12, "lie mismatch " + fmt(worst_lie));
    o.require(worst_grad <= 1e-6, "gradient mismatch " + fmt(worst_grad));
    return o;
  });

  criterion(4, "deviation exponent 3.0 +- 0.2 on the synthetic model", 10.0, [] {
    Outcome o;
    const auto cfg = config("synthetic_d1_K6.json");
    const auto m = make_model(cfg);
    const auto fam = build_pseudonorm(m.fields, m.omega, cfg.build.s, 3);
    o.require(!fam.part(3).is_zero(), "N_3 vanishes");
    const auto ds = drift_scan(m, fam, cfg.drift_scan);
    o.require(ds.deviation_fit.valid, ds.deviation_fit.reason);
    if (ds.deviation_fit.valid) {
      info("criterion 4: deviation slope " + fmt(ds.deviation_fit.slope) + " +- " +
           fmt(ds.deviation_fit.stderr_slope) + " over " + std::to_string(ds.deviation_fit.points) + " points");
      o.require(std::abs(ds.deviation_fit.slope - 3.0) <= 0.2, "slope " + fmt(ds.deviation_fit.slope));
    }
    return o;
  });

  PseudoNormFamily fam4;
  double C_hat = 0.0;
  criterion(5, "drift exponent r+1 +- 0.3 for r=3,4 on NLS d=1 K=6 s=2", 120.0, [&] {
    Outcome o;
    for (int r : {3, 4}) {
      auto fam = build_pseudonorm(nls.fields, nls.omega, nls_cfg.build.s, r);
      const auto ds = drift_scan(nls, fam, nls_cfg.drift_scan);
      const std::string tag = "r=" + std::to_string(r);
      o.require(ds.drift_fit.valid, tag + ": " + ds.drift_fit.reason);
      if (!ds.drift_fit.valid) continue;
      info("criterion 5: " + tag + " drift slope " + fmt(ds.drift_fit.slope) + " +- " +
           fmt(ds.drift_fit.stderr_slope) + ", C_hat " + fmt(ds.C_hat));
      o.require(std::abs(ds.drift_fit.slope - (r + 1)) <= 0.3,
                tag + ": slope " + fmt(ds.drift_fit.slope) + " expected " + std::to_string(r + 1));
      if (r == 4) {
        C_hat = ds.C_hat;
        fam4 = std::move(fam);
      }
    }
    return o;
  });

  double reality_eps = 0.0;
  criterion(6, "stability at eps=0.05 over T=8000, NLS d=1 K=6 s=2 r=4", 900.0, [&] {
    Outcome o;
    if (fam4.parts.empty()) fam4 = build_pseudonorm(nls.fields, nls.omega, nls_cfg.build.s, 4);
    const auto& st = nls_cfg.stability;
    const auto res = stability_run(nls, fam4, st);
    const double bound = 5.0 * C_hat * res.T * std::pow(st.epsilon, 5);
    reality_eps = res.reality_defect / st.epsilon;
    info("criterion 6: T " + fmt(res.T) + ", sup ||z||_s / eps " + fmt(res.sup_ratio) + ", |N(T) - N(0)| " +
         fmt(res.delta_N) + ", bound " + fmt(bound) + " (C_hat " + fmt(C_hat) + "), rms rate ratio " +
         fmt(res.rms_drift > 0 ? res.rms_norm_rate / res.rms_drift : 0.0) + ", error estimate " +
         fmt(res.traj.error_estimate));
    o.require(!res.traj.blew_up, "blow-up guard tripped");
    o.require(res.T == 8000.0, "horizon " + fmt(res.T));
    o.require(res.sup_ratio <= 2.0, "sup ratio " + fmt(res.sup_ratio));
    o.require(res.delta_N <= bound, "drift " + fmt(res.delta_N) + " above bound " + fmt(bound));
    return o;
  });

  const auto coupled_cfg = config("coupled_d1_K6.json");
  const auto coupled = make_model(coupled_cfg);
  bool coupled_flow_ok = false;

  criterion(7, "reversibility at t=1 and reality of trajectories", 0.0, [&] {
    Outcome o;
    const double eps = 0.05;
    for (const auto* m : {&nls, &coupled}) {
      const std::string tag = m->kind;
      const auto z0 = scaled(random_real_direction(m->set, 2.0, 11), eps);
      const double rev = check_reversibility_flow(*m, z0, 1.0, 1e-3, 2.0);
      IntegratorOptions opt;
      opt.dt = 0.02;
      opt.stride = 50;
      opt.s = 2.0;
      const auto tr = integrate(*m, z0, 100.0, opt);
      const double real = max_reality_defect(tr, 2.0) / eps;
      info("criterion 7: " + tag + " reversibility residual " + fmt(rev) + ", reality defect / eps " + fmt(real));
      o.require(rev <= 1e-8, tag + ": reversibility " + fmt(rev));
      o.require(real <= 1e-9, tag + ": reality " + fmt(real));
    }
    info("criterion 7: long-run reality defect / eps from criterion 6 " + fmt(reality_eps));
    o.require(reality_eps <= 1e-9, "long-run reality " + fmt(reality_eps));
    coupled_flow_ok = o.pass;
    return o;
  });

  NonResonanceScan scan_d2;
  criterion(8, "resonance detection and seeded non-resonance scan", 0.0, [&] {
    Outcome o;
    const auto v0 = make_model(config("nls_d2_V0_cubic.json"));
    ScanOptions opt;
    opt.max_listed = 100000;
    opt.threads = hw_threads();
    const auto rect = scan_nonresonance(v0.omega, 4, 1e-12, opt);
    const auto it = std::find_if(rect.report.entries.begin(), rect.report.entries.end(), is_rectangle);
    o.require(it != rect.report.entries.end(), "no exact rectangle resonance at V = 0");
    if (it != rect.report.entries.end()) {
      info("criterion 8: V = 0 rectangle " + it->key.to_string() + ", " +
           std::to_string(std::count_if(rect.report.entries.begin(), rect.report.entries.end(), is_rectangle)) +
           " rectangles among " + std::to_string(rect.report.total) + " resonant multisets");
    }

    const auto cfg = config("nls_d2_K4_r4.json");
    const auto m = make_model(cfg);
    scan_d2 = scan_nonresonance(m.omega, 4, 1e-8, opt);
    info("criterion 8: d=2 K=4 r=4 scanned " + std::to_string(scan_d2.scanned) + " multisets, " +
         std::to_string(scan_d2.report.total) + " below 1e-8, min |Omega| " + fmt(scan_d2.min_abs_omega) +
         ", gamma " + fmt(scan_d2.gamma) + ", alpha " + fmt(scan_d2.alpha));
    o.require(scan_d2.report.empty(), std::to_string(scan_d2.report.total) + " resonances at 1e-8");
    o.require(scan_d2.gamma > 0.0, "gamma not positive");
    return o;
  });

  criterion(9, "coupled NLS: non-Hamiltonian, parity chain, r=3 drift slope, reversibility", 0.0, [&] {
    Outcome o;
    o.require(!coupled.hamiltonian, "model reports hamiltonian = true");
    for (int r : {3, 4}) {
      const auto fam = build_pseudonorm(coupled.fields, coupled.omega, coupled_cfg.build.s, r);
      check_chain(coupled, fam, o, "coupled r=" + std::to_string(r));
      if (r != 3) continue;
      const auto ds = drift_scan(coupled, fam, coupled_cfg.drift_scan);
      o.require(ds.drift_fit.valid, ds.drift_fit.reason);
      if (ds.drift_fit.valid) {
        info("criterion 9: coupled r=3 drift slope " + fmt(ds.drift_fit.slope) + " +- " +
             fmt(ds.drift_fit.stderr_slope));
        o.require(std::abs(ds.drift_fit.slope - 4.0) <= 0.3, "slope " + fmt(ds.drift_fit.slope));
      }
    }
    o.require(coupled_flow_ok, "criterion 7 failed");
    return o;
  });

  criterion(10, "divisor bound |b| <= |a| mu^alpha / gamma over every stored coefficient", 0.0, [&] {
    Outcome o;
    const auto cfg = config("nls_d2_K4_r4.json");
    const auto m = make_model(cfg);
    const auto fam = build_pseudonorm(m.fields, m.omega, cfg.build.s, 4);
    auto check = [&](const PseudoNormFamily& f, double gamma, double alpha, const std::string& tag) {
      std::size_t checked = 0, violations = 0;
      double worst = 0.0;
      for (int k = 3; k <= f.r; ++k) {
        const auto& src = f.sources[static_cast<std::size_t>(k - 2)];
        for (const auto& t : f.part(k).terms()) {
          const double a = src.coefficient(t.key);
          const double allowed = std::abs(a) * std::pow(mu_S_beta(t.key).mu, alpha) / gamma;
          // Allow only the rounding of the quotient b = a / Omega.
          if (std::abs(t.coef) > allowed * (1.0 + 1e-12)) ++violations;
          if (allowed > 0.0) worst = std::max(worst, std::abs(t.coef) / allowed);
          ++checked;
        }
      }
      info("criterion 10: " + tag + " checked " + std::to_string(checked) + " coefficients, " +
           std::to_string(violations) + " violations, max |b| / bound " + fmt(worst));
      return violations;
    };
    const auto v = check(fam, scan_d2.gamma, scan_d2.alpha, "d=2 K=4 r=4 with (gamma, alpha) of criterion 8");
    o.require(scan_d2.gamma > 0.0, "no fitted gamma");
    o.require(v == 0, std::to_string(v) + " coefficients exceed the bound");

    ScanOptions opt;
    opt.threads = hw_threads();
    const auto own = scan_nonresonance(nls.omega, 4, 1e-8, opt);
    if (fam4.parts.empty()) fam4 = build_pseudonorm(nls.fields, nls.omega, nls_cfg.build.s, 4);
    info("criterion 10: d=1 K=6 own fit gamma " + fmt(own.gamma) + ", alpha " + fmt(own.alpha));
    (void)check(fam4, own.gamma, own.alpha, "d=1 K=6 r=4 with its own fit");
    return o;
  });

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
  return failed;
}
