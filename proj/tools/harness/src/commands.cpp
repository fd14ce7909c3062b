#include "revnorm/harness/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "revnorm/io.hpp"
#include "revnorm/resonance.hpp"

namespace revnorm::harness {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << doc.dump(2) << '\n';
}

namespace {

void say(const RunContext& ctx, const std::string& msg) {
  if (ctx.log != nullptr) *ctx.log << msg << '\n';
}

std::ofstream open_csv(const RunContext& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out);
  std::ofstream os(ctx.out / name, std::ios::binary);
  if (!os) throw Error("cannot write " + (ctx.out / name).string());
  os << "# config: " << ctx.config.raw.dump() << '\n';
  return os;
}

void emit(const RunContext& ctx, const std::string& name, json doc) {
  std::filesystem::create_directories(ctx.out);
  doc["config"] = ctx.config.raw;
  write_json(ctx.out / name, doc);
  say(ctx, "wrote " + (ctx.out / name).string());
}

json fit_json(const LogLogFit& f) {
  if (!f.valid) return {{"fit", false}, {"reason", f.reason}};
  return {{"fit", true},
          {"slope", f.slope},
          {"stderr", f.stderr_slope},
          {"intercept", f.intercept},
          {"points", f.points}};
}

PseudoNormFamily build_family(const RunContext& ctx, const ModelSpec& model) {
  const auto& b = ctx.config.build;
  return build_pseudonorm(model.fields, model.omega, b.s, b.r, build_options(ctx.config));
}

StateVector scaled(const StateVector& z, double eps) {
  StateVector out = z;
  for (auto& v : out.values()) v *= eps;
  return out;
}

}  // namespace

int cmd_model(const RunContext& ctx) {
  const auto model = make_model(ctx.config);
  emit(ctx, "model.json", {{"model", io::model_to_json(model)}});
  return kOk;
}

int cmd_build(const RunContext& ctx) {
  const auto model = make_model(ctx.config);
  emit(ctx, "model.json", {{"model", io::model_to_json(model)}});
  try {
    const auto fam = build_family(ctx, model);
    say(ctx, "built N_s^(r) with s = " + format_double(fam.s) + ", r = " + std::to_string(fam.r));
    emit(ctx, "family.json", {{"family", io::family_to_json(fam)},
                              {"recursion_residual", recursion_residual(fam, model.omega, model.fields)}});
    return kOk;
  } catch (const ResonanceError& e) {
    say(ctx, e.what());
    emit(ctx, "resonance_report.json", {{"stage", "build"}, {"report", io::report_to_json(e.report())}});
    return kResonance;
  }
}

int cmd_scan(const RunContext& ctx) {
  const auto model = make_model(ctx.config);
  ScanOptions opt;
  opt.max_listed = ctx.config.scan.max_listed;
  opt.threads = ctx.threads;
  const auto scan = scan_nonresonance(model.omega, ctx.config.scan.r, ctx.config.scan.threshold, opt);
  emit(ctx, "resonance_report.json", {{"stage", "scan"}, {"scan", io::scan_to_json(scan)}});
  auto csv = open_csv(ctx, "scan_buckets.csv");
  csv << "mu,mu_sq,min_abs_omega,count\n";
  for (const auto& b : scan.buckets) {
    csv << format_double(b.mu) << ',' << b.mu_sq << ',' << format_double(b.min_abs_omega) << ',' << b.count << '\n';
  }
  say(ctx, std::to_string(scan.report.total) + " resonant multiset(s); min |Omega| = " +
               format_double(scan.min_abs_omega) + ", gamma = " + format_double(scan.gamma) +
               ", alpha = " + format_double(scan.alpha));
  return scan.report.empty() ? kOk : kResonance;
}

int cmd_eval(const RunContext& ctx) {
  const auto model = make_model(ctx.config);
  const auto fam = build_family(ctx, model);
  const auto& e = ctx.config.eval;
  const auto z = scaled(random_real_direction(model.set, fam.s, e.direction_seed), e.epsilon);
  json parts = json::array();
  for (const auto& p : fam.parts) parts.push_back(poly_eval(p, z).real());
  const double norm = sobolev_norm(z, fam.s);
  const double value = pseudonorm_eval(fam, z);
  const auto rem = remainder_polynomials(fam, model.fields);
  emit(ctx, "eval.json", {{"epsilon", e.epsilon},
                          {"direction_seed", e.direction_seed},
                          {"norm_s", norm},
                          {"N", value},
                          {"N_minus_norm_sq", value - norm * norm},
                          {"parts", parts},
                          {"drift_rate", drift_rate(fam, model.omega, model.fields, z)},
                          {"remainder_value", remainder_value(rem, z)},
                          {"state", io::state_to_json(z)}});
  return kOk;
}

DriftScanResult drift_scan(const ModelSpec& model, const PseudoNormFamily& fam, const DriftScanConfig& cfg) {
  DriftScanResult res;
  const auto zhat = random_real_direction(model.set, fam.s, cfg.direction_seed);
  const PseudoNormEvaluator ev(fam, model.omega, model.fields);
  for (int i = 0; i < cfg.points; ++i) {
    const double eps = cfg.eps_max * std::pow(cfg.ratio, -i);
    const auto z = scaled(zhat, eps);
    const double norm = sobolev_norm(z, fam.s);
    res.eps.push_back(eps);
    res.drift.push_back(std::abs(drift_rate(fam, model.omega, model.fields, z)));
    res.deviation.push_back(std::abs(pseudonorm_eval(fam, z) - norm * norm));
    res.norm_rate.push_back(std::abs(ev.norm_drift(z.values()).real()));
    res.C_hat = std::max(res.C_hat, res.drift.back() / std::pow(eps, fam.r + 1));
  }
  res.drift_fit = fit_loglog(res.eps, res.drift);
  res.deviation_fit = fit_loglog(res.eps, res.deviation);
  return res;
}

int cmd_drift_scan(const RunContext& ctx) {
  const auto model = make_model(ctx.config);
  const auto fam = build_family(ctx, model);
  const auto res = drift_scan(model, fam, ctx.config.drift_scan);
  auto csv = open_csv(ctx, "drift_scan.csv");
  csv << "eps,abs_drift,abs_N_minus_eps_sq,abs_norm_rate\n";
  for (std::size_t i = 0; i < res.eps.size(); ++i) {
    csv << format_double(res.eps[i]) << ',' << format_double(res.drift[i]) << ',' << format_double(res.deviation[i])
        << ',' << format_double(res.norm_rate[i]) << '\n';
  }
  emit(ctx, "drift_scan.json", {{"r", fam.r},
                                {"s", fam.s},
                                {"expected_drift_slope", fam.r + 1},
                                {"drift", fit_json(res.drift_fit)},
                                {"deviation", fit_json(res.deviation_fit)},
                                {"C_hat", res.C_hat}});
  if (res.drift_fit.valid) {
    say(ctx, "drift slope " + format_double(res.drift_fit.slope) + " +- " + format_double(res.drift_fit.stderr_slope));
  } else {
    say(ctx, "drift " + res.drift_fit.reason);
  }
  return kOk;
}

StabilityResult stability_run(const ModelSpec& model, const PseudoNormFamily& fam, const StabilityConfig& cfg) {
  StabilityResult res;
  res.epsilon = cfg.epsilon;
  res.T = std::min(std::pow(cfg.epsilon, -cfg.r_eff), cfg.T_max);
  const auto z0 = scaled(random_real_direction(model.set, fam.s, cfg.initial_seed), cfg.epsilon);
  IntegratorOptions opt;
  opt.dt = cfg.dt;
  opt.stride = cfg.stride;
  opt.s = fam.s;
  opt.ceiling = cfg.ceiling.value_or(4.0 * cfg.epsilon);
  res.traj = integrate(model, z0, res.T, opt);

  const PseudoNormEvaluator ev(fam, model.omega, model.fields);
  const double N0 = pseudonorm_eval(fam, z0);
  const double n0 = std::pow(sobolev_norm(z0, fam.s), 2);
  double ss_drift = 0.0, ss_rate = 0.0;
  for (const auto& z : res.traj.states) {
    const double n = sobolev_norm(z, fam.s);
    // Past the ceiling the state may be far from real; keep the raw value.
    const double N = ev.value(z.values()).real();
    res.norm.push_back(n);
    res.N.push_back(N);
    res.drift.push_back(ev.drift(z.values()).real());
    res.norm_rate.push_back(ev.norm_drift(z.values()).real());
    res.sup_ratio = std::max(res.sup_ratio, n / cfg.epsilon);
    res.max_excursion_N = std::max(res.max_excursion_N, std::abs(N - N0));
    res.max_excursion_norm = std::max(res.max_excursion_norm, std::abs(n * n - n0));
    ss_drift += res.drift.back() * res.drift.back();
    ss_rate += res.norm_rate.back() * res.norm_rate.back();
  }
  const auto count = static_cast<double>(res.traj.states.size());
  res.rms_drift = std::sqrt(ss_drift / count);
  res.rms_norm_rate = std::sqrt(ss_rate / count);
  res.delta_N = std::abs(res.N.back() - N0);
  res.reality_defect = max_reality_defect(res.traj, fam.s);
  return res;
}

int cmd_stability(const RunContext& ctx) {
  const auto model = make_model(ctx.config);
  const auto fam = build_family(ctx, model);
  const auto& cfg = ctx.config.stability;
  const auto scan = drift_scan(model, fam, ctx.config.drift_scan);
  const auto res = stability_run(model, fam, cfg);

  auto csv = open_csv(ctx, "stability.csv");
  csv << "t,norm_s,N,dN_dt,dnorm_sq_dt\n";
  for (std::size_t i = 0; i < res.traj.states.size(); ++i) {
    csv << format_double(res.traj.times[i]) << ',' << format_double(res.norm[i]) << ',' << format_double(res.N[i])
        << ',' << format_double(res.drift[i]) << ',' << format_double(res.norm_rate[i]) << '\n';
  }
  const double bound = 5.0 * scan.C_hat * res.T * std::pow(cfg.epsilon, fam.r + 1);
  emit(ctx, "stability.json", {{"epsilon", cfg.epsilon},
                               {"T", res.T},
                               {"dt", res.traj.dt},
                               {"steps", res.traj.steps},
                               {"blew_up", res.traj.blew_up},
                               {"error_estimate", res.traj.error_estimate},
                               {"sup_norm_over_eps", res.sup_ratio},
                               {"delta_N", res.delta_N},
                               {"max_excursion_N", res.max_excursion_N},
                               {"max_excursion_norm_sq", res.max_excursion_norm},
                               {"C_hat", scan.C_hat},
                               {"delta_N_bound", bound},
                               {"rms_dN_dt", res.rms_drift},
                               {"rms_dnorm_sq_dt", res.rms_norm_rate},
                               {"rate_ratio", res.rms_drift > 0.0 ? json(res.rms_norm_rate / res.rms_drift) : json(nullptr)},
                               {"reality_defect", res.reality_defect}});
  if (res.traj.blew_up) {
    say(ctx, "blow-up guard tripped at t = " + format_double(res.traj.times.back()));
    return kBlowUp;
  }
  say(ctx, "sup ||z||_s / eps = " + format_double(res.sup_ratio) + ", |Delta N| = " + format_double(res.delta_N));
  return kOk;
}

}  // namespace revnorm::harness
