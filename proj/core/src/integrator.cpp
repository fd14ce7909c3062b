#include "revnorm/integrator.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "revnorm/error.hpp"

namespace revnorm {

namespace {

class LawsonRk4 {
 public:
  LawsonRk4(const ModelSpec& model, double h) : h_(h), n_(model.set->size()) {
    for (const auto& f : model.fields) {
      if (!f.is_zero()) fields_.emplace_back(f, *model.set);
    }
    half_.resize(n_);
    full_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double w = model.omega[i];
      half_[i] = std::polar(1.0, -w * h / 2.0);
      full_[i] = std::polar(1.0, -w * h);
    }
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->resize(n_);
  }

  void step(std::span<cplx> y) {
    if (fields_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) y[i] *= full_[i];
      return;
    }
    const cplx hh = h_ / 2.0;
    nonlinear(y, k1_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = half_[i] * (y[i] + hh * k1_[i]);
    nonlinear(tmp_, k2_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = half_[i] * y[i] + hh * k2_[i];
    nonlinear(tmp_, k3_);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = full_[i] * y[i] + h_ * half_[i] * k3_[i];
    nonlinear(tmp_, k4_);
    for (std::size_t i = 0; i < n_; ++i) {
      y[i] = full_[i] * y[i] +
             (h_ / 6.0) * (full_[i] * k1_[i] + 2.0 * half_[i] * (k2_[i] + k3_[i]) + k4_[i]);
    }
  }

 private:
  void nonlinear(std::span<const cplx> y, std::vector<cplx>& out) const {
    std::fill(out.begin(), out.end(), cplx{});
    for (const auto& f : fields_) f.apply(y, out, cplx(0.0, -1.0));
  }

  double h_;
  std::size_t n_;
  std::vector<CompiledField> fields_;
  std::vector<cplx> half_, full_;
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

bool over_ceiling(const StateVector& z, double s, double ceiling) {
  const double n = sobolev_norm(z, s);
  return !std::isfinite(n) || n > ceiling;
}

}  // namespace

Trajectory integrate(const ModelSpec& model, const StateVector& z0, double T, const IntegratorOptions& options) {
  if (!same_index_set(model.set, z0.index_set())) throw DomainError("integrate: state is not over the model's index set");
  if (!(options.dt > 0.0)) throw DomainError("integrate: dt must be > 0");
  if (options.stride < 1) throw DomainError("integrate: stride must be >= 1");
  if (!std::isfinite(T)) throw DomainError("integrate: T must be finite");

  Trajectory traj;
  const auto steps = static_cast<std::int64_t>(std::ceil(std::abs(T) / options.dt - 1e-9));
  traj.dt = steps > 0 ? T / static_cast<double>(steps) : 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(z0);
  if (steps == 0) return traj;

  if (options.estimate_error) {
    const std::int64_t n = std::min<std::int64_t>(options.stride, steps);
    StateVector coarse = z0;
    StateVector fine = z0;
    LawsonRk4 a(model, traj.dt);
    LawsonRk4 b(model, traj.dt / 2.0);
    for (std::int64_t i = 0; i < n; ++i) {
      a.step(coarse.values());
      b.step(fine.values());
      b.step(fine.values());
    }
    traj.error_estimate = sobolev_distance(coarse, fine, options.s) / 15.0;
  }

  LawsonRk4 rk(model, traj.dt);
  StateVector y = z0;
  for (std::int64_t i = 1; i <= steps; ++i) {
    rk.step(y.values());
    traj.steps = i;
    const bool last = i == steps;
    const bool blown = over_ceiling(y, options.s, options.ceiling);
    if (blown || last || i % options.stride == 0) {
      bool finite = true;
      for (auto v : y.values()) finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
      if (finite) {
        traj.times.push_back(static_cast<double>(i) * traj.dt);
        traj.states.push_back(y);
      }
    }
    if (blown) {
      traj.blew_up = true;
      break;
    }
  }
  return traj;
}

double check_reversibility_flow(const ModelSpec& model, const StateVector& z0, double t, double dt, double s) {
  if (!is_real_state(z0, 1e-12)) throw DomainError("check_reversibility_flow: initial state is not real");
  IntegratorOptions opt;
  opt.dt = dt;
  opt.stride = 1 << 30;
  opt.estimate_error = false;
  const auto fwd = integrate(model, z0, t, opt);
  const auto bwd = integrate(model, rho(z0), -t, opt);
  return sobolev_distance(rho(fwd.final_state()), bwd.final_state(), s);
}

double max_reality_defect(const Trajectory& traj, double s) {
  double m = 0.0;
  for (const auto& z : traj.states) m = std::max(m, reality_defect(z, s));
  return m;
}

StateVector random_real_direction(const IndexSetPtr& set, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  StateVector z(set);
  for (std::size_t i = 0; i < set->size(); ++i) {
    const auto j = set->mode(i);
    if (j.delta() < 0) continue;
    const double re = uniform();
    const double im = uniform();
    const cplx v = cplx(re, im) * std::pow(static_cast<double>(j.weight_sq()), -s / 2.0);
    z[i] = v;
    z[set->conj_position(i)] = std::conj(v);
  }
  const double n = sobolev_norm(z, s);
  for (auto& v : z.values()) v /= n;
  return z;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double s, const PseudoNormFamily* fam) {
  const auto& set = *traj.states.front().index_set();
  os << "t";
  for (auto j : set.modes()) os << ",re" << j.to_string() << ",im" << j.to_string();
  os << ",norm_s";
  if (fam != nullptr) os << ",N";
  os << '\n';
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& z = traj.states[k];
    os << traj.times[k];
    for (auto v : z.values()) os << ',' << v.real() << ',' << v.imag();
    os << ',' << sobolev_norm(z, s);
    if (fam != nullptr) os << ',' << pseudonorm_eval(*fam, z);
    os << '\n';
  }
  os.precision(old);
}

}  // namespace revnorm
