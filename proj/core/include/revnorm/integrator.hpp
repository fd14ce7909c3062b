#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "revnorm/model.hpp"
#include "revnorm/pseudonorm.hpp"
#include "revnorm/spectral.hpp"

namespace revnorm {

struct IntegratorOptions {
  double dt = 1e-3;
  /// Keep every stride-th step as a sample (the endpoint is always kept).
  int stride = 1;
  /// Abort when ||z||_s exceeds this value or stops being finite.
  double ceiling = std::numeric_limits<double>::infinity();
  /// Sobolev index used by the ceiling and the error estimate.
  double s = 0.0;
  /// Spend one extra stride at dt/2 to estimate the local error.
  bool estimate_error = true;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::string scheme = "lawson-rk4";
  /// Signed step actually used (T / steps).
  double dt = 0.0;
  /// ||z_h - z_{h/2}||_s / 15 after the first stride, 0 when not requested.
  double error_estimate = 0.0;
  std::int64_t steps = 0;
  bool blew_up = false;

  [[nodiscard]] const StateVector& final_state() const { return states.back(); }
};

/// Integrates i z'_j = omega_j z_j + F_j(z) over [0, T] (T may be negative).
///
/// Lawson's fourth-order exponential Runge-Kutta: the phases exp(-i omega t)
/// are applied exactly and the classical four-stage rule advances the
/// rotated-frame nonlinearity. The step is adjusted to T / ceil(|T| / dt).
[[nodiscard]] Trajectory integrate(const ModelSpec& model, const StateVector& z0, double T,
                                   const IntegratorOptions& options = {});

/// ||rho(Phi^t z0) - Phi^{-t}(rho z0)||_s. Throws DomainError for a non-real z0.
[[nodiscard]] double check_reversibility_flow(const ModelSpec& model, const StateVector& z0, double t, double dt,
                                              double s = 0.0);

/// Largest ||rho(z) - conj(z)||_s over the samples.
[[nodiscard]] double max_reality_defect(const Trajectory& traj, double s);

/// A real state with ||z||_s = 1. Amplitudes are seeded uniform draws scaled
/// by weight^-s, so every mode contributes to the norm at comparable size.
[[nodiscard]] StateVector random_real_direction(const IndexSetPtr& set, double s, std::uint64_t seed);

/// CSV with columns t, re(j), im(j) per index, norm_s and (when fam is given) N.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double s, const PseudoNormFamily* fam = nullptr);

}  // namespace revnorm
