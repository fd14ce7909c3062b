#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "revnorm/harness/config.hpp"
#include "revnorm/harness/fit.hpp"
#include "revnorm/integrator.hpp"
#include "revnorm/model.hpp"
#include "revnorm/pseudonorm.hpp"

namespace revnorm::harness {

enum ExitCode : int { kOk = 0, kConfigError = 1, kResonance = 2, kBlowUp = 3, kFailure = 4 };

struct RunContext {
  Config config;
  std::filesystem::path out = ".";
  int threads = 1;
  std::ostream* log = nullptr;  ///< progress messages; nullptr for silence
};

[[nodiscard]] int cmd_model(const RunContext& ctx);
[[nodiscard]] int cmd_build(const RunContext& ctx);
[[nodiscard]] int cmd_scan(const RunContext& ctx);
[[nodiscard]] int cmd_eval(const RunContext& ctx);
[[nodiscard]] int cmd_drift_scan(const RunContext& ctx);
[[nodiscard]] int cmd_stability(const RunContext& ctx);

struct DriftScanResult {
  std::vector<double> eps;
  std::vector<double> drift;      ///< |d/dt N(eps z)|
  std::vector<double> deviation;  ///< |N(eps z) - ||eps z||_s^2|
  std::vector<double> norm_rate;  ///< |d/dt ||eps z||_s^2|
  LogLogFit drift_fit;
  LogLogFit deviation_fit;
  /// max over the grid of drift / eps^{r+1}.
  double C_hat = 0.0;
};

/// Pointwise drift and deviation of a family along eps * z_hat on the
/// geometric grid eps_max / ratio^i.
[[nodiscard]] DriftScanResult drift_scan(const ModelSpec& model, const PseudoNormFamily& fam,
                                         const DriftScanConfig& cfg);

struct StabilityResult {
  Trajectory traj;
  double epsilon = 0.0;
  double T = 0.0;
  std::vector<double> norm;        ///< ||z(t)||_s per sample
  std::vector<double> N;           ///< N(z(t)) per sample
  std::vector<double> drift;       ///< d/dt N(z(t)) per sample
  std::vector<double> norm_rate;   ///< d/dt ||z(t)||_s^2 per sample
  double sup_ratio = 0.0;          ///< sup ||z(t)||_s / eps
  double delta_N = 0.0;            ///< |N(z(T)) - N(z(0))|
  double max_excursion_N = 0.0;    ///< max_t |N(z(t)) - N(z(0))|
  double max_excursion_norm = 0.0; ///< max_t | ||z(t)||^2 - ||z(0)||^2 |
  double rms_drift = 0.0;
  double rms_norm_rate = 0.0;
  double reality_defect = 0.0;
};

/// Integrates from eps * (seeded real direction) over T = min(eps^-r_eff, T_max).
[[nodiscard]] StabilityResult stability_run(const ModelSpec& model, const PseudoNormFamily& fam,
                                            const StabilityConfig& cfg);

/// Shortest round-trip representation of a double (deterministic across runs).
[[nodiscard]] std::string format_double(double x);

/// Writes doc with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace revnorm::harness
