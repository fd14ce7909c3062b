#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "revnorm/error.hpp"
#include "revnorm/model.hpp"
#include "revnorm/pseudonorm.hpp"

namespace revnorm::harness {

using nlohmann::json;

/// Bad or incomplete configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ModelConfig {
  std::string kind = "nls";
  int d = 1;
  int K = 4;
  std::vector<std::uint64_t> seeds;
  Nonlinearity nonlinearity;
  Nonlinearity nonlinearity2;
  ModelOptions options;
  std::vector<int> degrees;  // synthetic only
  double scale = 1.0;        // synthetic only
};

struct BuildConfig {
  double s = 2.0;
  int r = 4;
  double res_tol = kDefaultResTol;
  double class_gamma = 0.0;
};

struct ScanConfig {
  int r = 4;
  double threshold = 1e-8;
  std::size_t max_listed = 1000;
};

struct EvalConfig {
  double epsilon = 0.05;
  std::uint64_t direction_seed = 11;
};

struct DriftScanConfig {
  double eps_max = 0.1;
  int points = 8;
  double ratio = 1.4142135623730951;
  std::uint64_t direction_seed = 11;
};

struct StabilityConfig {
  double epsilon = 0.05;
  double r_eff = 4.0;
  double T_max = 8000.0;
  double dt = 0.02;
  int stride = 50;
  /// Blow-up guard on ||z||_s; defaults to 4 * epsilon.
  std::optional<double> ceiling;
  std::uint64_t initial_seed = 11;
};

struct Config {
  json raw;
  ModelConfig model;
  BuildConfig build;
  ScanConfig scan;
  EvalConfig eval;
  DriftScanConfig drift_scan;
  StabilityConfig stability;
};

/// Validates and reads a configuration document; throws ConfigError.
[[nodiscard]] Config parse_config(const json& doc);
/// Reads a JSON file; unreadable or malformed files raise ConfigError.
[[nodiscard]] Config load_config(const std::filesystem::path& path);

/// Replaces the model seed(s) by seed (coupled models get seed, seed + 1)
/// and records the override in raw.
void override_seed(Config& cfg, std::uint64_t seed);

[[nodiscard]] ModelSpec make_model(const Config& cfg);
[[nodiscard]] BuildOptions build_options(const Config& cfg);

}  // namespace revnorm::harness
