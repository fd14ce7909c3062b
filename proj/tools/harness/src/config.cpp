#include "revnorm/harness/config.hpp"

#include <fstream>

namespace revnorm::harness {

namespace {

const json& section(const json& doc, const char* name, bool required) {
  static const json empty = json::object();
  if (!doc.contains(name)) {
    if (required) throw ConfigError(std::string("config: missing required field '") + name + "'");
    return empty;
  }
  const json& v = doc.at(name);
  if (!v.is_object()) throw ConfigError(std::string("config: field '") + name + "' must be an object");
  return v;
}

template <class T>
T read(const json& obj, const std::string& path, const char* key, std::optional<T> fallback = std::nullopt) {
  const std::string full = path + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError("config: missing required field '" + full + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + full + "' has the wrong type (" + obj.at(key).dump() + ")");
  }
}

Nonlinearity read_nonlinearity(const json& obj, const std::string& path, const char* key) {
  const std::string full = path + "." + key;
  if (!obj.contains(key)) throw ConfigError("config: missing required field '" + full + "'");
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError("config: field '" + full + "' must be a non-empty array");
  Nonlinearity nl;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = full + "[" + std::to_string(i) + "]";
    if (!v[i].is_object()) throw ConfigError("config: field '" + p + "' must be an object");
    NonlinearTerm t;
    t.p = read<int>(v[i], p, "p");
    t.q = read<int>(v[i], p, "q", 0);
    t.lambda = read<double>(v[i], p, "lambda", 1.0);
    nl.push_back(t);
  }
  return nl;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

}  // namespace

Config parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  Config cfg;
  cfg.raw = doc;

  const json& m = section(doc, "model", true);
  auto& mc = cfg.model;
  mc.kind = read<std::string>(m, "model", "kind");
  mc.d = read<int>(m, "model", "d");
  mc.K = read<int>(m, "model", "K");
  require(mc.d >= 1 && mc.d <= kMaxDim, "model.d must be in 1..3");
  require(mc.K >= 1 && mc.K <= kMaxLattice, "model.K must be >= 1");
  try {
    mc.options.potential = potential_kind_from_string(read<std::string>(m, "model", "potential", std::string("random")));
    mc.options.convention =
        frequency_convention_from_string(read<std::string>(m, "model", "frequency_convention", std::string("laplacian")));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (mc.kind == "nls") {
    mc.seeds = {read<std::uint64_t>(m, "model", "seed")};
    mc.nonlinearity = read_nonlinearity(m, "model", "nonlinearity");
  } else if (mc.kind == "coupled_nls") {
    mc.seeds = read<std::vector<std::uint64_t>>(m, "model", "seeds");
    require(mc.seeds.size() == 2, "model.seeds must hold two seeds");
    mc.nonlinearity = read_nonlinearity(m, "model", "nonlinearity");
    mc.nonlinearity2 = read_nonlinearity(m, "model", "nonlinearity2");
  } else if (mc.kind == "synthetic") {
    mc.seeds = {read<std::uint64_t>(m, "model", "seed")};
    mc.degrees = read<std::vector<int>>(m, "model", "degrees");
    mc.scale = read<double>(m, "model", "scale", 1.0);
    require(!mc.degrees.empty(), "model.degrees must be non-empty");
  } else if (mc.kind == "free") {
    mc.seeds = {read<std::uint64_t>(m, "model", "seed")};
  } else {
    throw ConfigError("config: model.kind must be one of nls, coupled_nls, synthetic, free (got '" + mc.kind + "')");
  }

  const json& b = section(doc, "build", true);
  cfg.build.s = read<double>(b, "build", "s");
  cfg.build.r = read<int>(b, "build", "r");
  cfg.build.res_tol = read<double>(b, "build", "res_tol", kDefaultResTol);
  cfg.build.class_gamma = read<double>(b, "build", "class_gamma", 0.0);
  require(cfg.build.s >= 0, "build.s must be >= 0");
  require(cfg.build.r >= 2 && cfg.build.r <= kMaxDegree, "build.r must be in 2..16");

  const json& sc = section(doc, "scan", false);
  cfg.scan.r = read<int>(sc, "scan", "r", cfg.build.r);
  cfg.scan.threshold = read<double>(sc, "scan", "threshold", 1e-8);
  cfg.scan.max_listed = read<std::size_t>(sc, "scan", "max_listed", 1000);
  require(cfg.scan.r >= 1 && cfg.scan.r <= kMaxDegree, "scan.r must be in 1..16");

  const json& ev = section(doc, "eval", false);
  cfg.eval.epsilon = read<double>(ev, "eval", "epsilon", 0.05);
  cfg.eval.direction_seed = read<std::uint64_t>(ev, "eval", "direction_seed", 11);

  const json& ds = section(doc, "drift_scan", false);
  cfg.drift_scan.eps_max = read<double>(ds, "drift_scan", "eps_max", 0.1);
  cfg.drift_scan.points = read<int>(ds, "drift_scan", "points", 8);
  cfg.drift_scan.ratio = read<double>(ds, "drift_scan", "ratio", 1.4142135623730951);
  cfg.drift_scan.direction_seed = read<std::uint64_t>(ds, "drift_scan", "direction_seed", 11);
  require(cfg.drift_scan.points >= 3, "drift_scan.points must be >= 3");
  require(cfg.drift_scan.ratio > 1.0, "drift_scan.ratio must be > 1");
  require(cfg.drift_scan.eps_max > 0.0, "drift_scan.eps_max must be > 0");

  const json& st = section(doc, "stability", false);
  cfg.stability.epsilon = read<double>(st, "stability", "epsilon", 0.05);
  cfg.stability.r_eff = read<double>(st, "stability", "r_eff", static_cast<double>(cfg.build.r));
  cfg.stability.T_max = read<double>(st, "stability", "T_max", 8000.0);
  cfg.stability.dt = read<double>(st, "stability", "dt", 0.02);
  cfg.stability.stride = read<int>(st, "stability", "stride", 50);
  cfg.stability.initial_seed = read<std::uint64_t>(st, "stability", "initial_seed", 11);
  if (st.contains("ceiling")) cfg.stability.ceiling = read<double>(st, "stability", "ceiling");
  require(cfg.stability.epsilon > 0.0, "stability.epsilon must be > 0");
  require(cfg.stability.dt > 0.0, "stability.dt must be > 0");
  require(cfg.stability.stride >= 1, "stability.stride must be >= 1");
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

void override_seed(Config& cfg, std::uint64_t seed) {
  if (cfg.model.kind == "coupled_nls") {
    cfg.model.seeds = {seed, seed + 1};
    cfg.raw["model"]["seeds"] = cfg.model.seeds;
  } else {
    cfg.model.seeds = {seed};
    cfg.raw["model"]["seed"] = seed;
  }
}

ModelSpec make_model(const Config& cfg) {
  const auto& m = cfg.model;
  if (m.kind == "nls") return build_nls_model(m.d, m.K, m.seeds[0], m.nonlinearity, m.options);
  if (m.kind == "coupled_nls") {
    return build_coupled_nls_model(m.d, m.K, {m.seeds[0], m.seeds[1]}, m.nonlinearity, m.nonlinearity2, m.options);
  }
  if (m.kind == "synthetic") return build_synthetic_model(m.d, m.K, m.seeds[0], m.degrees, m.scale, m.options);
  return build_free_model(m.d, m.K, m.seeds[0], m.options);
}

BuildOptions build_options(const Config& cfg) {
  BuildOptions o;
  o.res_tol = cfg.build.res_tol;
  o.class_gamma = cfg.build.class_gamma;
  return o;
}

}  // namespace revnorm::harness
