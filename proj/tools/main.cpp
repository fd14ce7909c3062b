#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "revnorm/harness/commands.hpp"
#include "revnorm/harness/config.hpp"
#include "revnorm/harness/selftest.hpp"

using namespace revnorm::harness;

namespace {

nlohmann::json selftest_json(const SelftestReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"invariant", c.invariant}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"passed", rep.passed()}, {"failures", rep.failures()}, {"checks", checks}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible pseudo-norm builder and experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for the resonance scan")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "overrides the model seed(s)");

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const RunContext&);
  };
  const Sub subs[] = {
      {"model", "write the truncated model", cmd_model},
      {"build", "build N_s^(r) and write the family", cmd_build},
      {"scan", "enumerate small divisors up to size r", cmd_scan},
      {"eval", "evaluate N and its drift at a seeded state", cmd_eval},
      {"drift-scan", "pointwise drift over a geometric grid of eps", cmd_drift_scan},
      {"stability", "integrate and track N along the flow", cmd_stability},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);

  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
  bool inject_fault = false;
  selftest->add_flag("--inject-fault", inject_fault, "corrupt one model coefficient on purpose");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (selftest->parsed()) {
      const auto rep = run_selftest({inject_fault}, &std::cout);
      if (app.count("--out") > 0) {
        std::filesystem::create_directories(out_dir);
        write_json(std::filesystem::path(out_dir) / "selftest.json", selftest_json(rep));
      }
      if (!rep.passed()) {
        for (const auto& c : rep.checks) {
          if (!c.passed) std::cerr << "selftest: invariant violated: " << c.invariant << " (" << c.name << ")\n";
        }
        return kFailure;
      }
      return kOk;
    }
    if (config_path.empty()) {
      std::cerr << "config: --config is required for this subcommand\n";
      return kConfigError;
    }
    RunContext ctx;
    ctx.config = load_config(config_path);
    if (seed) override_seed(ctx.config, *seed);
    ctx.out = out_dir;
    ctx.threads = threads;
    ctx.log = &std::cerr;
    for (const auto& s : subs) {
      if (app.got_subcommand(s.name)) return s.fn(ctx);
    }
    return kFailure;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
