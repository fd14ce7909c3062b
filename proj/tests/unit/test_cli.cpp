#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScratch = REVNORM_SCRATCH;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::string& tag) {
  fs::create_directories(kScratch);
  const auto out = kScratch / (tag + ".stdout");
  const auto err = kScratch / (tag + ".stderr");
  const std::string cmd =
      std::string(REVNORM_BIN) + " " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string config(const char* name) { return std::string(REVNORM_CONFIGS) + "/" + name; }

fs::path fresh(const std::string& name) {
  const auto p = kScratch / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("model, build and scan write three deterministic files") {
  for (const char* run_name : {"det_a", "det_b"}) {
    const auto dir = fresh(run_name);
    const std::string common = "--config " + config("nls_d1_K4_r4.json") + " --out " + dir.string();
    CHECK(run(common + " build", run_name).code == 0);
    CHECK(run(common + " scan", run_name).code == 0);
  }
  for (const char* f : {"model.json", "family.json", "resonance_report.json", "scan_buckets.csv"}) {
    const auto a = slurp(kScratch / "det_a" / f);
    CHECK_MESSAGE(!a.empty(), f);
    CHECK_MESSAGE(a == slurp(kScratch / "det_b" / f), f);
  }
  const auto fam = json::parse(slurp(kScratch / "det_a" / "family.json"));
  CHECK(fam.at("config").at("model").at("seed") == 7);
  CHECK(fam.at("family").at("r") == 4);
  CHECK(fam.at("recursion_residual").get<double>() <= 1e-12);
  CHECK(slurp(kScratch / "det_a" / "scan_buckets.csv").rfind("# config: ", 0) == 0);
}

TEST_CASE("V = 0, d = 2 cubic config aborts with the rectangle listed") {
  const auto dir = fresh("rect");
  const auto r = run("--config " + config("nls_d2_V0_cubic.json") + " --out " + dir.string() + " build", "rect");
  CHECK(r.code == 2);
  const auto rep = json::parse(slurp(dir / "resonance_report.json"));
  bool found = false;
  for (const auto& e : rep.at("report").at("resonances")) {
    found = found || e.at("text") == "{(0,0;+),(0,1;-),(1,0;-),(1,1;+)}" ||
            e.at("text") == "{(0,0;-),(0,1;+),(1,0;+),(1,1;-)}";
  }
  CHECK(found);
  CHECK(rep.at("report").at("order") == 4);

  const auto s = run("--config " + config("nls_d2_V0_cubic.json") + " --out " + dir.string() + " scan", "rect_scan");
  CHECK(s.code == 2);
}

TEST_CASE("configuration errors exit 1") {
  auto r = run("--config " + std::string(REVNORM_TEST_DATA) + "/missing_K.json build", "missing");
  CHECK(r.code == 1);
  CHECK(r.err.find("model.K") != std::string::npos);
  r = run("--config " + std::string(REVNORM_TEST_DATA) + "/malformed.json build", "malformed");
  CHECK(r.code == 1);
  r = run("--config /nonexistent/file.json model", "unreadable");
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot read") != std::string::npos);
  r = run("build", "noconfig");
  CHECK(r.code == 1);
  r = run("--threads 0 --config " + config("nls_d1_K4_r4.json") + " scan", "badthreads");
  CHECK(r.code == 1);
}

TEST_CASE("blow-up guard exits 3 with a partial CSV") {
  const auto dir = fresh("blowup");
  const auto r = run("--config " + config("blowup_d1_K4.json") + " --out " + dir.string() + " stability", "blowup");
  CHECK(r.code == 3);
  const auto summary = json::parse(slurp(dir / "stability.json"));
  CHECK(summary.at("blew_up") == true);
  CHECK(slurp(dir / "stability.csv").find("t,norm_s,N") != std::string::npos);
}

TEST_CASE("eval and drift-scan") {
  const auto dir = fresh("eval");
  CHECK(run("--config " + config("nls_d1_K6_r3.json") + " --out " + dir.string() + " eval", "eval").code == 0);
  const auto ev = json::parse(slurp(dir / "eval.json"));
  CHECK(std::abs(ev.at("drift_rate").get<double>() - ev.at("remainder_value").get<double>()) <=
        1e-10 * std::abs(ev.at("drift_rate").get<double>()));

  CHECK(run("--config " + config("nls_d1_K6_r3.json") + " --out " + dir.string() + " drift-scan", "ds").code == 0);
  const auto ds = json::parse(slurp(dir / "drift_scan.json"));
  CHECK(ds.at("drift").at("slope").get<double>() >= 3.7);
  CHECK(ds.at("drift").at("slope").get<double>() <= 4.3);
  CHECK(ds.at("drift").contains("stderr"));

  const auto free_dir = fresh("free");
  CHECK(run("--config " + config("free_d1_K6.json") + " --out " + free_dir.string() + " drift-scan", "free").code == 0);
  const auto fr = json::parse(slurp(free_dir / "drift_scan.json"));
  CHECK(fr.at("drift").at("fit") == false);
  const auto csv = slurp(free_dir / "drift_scan.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    CHECK(line.substr(a + 1, b - a - 1) == "0");
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("--seed overrides the config") {
  const auto dir = fresh("seed");
  CHECK(run("--config " + config("nls_d1_K4_r4.json") + " --seed 123 --out " + dir.string() + " model", "seed").code == 0);
  const auto m = json::parse(slurp(dir / "model.json"));
  CHECK(m.at("model").at("seeds")[0] == 123);
  CHECK(m.at("config").at("model").at("seed") == 123);
}

TEST_CASE("selftest") {
  auto r = run("selftest", "selftest");
  CHECK(r.code == 0);
  std::size_t passes = 0;
  for (std::size_t p = r.out.find("PASS "); p != std::string::npos; p = r.out.find("PASS ", p + 1)) ++passes;
  CHECK(passes >= 25);

  r = run("selftest --inject-fault", "selftest_fault");
  CHECK(r.code != 0);
  CHECK(r.err.find("invariant violated") != std::string::npos);
  CHECK(r.err.find("a_{conj j, conj L} = -a_{jL}") != std::string::npos);
}
