#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "vortexflow/cli.hpp"

namespace fs = std::filesystem;
using namespace vortexflow;

namespace {

const std::string small_config = std::string(VORTEXFLOW_FIXTURES) + "/small.ini";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vortexflow_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return out;
}

int run_cmd(const std::string& sub, const std::string& config, const fs::path& out_dir, std::string* err_text = nullptr,
            std::optional<std::uint64_t> seed = {}) {
  std::ostringstream out, err;
  const int rc = run({sub, config, out_dir.string(), seed}, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST_CASE("every subcommand writes its artifacts") {
  const std::map<std::string, std::vector<std::string>> expected{
      {"crit", {"sectors.txt", "critical.json", "crit_1_0.loop", "crit_2_1.loop"}},
      {"hessian", {"hessian.json"}},
      {"flow", {"initial.loop", "trajectory.csv", "flow.json"}},
      {"scan", {"scan.json"}},
      {"index", {"index.txt", "index.csv"}},
      {"webs", {"webs.txt", "webs_counts.csv", "dot/webs_B1_k1.dot"}},
      {"energy-check", {"energy.json"}},
      {"period", {"period.json"}},
  };
  REQUIRE(subcommands().size() == expected.size());
  for (const auto& [sub, files] : expected) {
    INFO(sub);
    const fs::path dir = scratch(sub);
    std::string err;
    CHECK(run_cmd(sub, small_config, dir, &err) == 0);
    CHECK(err.empty());
    CHECK(fs::exists(dir / "effective_config.ini"));
    for (const auto& f : files) CHECK(fs::exists(dir / f));
    fs::remove_all(dir);
  }
}

TEST_CASE("identical runs give identical bytes") {
  for (const std::string sub : {"crit", "flow", "scan", "webs", "energy-check", "period"}) {
    INFO(sub);
    const fs::path dir = scratch("det");
    REQUIRE(run_cmd(sub, small_config, dir) == 0);
    const auto first = snapshot(dir);
    REQUIRE(run_cmd(sub, small_config, dir) == 0);
    CHECK(first == snapshot(dir));
    fs::remove_all(dir);
  }
}

TEST_CASE("seed override changes the scan") {
  const fs::path a = scratch("seed_a");
  const fs::path b = scratch("seed_b");
  REQUIRE(run_cmd("scan", small_config, a, nullptr, 1) == 0);
  REQUIRE(run_cmd("scan", small_config, b, nullptr, 2) == 0);
  CHECK(snapshot(a).at("scan.json") != snapshot(b).at("scan.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("invalid configs fail cleanly") {
  const fs::path cfg = fs::temp_directory_path() / "vortexflow_cli_bad.ini";
  {
    std::ofstream os(cfg);
    os << "[space]\ntau = -1\n";
  }
  const fs::path dir = scratch("bad");
  std::string err;
  CHECK(run_cmd("crit", cfg.string(), dir, &err) == 2);
  CHECK(err.rfind("error field=space.tau message=\"", 0) == 0);
  CHECK(std::count(err.begin(), err.end(), '\n') == 1);
  CHECK(!fs::exists(dir));
  CHECK(run_cmd("nonsense", small_config, dir, &err) != 0);
  CHECK(run_cmd("crit", "/nonexistent.ini", dir, &err) == 2);
  fs::remove(cfg);
}

TEST_CASE("executable entry point") {
  const std::string exe = VORTEXFLOW_CLI;
  const fs::path dir = scratch("exe");
  const std::string ok = exe + " index --config " + small_config + " --out " + dir.string() + " > /dev/null";
  CHECK(std::system(ok.c_str()) == 0);
  CHECK(fs::exists(dir / "index.csv"));
  const std::string bad = exe + " index > /dev/null 2>&1";
  CHECK(std::system(bad.c_str()) != 0);
  fs::remove_all(dir);
}

TEST_CASE("outputs match golden files") {
  const fs::path dir = scratch("golden");
  REQUIRE(run_cmd("index", small_config, dir) == 0);
  REQUIRE(run_cmd("webs", small_config, dir) == 0);
  const auto got = snapshot(dir);
  const auto gold = snapshot(fs::path(VORTEXFLOW_FIXTURES) / "golden");
  for (const auto& [name, bytes] : gold) {
    INFO(name);
    REQUIRE(got.count(name) == 1);
    CHECK(got.at(name) == bytes);
  }
  fs::remove_all(dir);
}

TEST_CASE("re-running from the echoed config reproduces the run") {
  const fs::path dir = scratch("echo");
  REQUIRE(run_cmd("scan", small_config, dir) == 0);
  const auto first = snapshot(dir);
  const fs::path echo = fs::temp_directory_path() / "vortexflow_cli_echo.ini";
  fs::copy_file(dir / "effective_config.ini", echo, fs::copy_options::overwrite_existing);
  REQUIRE(run_cmd("scan", echo.string(), dir) == 0);
  CHECK(first == snapshot(dir));
  fs::remove(echo);
  fs::remove_all(dir);
}

TEST_CASE("crit on weights (2) lists two sectors") {
  const fs::path cfg = fs::temp_directory_path() / "vortexflow_cli_w2.ini";
  {
    std::ofstream os(cfg);
    os << "[space]\nweights = 2\ntau = 1\n[grid]\nn_theta = 32\n";
  }
  const fs::path dir = scratch("w2");
  REQUIRE(run_cmd("crit", cfg.string(), dir) == 0);
  const std::string table = snapshot(dir).at("sectors.txt");
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  CHECK(table.find("\n2   1   3.14159265") != std::string::npos);
  fs::remove(cfg);
  fs::remove_all(dir);
}
