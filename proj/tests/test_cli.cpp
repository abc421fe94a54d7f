#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracbubble/checks.hpp"
#include "fracbubble/commands.hpp"
#include "fracbubble/config.hpp"
#include "fracbubble/errors.hpp"
#include "fracbubble/io.hpp"
#include "fracbubble/parallel.hpp"

namespace fs = std::filesystem;
using namespace fracbubble;

namespace {

std::string config_code(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.code();
  }
  return "none";
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracbubble_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + FRACBUBBLE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const char* kCoarse = R"({"n":1,"s":0.2,"q":1.5,"weight":{"bumps":[{"c":[0],"r":1,"a":1,"k":2}]},"grid":{"L":40,"N":64}})";

}  // namespace

TEST_CASE("config parsing and validation") {
  const RunConfig c = default_config();
  CHECK(c.params.n == 1);
  CHECK(c.grid.N == 4096);
  CHECK(c.weight.bumps().size() == 1);
  CHECK(config_code("{") == "ConfigParse");
  CHECK(config_code("[]") == "ConfigType");
  CHECK(config_code(R"({"n":1})") == "EmptyWeight");
  CHECK(config_code(R"({"n":1,"s":0.3,"weight":{"bumps":[{"c":[0]}]}})") == "DimensionOrderViolation");
  CHECK(config_code(R"({"n":1,"weight":{"bumps":[{"c":[0],"a":-1}]}})") == "NoPositivePart");
  CHECK(config_code(R"({"n":1,"weight":{"bumps":[{"c":[0]}]},"grid":{"N":100}})") == "GridInvalid");
  CHECK(config_code(R"({"n":1,"weight":{"bumps":[{"c":[0]}]},"regularity":{"terms":[{"m":"big"}]}})") ==
        "ConfigType");
  const RunConfig r = parse_config(R"({"n":1,"weight":{"bumps":[{"c":[0]}]},"regularity":{"terms":[{"gamma":0.5,"m":null}]}})");
  CHECK(std::isinf(r.growth[0].m));
}

TEST_CASE("config digest ignores formatting and tracks content") {
  const RunConfig a = parse_config(R"({"n":1,"weight":{"bumps":[{"c":[0]}]}})");
  const RunConfig b = parse_config("{ \"weight\" : {\"bumps\": [ {\"c\": [0.0], \"r\": 1} ] },\n \"n\": 1 }");
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a) == config_digest(default_config()));
  const RunConfig c = parse_config(R"({"n":1,"eps":0.5,"weight":{"bumps":[{"c":[0]}]}})");
  CHECK(config_digest(a) != config_digest(c));
  CHECK(config_digest(a).size() == 64);
}

TEST_CASE("hashing and number formatting") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("parallel_for writes every slot and rethrows the lowest failing index") {
  std::vector<int> out(1000, 0);
  parallel_for(out.size(), 8, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

TEST_CASE("thread count resolution") {
  ::unsetenv("FRACBUBBLE_THREADS");
  CHECK(resolve_threads(3) == 3);
  CHECK_THROWS_AS(resolve_threads(0), Error);
  ::setenv("FRACBUBBLE_THREADS", "5", 1);
  CHECK(resolve_threads(2) == 5);
  ::setenv("FRACBUBBLE_THREADS", "x", 1);
  CHECK_THROWS_AS(resolve_threads(2), Error);
  ::unsetenv("FRACBUBBLE_THREADS");
}

TEST_CASE("output directory manifest") {
  const fs::path dir = scratch("manifest");
  OutputDir out(dir.string());
  out.write_text("a.txt", "hello\n");
  out.write_csv("t.csv", {"x", "y"}, {{1.0, 0.5}, {2.0, 0.25}});
  out.write_manifest("digest", Json::array(), Json::object());
  const auto m = Json::parse(slurp(dir / "manifest.json"));
  CHECK(m["config_sha256"] == "digest");
  REQUIRE(m["files"].size() == 2);
  for (const auto& f : m["files"]) {
    const std::string rel = f["path"];
    CHECK(f["sha256"] == sha256_file((dir / rel).string()));
    CHECK(f["bytes"].get<std::size_t>() == fs::file_size(dir / rel));
  }
  CHECK(slurp(dir / "t.csv") == "x,y\n1,0.5\n2,0.25\n");
  fs::remove_all(dir);
}

TEST_CASE("check suite names are stable and the coarse grid fails the bubble residual") {
  const auto names = check_names();
  CHECK(names.front() == "model.exponent_identities");
  CHECK(std::find(names.begin(), names.end(), "bubble.pde_residual") != names.end());
  const auto results = run_checks(parse_config(kCoarse), 2);
  REQUIRE(results.size() == names.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].name == names[i]);
    if (results[i].name == "bubble.pde_residual") CHECK_FALSE(results[i].pass);
    if (results[i].name == "model.exponent_identities") CHECK(results[i].pass);
  }
}

TEST_CASE("command line: exit codes and outputs") {
  const fs::path dir = scratch("run");
  CHECK(run("verify --list", dir / "list.txt") == 0);
  CHECK(slurp(dir / "list.txt").find("reduction.kernel_gap") != std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"n":1,"s":0.3,"weight":{"bumps":[{"c":[0]}]}})";
  CHECK(run("landscape --config \"" + (dir / "bad.json").string() + "\" --out \"" + (dir / "o1").string() + "\"",
            dir / "bad.txt") == 3);
  CHECK(slurp(dir / "bad.txt").find("DimensionOrderViolation") != std::string::npos);
  CHECK(run("landscape --config \"" + (dir / "missing.json").string() + "\"", dir / "missing.txt") == 3);
  CHECK(run("frobnicate", dir / "unknown.txt") == 3);

  std::ofstream(dir / "coarse.json") << kCoarse;
  CHECK(run("verify --config \"" + (dir / "coarse.json").string() + "\" --out \"" + (dir / "o2").string() + "\"",
            dir / "coarse.txt") == 1);
  const auto v = Json::parse(slurp(dir / "o2" / "verify.json"));
  CHECK_FALSE(v["all_pass"].get<bool>());
  bool named = false;
  for (const auto& c : v["checks"]) named = named || (c["name"] == "bubble.pde_residual" && !c["pass"].get<bool>());
  CHECK(named);

  CHECK(run("landscape --out \"" + (dir / "o3").string() + "\" --threads 4", dir / "l.txt") == 0);
  const auto m = Json::parse(slurp(dir / "o3" / "manifest.json"));
  CHECK(m["config_sha256"] == config_digest(default_config()));
  for (const auto& f : m["files"]) {
    CHECK(f["sha256"] == sha256_file((dir / "o3" / f["path"].get<std::string>()).string()));
  }
  CHECK(slurp(dir / "o3" / "landscape.csv").rfind("mu,xi_1,gamma,dgamma_dmu,dgamma_dxi_1\n", 0) == 0);

  // Thread count does not change the results.
  CHECK(run("landscape --out \"" + (dir / "o4").string() + "\" --threads 1", dir / "l1.txt") == 0);
  CHECK(slurp(dir / "o3" / "landscape.csv") == slurp(dir / "o4" / "landscape.csv"));
  CHECK(slurp(dir / "o3" / "critical_points.json") == slurp(dir / "o4" / "critical_points.json"));
  fs::remove_all(dir);
}
