#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using namespace henlab;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "henlab");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("special-params") {
  auto r = run({"special-params"});
  CHECK(r.code == 0);
  CHECK(r.out.find("a1 = -1.543689012692") != std::string::npos);
  CHECK(r.out.find("a2 = -1.892910987908") != std::string::npos);
}

TEST_CASE("crossmap closed radicals") {
  auto r = run({"crossmap", "--word", "s-", "--a", "-2", "--b", "0", "--x1", "0", "--y0", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("A = -0.765366864") != std::string::npos);
  CHECK(r.out.find("B = -1.414213562") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({"swallow", "--grid", "8x8", "--out", "-", "--a-range", "0.6:-2.2"}).code == 2);
  CHECK(run({"swallow", "--grid", "1x8", "--out", "-"}).code == 2);
  CHECK(run({"crossmap", "--word", "s-,q"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"crossmap", "--bogus", "1"}).code == 2);
  // no tangency root in the scanned bracket for a piece that does not exist there
  auto r = run({"renorm", "--word", "c1", "--a", "0.5"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"twin", "--j", "2", "--b-hat", "1e-4"}).code == 3);
}

TEST_CASE("help lists flags with defaults") {
  auto r = run({"swallow", "--help"});
  CHECK(r.code == 0);
  for (const char* flag : {"--grid", "--a-range", "--b-range", "--kernel", "--n", "--n-lyap", "--format", "--out",
                           "--workers"})
    CHECK(r.out.find(flag) != std::string::npos);
  CHECK(r.out.find("400x400") != std::string::npos);
  CHECK(r.out.find("-2.2:0.6") != std::string::npos);
}

TEST_CASE("raster to stdout is reproducible") {
  std::vector<std::string> args{"swallow", "--grid", "16x12", "--out", "-", "--workers", "1"};
  auto a = run(args);
  args.back() = "4";
  auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out.rfind("P6\n16 12\n255\n", 0) == 0);
  CHECK(a.out.size() == 13 + 16 * 12 * 3);
  CHECK(a.out == b.out);
  auto c = run({"henon-atlas", "--grid", "5x4", "--n-lyap", "200", "--format", "csv", "--out", "-"});
  CHECK(c.code == 0);
  CHECK(c.out.find("a,b,payload,value") != std::string::npos);
}

TEST_CASE("config layering") {
  const char* path = "henlab_cli_test.cfg";
  {
    std::ofstream o(path);
    o << "subcommand=crossmap\nword=s-\na=-2\nx1=0.1\n";
  }
  auto r = run({"--config", path, "--dump-config", "crossmap", "--x1", "0.2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("x1=0.2\n") != std::string::npos);
  CHECK(r.out.find("a=-2\n") != std::string::npos);
  CHECK(r.out.find("y0=0\n") != std::string::npos);
  auto r2 = run({"crossmap", "--config", path, "--dump-config"});
  CHECK(r2.out.find("x1=0.1\n") != std::string::npos);
  {
    std::ofstream o(path);
    o << "subcommand=swallow\n";
  }
  CHECK(run({"--config", path, "crossmap"}).code == 2);
  {
    std::ofstream o(path);
    o << "nonsense=1\n";
  }
  CHECK(run({"--config", path, "crossmap"}).code == 2);
  std::remove(path);
}

TEST_CASE("pipelines") {
  auto r = run({"renorm", "--word", "c1", "--b", "1e-3", "--grid", "9"});
  CHECK(r.code == 0);
  CHECK(r.out.find("bbar = 0.001") != std::string::npos);
  auto w = run({"renorm-window", "--word", "c1", "--oracle", "1"});
  CHECK(w.code == 0);
  CHECK(w.out.find("# band oracle") != std::string::npos);
  auto t = run({"twin"});
  CHECK(t.code == 0);
  CHECK(t.out.find("attracting cycles = 2") != std::string::npos);
  auto at = run({"attractors", "--a", "-1.4", "--b", "0.3"});
  CHECK(at.code == 0);
  auto p = run({"piece", "--word", "c1", "--a", "-1.9", "--b", "1e-3"});
  CHECK(p.code == 0);
  CHECK(p.out.find("y,x_left,x_right") != std::string::npos);
  auto c = run({"certify"});
  CHECK(c.code == 0);
  CHECK(c.out.find("K3 cone violations = 0") != std::string::npos);
}
