#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "henlab/config.hpp"
#include "henlab/errors.hpp"

using namespace henlab;

TEST_CASE("parse and canonical round trip") {
  auto c = RunConfig::parse("# comment\nsubcommand = swallow\n grid=8x8\na-range=-2.2:0.6\n\nout=-\n");
  CHECK(c.subcommand == "swallow");
  CHECK(c.get("grid") == "8x8");
  CHECK(c.get("a-range") == "-2.2:0.6");
  std::string text = c.canonical();
  CHECK(text == "subcommand=swallow\na-range=-2.2:0.6\ngrid=8x8\nout=-\n");
  CHECK(RunConfig::parse(text) == c);
  CHECK(RunConfig::parse(text).canonical() == text);
  CHECK_THROWS_AS(RunConfig::parse("novalue\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("=3\n"), ConfigError);
  CHECK_THROWS_AS(c.get("missing"), ConfigError);
}

TEST_CASE("precedence") {
  RunConfig d, f, fl;
  d.set("n", "1");
  d.set("grid", "2x2");
  d.set("out", "a.ppm");
  f.set("n", "2");
  f.set("grid", "4x4");
  fl.set("n", "3");
  auto c = layer(d, f, fl);
  CHECK(c.get_int("n") == 3);
  CHECK(c.get("grid") == "4x4");
  CHECK(c.get("out") == "a.ppm");
}

TEST_CASE("value parsers") {
  CHECK(parse_real("-1e-3", "x") == -1e-3);
  CHECK_THROWS_AS(parse_real("1.2.3", "x"), ConfigError);
  CHECK_THROWS_AS(parse_real("", "x"), ConfigError);
  CHECK(parse_int("42", "x") == 42);
  CHECK_THROWS_AS(parse_int("4.2", "x"), ConfigError);
  CHECK(parse_range("-2.2:0.6") == std::pair<double, double>{-2.2, 0.6});
  CHECK_THROWS_AS(parse_range("0.6:-2.2"), ConfigError);
  CHECK_THROWS_AS(parse_range("0.6"), ConfigError);
  CHECK(parse_grid("400x300") == std::pair<int, int>{400, 300});
  CHECK_THROWS_AS(parse_grid("1x5"), ConfigError);
  CHECK_THROWS_AS(parse_grid("5by5"), ConfigError);
}

TEST_CASE("load from file") {
  const char* path = "henlab_test_config.txt";
  {
    std::ofstream o(path);
    o << "subcommand=renorm\nword=c2\nb=1e-5\n";
  }
  auto c = load_config(path);
  CHECK(c.subcommand == "renorm");
  CHECK(c.get_double("b") == 1e-5);
  std::remove(path);
  CHECK_THROWS_AS(load_config("/nonexistent/henlab.cfg"), ConfigError);
}
