#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "henlab/atlas.hpp"
#include "henlab/errors.hpp"

using namespace henlab;

TEST_CASE("pixel geometry") {
  KernelParams p;
  p.n_escape = 50;
  auto r = sweep({-2, 1, -0.5, 0.5}, Kernel::HenonEscape, 4, 3, p, 1);
  CHECK(r.a_of(0) == -2);
  CHECK(r.a_of(3) == 1);
  CHECK(r.b_of(0) == 0.5);
  CHECK(r.b_of(2) == -0.5);
  CHECK(r.pixels.size() == 12);
  CHECK_THROWS_AS(sweep({-2, 1, -0.5, 0.5}, Kernel::HenonEscape, 1, 3, p, 1), ConfigError);
  CHECK_THROWS_AS(sweep({1, -2, -0.5, 0.5}, Kernel::HenonEscape, 4, 3, p, 1), ConfigError);
  CHECK_THROWS_AS(sweep({-2, 1, -0.5, 0.5}, Kernel::EmbedCompare, 4, 3, p, 1), ConfigError);
}

TEST_CASE("kernels at known pixels") {
  KernelParams p;
  auto hl = eval_pixel(Kernel::HenonLyap, 0, 0.1, p);
  CHECK(hl.kind == Payload::Lyap);
  CHECK(std::fabs(hl.value + 1.15129) <= 1e-3);
  auto sw = eval_pixel(Kernel::SwallowEscape, 0, 0, p);
  CHECK(sw.kind == Payload::Class);
  CHECK(sw.value == static_cast<double>(SwallowTag::Body));
  CHECK(eval_pixel(Kernel::SwallowEscape, 0.5, 0.5, p).value == static_cast<double>(SwallowTag::Escape));
  CHECK(eval_pixel(Kernel::HenonEscape, 1, 0, p).value >= 0);
  CHECK(eval_pixel(Kernel::HenonEscape, -1, 0, p).value == -1);
  CHECK(eval_pixel(Kernel::HenonLyap, 1, 0.01, p).kind == Payload::Escape);
  auto sl = eval_pixel(Kernel::SwallowLyap, -1, -1, p);
  CHECK(sl.kind == Payload::Lyap);
  CHECK(sl.value < -0.01);
  auto rs = eval_pixel(Kernel::RenormStrip, superstable_c1(), 0, p);
  CHECK(rs.kind == Payload::Scalar);
  CHECK(std::fabs(rs.value) <= 1e-9);
  CHECK(eval_pixel(Kernel::RenormStrip, 0.5, 0, p).kind == Payload::Error);
}

TEST_CASE("colormap") {
  auto eq = [](Rgb a, Rgb b) { return a.r == b.r && a.g == b.g && a.b == b.b; };
  CHECK(eq(colormap({Payload::Escape, 12}), {255, 255, 0}));
  CHECK(eq(colormap({Payload::Escape, NAN}), {255, 255, 0}));
  CHECK(eq(colormap({Payload::Lyap, 0.005}), {0, 0, 0}));
  CHECK(colormap({Payload::Lyap, -0.5}).r > 0);
  CHECK(colormap({Payload::Lyap, -0.5}).b == 0);
  CHECK(colormap({Payload::Lyap, 0.5}).b > 0);
  CHECK(colormap({Payload::Lyap, 0.5}).r == 0);
  CHECK(eq(colormap({Payload::Lyap, -HUGE_VAL}), {255, 0, 0}));
  CHECK(eq(colormap({Payload::Error, NAN}), {255, 0, 255}));
}

TEST_CASE("ppm format") {
  Raster r;
  r.width = 2;
  r.height = 1;
  r.pixels = {{Payload::Escape, 3}, {Payload::Escape, -1}};
  std::ostringstream o;
  write_ppm(r, o);
  std::string s = o.str();
  CHECK(s.substr(0, 11) == "P6\n2 1\n255\n");
  CHECK(s.size() == 11 + 6);
  CHECK(static_cast<unsigned char>(s[11]) == 255);
  CHECK(static_cast<unsigned char>(s[13]) == 0);
  CHECK(s[14] == 0);
}

TEST_CASE("csv round trip") {
  KernelParams p;
  p.n_lyap = 500;
  auto r = sweep({-2.2, 0.6, -0.6, 0.6}, Kernel::HenonLyap, 9, 7, p, 2);
  std::ostringstream o;
  write_csv(r, o);
  std::string text = o.str();
  CHECK(text.rfind("# kernel=henon-lyap", 0) == 0);
  CHECK(text.find("\na,b,payload,value\n") != std::string::npos);
  std::istringstream in(text);
  auto back = read_csv(in);
  CHECK(back.same_bits(r));
  CHECK(back.region.a_lo == r.region.a_lo);
  CHECK(back.region.b_hi == r.region.b_hi);
  std::istringstream bad("a,b,payload,value\n");
  CHECK_THROWS_AS(read_csv(bad), ConfigError);
}

TEST_CASE("determinism across worker counts") {
  KernelParams p;
  p.n_escape = 400;
  p.n_lyap = 400;
  for (Kernel k : {Kernel::SwallowEscape, Kernel::SwallowLyap, Kernel::HenonLyap}) {
    auto r1 = sweep({-2.2, 0.6, -0.6, 0.6}, k, 40, 30, p, 1);
    auto r8 = sweep({-2.2, 0.6, -0.6, 0.6}, k, 40, 30, p, 8);
    CHECK(r1.same_bits(r8));
    std::ostringstream a, b;
    write_ppm(r1, a);
    write_ppm(r8, b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("swallow raster has all three tags") {
  KernelParams p;
  auto r = sweep({-2.2, 0.6, -2.2, 0.6}, Kernel::SwallowEscape, 120, 120, p, 0);
  int counts[3] = {0, 0, 0};
  for (auto& px : r.pixels) counts[static_cast<int>(px.value)]++;
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("embed-compare on a coarse grid") {
  auto e = std::make_shared<EmbedSetup>(embed_setup("standard", 3, 1.9e-4, 8.6e-4));
  KernelParams p;
  p.embed = e;
  auto r = sweep({-2.1, 0.4, -2.1, 0.4}, Kernel::EmbedCompare, 11, 11, p, 0);
  auto s = compare_stats(r);
  CHECK(s.agree + s.disagree > 100);
  CHECK(s.fraction() >= 0.75);
}
