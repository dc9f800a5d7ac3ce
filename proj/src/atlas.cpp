#include "henlab/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "henlab/errors.hpp"
#include "henlab/maps1d.hpp"

namespace henlab {

namespace {

const std::pair<Kernel, const char*> kKernels[] = {
    {Kernel::SwallowEscape, "swallow-escape"}, {Kernel::SwallowLyap, "swallow-lyap"},
    {Kernel::HenonEscape, "henon-escape"},     {Kernel::HenonLyap, "henon-lyap"},
    {Kernel::RenormStrip, "renorm-strip"},     {Kernel::EmbedCompare, "embed-compare"}};

const std::pair<Payload, const char*> kPayloads[] = {{Payload::Escape, "escape"}, {Payload::Lyap, "lyap"},
                                                     {Payload::Class, "class"},   {Payload::Compare, "compare"},
                                                     {Payload::Scalar, "scalar"}, {Payload::Error, "error"}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Pixel from_lyap(const LyapValue& v) {
  switch (v.kind) {
    case LyapValue::Kind::Escape:
      return {Payload::Escape, kNaN};
    case LyapValue::Kind::MinusInf:
      return {Payload::Lyap, -HUGE_VAL};
    default:
      return {Payload::Lyap, v.value};
  }
}

// one exponent per pixel: the negative one if any, else the larger
Pixel swallow_lyap(double a, double b, const KernelParams& p) {
  auto c = lyap_composed(a, b, p.n_lyap, p.r_esc);
  std::vector<double> vals;
  for (const LyapValue* v : {&c.ab, &c.ba}) {
    if (v->kind == LyapValue::Kind::MinusInf) return {Payload::Lyap, -HUGE_VAL};
    if (v->finite()) vals.push_back(v->value);
  }
  if (vals.empty()) return {Payload::Escape, kNaN};
  double lo = *std::min_element(vals.begin(), vals.end()), hi = *std::max_element(vals.begin(), vals.end());
  return {Payload::Lyap, lo < -0.01 ? lo : hi};
}

Pixel embed_pixel(double abar0, double abar1, const KernelParams& p) {
  if (!p.embed) throw ConfigError("embed-compare needs an embed setup");
  const EmbedSetup& e = *p.embed;
  bool predicted = swallow_classify(abar0, abar1, p.n_escape, p.r_esc).steps_ab == -1;
  auto fam = family(e.family, p.m);
  auto hit = swallow_parameter(fam, e.words, e.p0, abar0, abar1, e.jac_inv);
  if (!hit) return {Payload::Error, kNaN};
  try {
    auto m = multi_renormalize(fam(hit->first, hit->second), e.words);
    const HenonLikeMap& f = m.map;
    const Chart& ch = m.charts[0];
    Vec2 z = ch(Vec2{0, 0});
    const int steps = m.n[0] + m.n[1] + 2;
    bool direct = true;
    for (int r = 0; r < e.returns && direct; ++r) {
      for (int t = 0; t < steps; ++t) {
        z = f(z);
        if (!(std::max(std::fabs(z.x), std::fabs(z.y)) <= p.r_esc)) {
          direct = false;
          break;
        }
      }
      if (direct && !(std::fabs((z.x - ch.c) / ch.u) <= e.bound)) direct = false;
    }
    return {Payload::Compare, 2.0 * predicted + direct};
  } catch (const DomainError&) {
    return {Payload::Error, kNaN};
  } catch (const ConvergenceError&) {
    return {Payload::Error, kNaN};
  }
}

}  // namespace

const char* kernel_name(Kernel k) {
  for (auto& [kk, n] : kKernels)
    if (kk == k) return n;
  return "?";
}

Kernel parse_kernel(const std::string& s) {
  for (auto& [kk, n] : kKernels)
    if (s == n) return kk;
  throw ConfigError("unknown kernel '" + s + "'");
}

const char* payload_name(Payload p) {
  for (auto& [pp, n] : kPayloads)
    if (pp == p) return n;
  return "?";
}

Payload parse_payload(const std::string& s) {
  for (auto& [pp, n] : kPayloads)
    if (s == n) return pp;
  throw ConfigError("unknown payload '" + s + "'");
}

EmbedSetup embed_setup(const std::string& family_name, int k, double b_lo, double b_hi) {
  EmbedSetup e;
  e.family = family_name;
  e.words = swallow_words(k, b_lo > 0 ? 1 : -1);
  auto fam = family(family_name);
  e.p0 = double_tangency(fam, e.words, b_lo, b_hi, 12);
  double ha = 1e-9, hb = 1e-7 * std::fabs(e.p0.b);
  auto sp = [&](double a, double b) { return swallow_params(fam(a, b), e.words); };
  auto pa = sp(e.p0.a + ha, e.p0.b), ma = sp(e.p0.a - ha, e.p0.b);
  auto pb = sp(e.p0.a, e.p0.b + hb), mb = sp(e.p0.a, e.p0.b - hb);
  double J00 = (pa.first - ma.first) / (2 * ha), J01 = (pb.first - mb.first) / (2 * hb);
  double J10 = (pa.second - ma.second) / (2 * ha), J11 = (pb.second - mb.second) / (2 * hb);
  double det = J00 * J11 - J01 * J10;
  if (!std::isfinite(det) || det == 0) throw ConvergenceError("embed_setup: singular parameter Jacobian");
  e.jac_inv[0][0] = J11 / det;
  e.jac_inv[0][1] = -J01 / det;
  e.jac_inv[1][0] = -J10 / det;
  e.jac_inv[1][1] = J00 / det;
  return e;
}

double Raster::a_of(int i) const { return region.a_lo + (region.a_hi - region.a_lo) * i / (width - 1); }
double Raster::b_of(int j) const { return region.b_hi - (region.b_hi - region.b_lo) * j / (height - 1); }

bool Raster::same_bits(const Raster& o) const {
  if (width != o.width || height != o.height || kernel != o.kernel || pixels.size() != o.pixels.size()) return false;
  for (std::size_t i = 0; i < pixels.size(); ++i)
    if (pixels[i].kind != o.pixels[i].kind || std::memcmp(&pixels[i].value, &o.pixels[i].value, sizeof(double)) != 0)
      return false;
  return true;
}

Pixel eval_pixel(Kernel k, double a, double b, const KernelParams& p) {
  try {
    switch (k) {
      case Kernel::SwallowEscape:
        return {Payload::Class, static_cast<double>(swallow_classify(a, b, p.n_escape, p.r_esc).tag)};
      case Kernel::SwallowLyap:
        return swallow_lyap(a, b, p);
      case Kernel::HenonEscape:
        return {Payload::Escape,
                static_cast<double>(escape_steps(make_map(p.map, a, b, p.m), {0, 0}, p.n_escape, p.r_esc))};
      case Kernel::HenonLyap:
        return from_lyap(lyapunov(make_map(p.map, a, b, p.m), {0, 0}, {0, 1}, p.n_lyap, p.r_esc));
      case Kernel::RenormStrip:
        return {Payload::Scalar, renorm_abar(make_map(p.map, a, b, p.m), p.word)};
      case Kernel::EmbedCompare:
        return embed_pixel(a, b, p);
    }
  } catch (const DomainError&) {
  } catch (const ConvergenceError&) {
  }
  return {Payload::Error, kNaN};
}

Raster sweep(const Region& region, Kernel k, int width, int height, const KernelParams& p, int workers) {
  if (width < 2 || height < 2) throw ConfigError("grid must be at least 2x2");
  if (!(region.a_lo < region.a_hi) || !(region.b_lo < region.b_hi))
    throw ConfigError("empty parameter range");
  if (k == Kernel::EmbedCompare && !p.embed) throw ConfigError("embed-compare needs an embed setup");
  Raster r;
  r.width = width;
  r.height = height;
  r.region = region;
  r.kernel = k;
  r.pixels.resize(static_cast<std::size_t>(width) * height);
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, height);
  std::atomic<int> next_row{0};
  auto work = [&] {
    for (int j = next_row++; j < height; j = next_row++) {
      double b = r.b_of(j);
      for (int i = 0; i < width; ++i) r.pixels[static_cast<std::size_t>(j) * width + i] = eval_pixel(k, r.a_of(i), b, p);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return r;
}

const char* const kColormapNote =
    "escape->(255,255,0) bounded->(0,0,0); lyap<-0.01 red ramp (55+200t,0,0) t=min(1,|v|/1.5); "
    "lyap>0.01 blue ramp (0,0,55+200t); |lyap|<=0.01 black; class escape yellow, wing (0,160,255), body "
    "(200,0,0); compare agree-bounded (200,0,0), agree-escape (255,255,0), disagree (0,160,255)/(0,0,0); "
    "scalar in [-2,0.25] green ramp, outside (64,64,64); error (255,0,255)";

Rgb colormap(const Pixel& p) {
  auto ramp = [](double v) { return static_cast<unsigned char>(55 + 200 * std::min(1.0, std::fabs(v) / 1.5)); };
  switch (p.kind) {
    case Payload::Escape:
      return p.value == -1 ? Rgb{0, 0, 0} : Rgb{255, 255, 0};
    case Payload::Lyap:
      if (p.value < -0.01) return {ramp(p.value), 0, 0};
      if (p.value > 0.01) return {0, 0, ramp(p.value)};
      return {0, 0, 0};
    case Payload::Class:
      if (p.value == 2) return {200, 0, 0};
      if (p.value == 1) return {0, 160, 255};
      return {255, 255, 0};
    case Payload::Compare:
      if (p.value == 3) return {200, 0, 0};
      if (p.value == 0) return {255, 255, 0};
      if (p.value == 2) return {0, 160, 255};
      return {0, 0, 0};
    case Payload::Scalar:
      if (p.value >= -2 && p.value <= 0.25)
        return {0, static_cast<unsigned char>(80 + 175 * (p.value + 2) / 2.25), 0};
      return {64, 64, 64};
    case Payload::Error:
      break;
  }
  return {255, 0, 255};
}

void write_ppm(const Raster& r, std::ostream& out) {
  out << "P6\n" << r.width << ' ' << r.height << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(r.width) * 3);
  for (int j = 0; j < r.height; ++j) {
    for (int i = 0; i < r.width; ++i) {
      Rgb c = colormap(r.at(i, j));
      row[3 * i] = static_cast<char>(c.r);
      row[3 * i + 1] = static_cast<char>(c.g);
      row[3 * i + 2] = static_cast<char>(c.b);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const Raster& r, std::ostream& out) {
  out << "# kernel=" << kernel_name(r.kernel) << " width=" << r.width << " height=" << r.height
      << " a_lo=" << g17(r.region.a_lo) << " a_hi=" << g17(r.region.a_hi) << " b_lo=" << g17(r.region.b_lo)
      << " b_hi=" << g17(r.region.b_hi) << " colormap: " << kColormapNote << "\n";
  out << "a,b,payload,value\n";
  for (int j = 0; j < r.height; ++j)
    for (int i = 0; i < r.width; ++i) {
      const Pixel& p = r.at(i, j);
      out << g17(r.a_of(i)) << ',' << g17(r.b_of(j)) << ',' << payload_name(p.kind) << ',' << g17(p.value) << '\n';
    }
}

Raster read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ConfigError("csv: missing comment line");
  Raster r;
  std::istringstream hdr(line.substr(2));
  std::string tok;
  while (hdr >> tok) {
    auto eq = tok.find('=');
    if (tok == "colormap:") break;
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "kernel") r.kernel = parse_kernel(val);
    else if (key == "width") r.width = std::stoi(val);
    else if (key == "height") r.height = std::stoi(val);
    else if (key == "a_lo") r.region.a_lo = std::strtod(val.c_str(), nullptr);
    else if (key == "a_hi") r.region.a_hi = std::strtod(val.c_str(), nullptr);
    else if (key == "b_lo") r.region.b_lo = std::strtod(val.c_str(), nullptr);
    else if (key == "b_hi") r.region.b_hi = std::strtod(val.c_str(), nullptr);
  }
  if (r.width < 2 || r.height < 2) throw ConfigError("csv: bad raster size");
  if (!std::getline(in, line) || line != "a,b,payload,value") throw ConfigError("csv: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 4) throw ConfigError("csv: bad row '" + line + "'");
    r.pixels.push_back({parse_payload(f[2]), std::strtod(f[3].c_str(), nullptr)});
  }
  if (r.pixels.size() != static_cast<std::size_t>(r.width) * r.height) throw ConfigError("csv: pixel count mismatch");
  return r;
}

void emit(const Raster& r, const std::string& format, const std::string& path) {
  auto write = [&](std::ostream& o) {
    if (format == "ppm")
      write_ppm(r, o);
    else if (format == "csv")
      write_csv(r, o);
    else
      throw ConfigError("unknown format '" + format + "'");
  };
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

CompareStats compare_stats(const Raster& r) {
  CompareStats s;
  for (const auto& p : r.pixels) {
    if (p.kind != Payload::Compare) {
      ++s.errors;
      continue;
    }
    if (p.value == 0 || p.value == 3)
      ++s.agree;
    else
      ++s.disagree;
  }
  return s;
}

}  // namespace henlab
