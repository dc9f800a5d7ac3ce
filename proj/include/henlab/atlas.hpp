#pragma once
#include <memory>
#include <string>
#include <vector>

#include "henlab/henon.hpp"
#include "henlab/renorm.hpp"
#include "henlab/word.hpp"

namespace henlab {

enum class Kernel { SwallowEscape, SwallowLyap, HenonEscape, HenonLyap, RenormStrip, EmbedCompare };
const char* kernel_name(Kernel k);
Kernel parse_kernel(const std::string& s);  // ConfigError on unknown names

// escape: steps, -1 bounded, NaN when escaped during a Lyapunov run
// lyap: exponent (may be -inf); class: SwallowTag as 0/1/2
// compare: 2*predicted_bounded + direct_bounded; scalar: abar; error: NaN
enum class Payload { Escape, Lyap, Class, Compare, Scalar, Error };
const char* payload_name(Payload p);
Payload parse_payload(const std::string& s);

struct Pixel {
  Payload kind = Payload::Error;
  double value = 0;
};

struct Region {
  double a_lo = 0, a_hi = 0, b_lo = 0, b_hi = 0;
};

// words, double tangency and fixed inverse Jacobian shared by embed-compare pixels
struct EmbedSetup {
  std::string family = "standard";
  std::vector<Word> words;
  DoubleTangency p0;
  double jac_inv[2][2] = {{0, 0}, {0, 0}};
  int returns = 200;
  double bound = 3.0;
};

EmbedSetup embed_setup(const std::string& family_name, int k, double b_lo, double b_hi);

struct KernelParams {
  std::string map = "standard";
  int m = 1;
  int n_lyap = 10000;
  int n_escape = 2000;
  double r_esc = 10.0;
  Word word = c_word(1);  // renorm-strip
  std::shared_ptr<const EmbedSetup> embed;
};

struct Raster {
  int width = 0, height = 0;
  Region region;
  Kernel kernel = Kernel::HenonEscape;
  std::vector<Pixel> pixels;  // row-major, row 0 = b_hi

  double a_of(int i) const;
  double b_of(int j) const;
  const Pixel& at(int i, int j) const { return pixels[static_cast<std::size_t>(j) * width + i]; }
  bool same_bits(const Raster& o) const;
};

Pixel eval_pixel(Kernel k, double a, double b, const KernelParams& p);

Raster sweep(const Region& region, Kernel k, int width, int height, const KernelParams& p, int workers = 0);

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
};
Rgb colormap(const Pixel& p);
extern const char* const kColormapNote;

void write_ppm(const Raster& r, std::ostream& out);
void write_csv(const Raster& r, std::ostream& out);
Raster read_csv(std::istream& in);
// path "-" writes to stdout
void emit(const Raster& r, const std::string& format, const std::string& path);

struct CompareStats {
  int agree = 0, disagree = 0, errors = 0;
  double fraction() const { return agree + disagree > 0 ? static_cast<double>(agree) / (agree + disagree) : 0.0; }
};
CompareStats compare_stats(const Raster& r);

}  // namespace henlab
