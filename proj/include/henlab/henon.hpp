#pragma once
#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "henlab/maps1d.hpp"

namespace henlab {

struct Vec2 {
  double x = 0, y = 0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

// value and partials of a perturbation field in (x, v), v = b^m y
struct FieldJet {
  double f = 0, fx = 0, fv = 0, fxx = 0, fxv = 0, fvv = 0;
};

using Field = std::function<FieldJet(double x, double v)>;

struct HenonLikeMap {
  double a = 0, b = 0;
  int m = 1;
  Field zeta, xi;  // empty means identically zero
  bool normalized = true;
  std::string name = "standard";

  double bm() const;
  FieldJet zeta_at(double x, double v) const { return zeta ? zeta(x, v) : FieldJet{}; }
  FieldJet xi_at(double x, double v) const { return xi ? xi(x, v) : FieldJet{}; }

  Vec2 operator()(Vec2 z) const;
  double g(double x, double y) const;  // first coordinate

  struct Eval {
    Vec2 image;
    Mat2 jac;
    double det;
  };
  Eval evaluate(Vec2 z) const;
};

using Family = std::function<HenonLikeMap(double a, double b)>;

std::vector<std::string> registry_names();
HenonLikeMap make_map(const std::string& name, double a, double b, int m = 1);
Family family(const std::string& name, int m = 1);

// rho with xi(x - rho, v) = rho
double xi_shift(const HenonLikeMap& f, double x, double v);
// coordinates of the xi-free map -> original coordinates: (X, Y) -> (X - rho(X, b^m Y), Y)
Vec2 xi_chart(const HenonLikeMap& f, Vec2 z);
Vec2 xi_chart_inverse(const HenonLikeMap& f, Vec2 z);
HenonLikeMap normalize_xi(const HenonLikeMap& f);

struct OrbitResult {
  std::vector<Vec2> trajectory;  // first `keep` points
  bool escaped = false;
  int steps = 0;
};

OrbitResult orbit_escape(const HenonLikeMap& f, Vec2 z0, int n_max, double r_esc = 10.0, int keep = 64);
int escape_steps(const HenonLikeMap& f, Vec2 z0, int n_max, double r_esc = 10.0);  // -1 if bounded

LyapValue lyapunov(const HenonLikeMap& f, Vec2 z0, Vec2 v0, int n, double r_esc = 10.0);

struct Cycle {
  std::vector<Vec2> points;
  int period = 0;
  std::array<std::complex<double>, 2> multipliers;
  double spectral_radius = 0;
};

struct AttractorSearch {
  std::vector<Cycle> cycles;
  int escaped = 0;
  int unresolved = 0;
};

AttractorSearch find_attractors(const HenonLikeMap& f, const std::vector<Vec2>& seeds, int max_period,
                                int n_transient = 5000, double tol = 1e-9, double r_esc = 10.0);

}  // namespace henlab
