#pragma once
#include <map>
#include <string>
#include <vector>

#include "henlab/cone.hpp"
#include "henlab/crossmap.hpp"
#include "henlab/henon.hpp"
#include "henlab/word.hpp"

namespace henlab {

// values on a uniform grid of [t0, t1], linear interpolation, constant extension
struct Graph {
  double t0 = 0, t1 = 1;
  std::vector<double> v;

  static Graph constant(double t0, double t1, double value, int n = 2);
  double operator()(double t) const;
  double max_slope() const;
  double sup() const;
  double inf() const;
  int size() const { return static_cast<int>(v.size()); }
  double knot(int i) const { return t0 + (t1 - t0) * i / (size() - 1); }
};

struct Leaf {
  double k = 0;  // 1-D position at b = 0
  Graph g;       // x = g(y)
  double residual = 0;
};

struct LeafLattice {
  std::map<std::string, Leaf> leaves;  // "alpha0", "-alpha0", ..., "beta", "-beta", "tilde2", "-tilde2"
  double y_lo = -3, y_hi = 3;
  int samples = 0;
  double max_residual = 0;

  const Leaf& at(const std::string& name) const;
  const Leaf* find_by_value(double k, double tol = 1e-9) const;
};

// one backward graph transform: x = out(y) with f(x, y) on graph L and sign(x) = sign
Graph pull_back_graph(const HenonLikeMap& f, const Graph& L, int sign, double y_lo, double y_hi, int n);

LeafLattice stable_leaf_lattice(const HenonLikeMap& f, double y_lo = -3, double y_hi = 3, int n_samples = 257);

struct TameBox {
  Graph phi_minus, phi_plus;  // x as a function of y (stable boundary)
  Graph psi_minus, psi_plus;  // y as a function of x (unstable boundary)
  double y_lo() const { return phi_minus.t0; }
  double y_hi() const { return phi_minus.t1; }
  double width_at(double y) const { return phi_plus(y) - phi_minus(y); }
};

TameBox build_box(const std::string& symbol, const HenonLikeMap& f, const LeafLattice& lat);

struct Piece2D {
  Word word;
  int order = 0;
  TameBox domain, image;
  ConeSpec cone;
  CrossMapChain chain;
};

Piece2D build_piece_2d(const Word& word, const HenonLikeMap& f, const LeafLattice& lat, const ConeSpec& cone);
Piece2D star_2d(const Piece2D& p, const Piece2D& q, const HenonLikeMap& f, const LeafLattice& lat);

struct ConeCheck {
  bool ok = false;
  double margin = 0;  // min over samples of c_h / (max image slope)
  Vec2 violation{};
  int violations = 0;
  int samples = 0;
};

ConeCheck verify_cones(const HenonLikeMap& f, const TameBox& box, const ConeSpec& cone, int grid = 33, int steps = 1);
ConeCheck verify_piece_cones(const Piece2D& p, int grid = 33);

// sup distance of f^n(stable boundary of the domain) from the stable boundary of the image
double boundary_consistency(const Piece2D& p, const HenonLikeMap& f, int samples = 33);

}  // namespace henlab
