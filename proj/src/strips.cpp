#include "henlab/strips.hpp"

#include <algorithm>
#include <cmath>

#include "henlab/errors.hpp"

namespace henlab {

Graph Graph::constant(double t0, double t1, double value, int n) {
  Graph g;
  g.t0 = t0;
  g.t1 = t1;
  g.v.assign(std::max(2, n), value);
  return g;
}

double Graph::operator()(double t) const {
  const int n = size();
  double s = (t - t0) / (t1 - t0) * (n - 1);
  if (s <= 0) return v.front();
  if (s >= n - 1) return v.back();
  int i = static_cast<int>(s);
  double w = s - i;
  return v[i] + w * (v[i + 1] - v[i]);
}

double Graph::max_slope() const {
  double h = (t1 - t0) / (size() - 1), m = 0;
  for (int i = 0; i + 1 < size(); ++i) m = std::max(m, std::fabs(v[i + 1] - v[i]) / h);
  return m;
}

double Graph::sup() const { return *std::max_element(v.begin(), v.end()); }
double Graph::inf() const { return *std::min_element(v.begin(), v.end()); }

const Leaf& LeafLattice::at(const std::string& name) const {
  auto it = leaves.find(name);
  if (it == leaves.end()) throw DomainError("leaf '" + name + "' missing");
  return it->second;
}

const Leaf* LeafLattice::find_by_value(double k, double tol) const {
  for (const auto& [name, leaf] : leaves)
    if (std::fabs(leaf.k - k) <= tol * std::max(1.0, std::fabs(k))) return &leaf;
  return nullptr;
}

namespace {

double pull_back_point(const HenonLikeMap& f, const Graph& L, int sign, double y, double x) {
  const double v = f.bm() * y;
  for (int it = 0; it < 100; ++it) {
    double yp = x + (f.xi ? f.xi(x, v).f : 0.0);
    double rad = L(yp) - f.a + v - (f.zeta ? f.zeta(x, v).f : 0.0);
    if (rad < 0) throw BranchError("graph transform: negative radicand");
    double xn = sign * std::sqrt(rad);
    if (std::fabs(xn - x) <= 1e-15 * (1 + std::fabs(x))) return xn;
    x = xn;
  }
  return x;
}

}  // namespace

Graph pull_back_graph(const HenonLikeMap& f, const Graph& L, int sign, double y_lo, double y_hi, int n) {
  Graph g;
  g.t0 = y_lo;
  g.t1 = y_hi;
  g.v.resize(n);
  double seed = sign * std::sqrt(std::max(0.0, L(0.0) - f.a));
  for (int j = 0; j < n; ++j) g.v[j] = pull_back_point(f, L, sign, g.knot(j), seed);
  return g;
}

namespace {

Graph fixed_leaf(const HenonLikeMap& f, double k, int sign, double y_lo, double y_hi, int n) {
  Graph g = Graph::constant(y_lo, y_hi, k, n);
  for (int it = 0; it < 200; ++it) {
    Graph h = pull_back_graph(f, g, sign, y_lo, y_hi, n);
    double d = 0;
    for (int j = 0; j < n; ++j) d = std::max(d, std::fabs(h.v[j] - g.v[j]));
    g = std::move(h);
    if (d < 1e-10) {
      // one more pass so the stored graph is a transform output
      return pull_back_graph(f, g, sign, y_lo, y_hi, n);
    }
  }
  throw ConvergenceError("stable leaf: graph transform did not contract in 200 iterations");
}

double invariance_residual(const HenonLikeMap& f, const Graph& g, const Graph& image) {
  double r = 0;
  const int n = g.size();
  for (int j = 0; j + 1 < n; ++j)
    for (double s : {0.0, 0.5}) {
      double y = g.t0 + (g.t1 - g.t0) * (j + s) / (n - 1);
      Vec2 w = f(Vec2{g(y), y});
      r = std::max(r, std::fabs(w.x - image(w.y)));
    }
  return r;
}

struct LeafRule {
  const char* name;
  const char* parent;  // nullptr for fixed leaves
  int sign;
};

}  // namespace

LeafLattice stable_leaf_lattice(const HenonLikeMap& f, double y_lo, double y_hi, int n_samples) {
  QuadraticLadder L = ladder(f.a);
  std::map<std::string, std::pair<double, bool>> value{
      {"beta", {L.beta, true}},          {"-beta", {-L.beta, true}},
      {"alpha0", {L.alpha0, true}},      {"-alpha0", {-L.alpha0, true}},
      {"alpha1", {L.alpha1, L.has_alpha1}}, {"-alpha1", {-L.alpha1, L.has_alpha1}},
      {"tilde2", {L.tilde_alpha2, L.has_tilde}}, {"-tilde2", {-L.tilde_alpha2, L.has_tilde}},
      {"alpha2", {L.alpha2, L.has_alpha2}}, {"-alpha2", {-L.alpha2, L.has_alpha2}},
      {"alpha3", {L.alpha3, L.has_alpha3}}, {"-alpha3", {-L.alpha3, L.has_alpha3}}};
  const LeafRule rules[] = {{"beta", nullptr, 1},       {"-alpha0", nullptr, -1},   {"alpha0", "-alpha0", 1},
                            {"alpha1", "alpha0", 1},    {"-alpha1", "alpha0", -1},  {"tilde2", "-alpha1", 1},
                            {"-tilde2", "-alpha1", -1}, {"-beta", "beta", -1},      {"alpha2", "alpha1", 1},
                            {"-alpha2", "alpha1", -1},  {"alpha3", "alpha2", 1},    {"-alpha3", "alpha2", -1}};
  int n = n_samples;
  while (true) {
    LeafLattice lat;
    lat.y_lo = y_lo;
    lat.y_hi = y_hi;
    lat.samples = n;
    for (const auto& r : rules) {
      auto [k, ok] = value.at(r.name);
      if (!ok) continue;
      if (r.parent && !lat.leaves.count(r.parent)) continue;
      Leaf leaf;
      leaf.k = k;
      if (!r.parent) {
        leaf.g = fixed_leaf(f, k, r.sign, y_lo, y_hi, n);
        leaf.residual = invariance_residual(f, leaf.g, leaf.g);
      } else {
        const Graph& parent = lat.leaves.at(r.parent).g;
        leaf.g = pull_back_graph(f, parent, r.sign, y_lo, y_hi, n);
        leaf.residual = invariance_residual(f, leaf.g, parent);
      }
      lat.max_residual = std::max(lat.max_residual, leaf.residual);
      lat.leaves[r.name] = std::move(leaf);
    }
    if (lat.max_residual <= 1e-8 || n >= 4097) return lat;
    n = 2 * n - 1;
  }
}

namespace {

TameBox vertical_strip(const Graph& left, const Graph& right, double y_lo, double y_hi) {
  TameBox b;
  b.phi_minus = left;
  b.phi_plus = right;
  double x0 = std::min(left.inf(), right.inf()), x1 = std::max(left.sup(), right.sup());
  b.psi_minus = Graph::constant(x0, x1, y_lo);
  b.psi_plus = Graph::constant(x0, x1, y_hi);
  return b;
}

}  // namespace

TameBox build_box(const std::string& symbol, const HenonLikeMap& f, const LeafLattice& lat) {
  auto strip = [&](const char* l, const char* r) {
    return vertical_strip(lat.at(l).g, lat.at(r).g, lat.y_lo, lat.y_hi);
  };
  if (symbol == "e") return strip("-alpha0", "alpha0");
  if (symbol == "s+") return strip("tilde2", "alpha0");
  if (symbol == "s-") return strip("-alpha0", "-tilde2");
  if (symbol == "w+") return strip("alpha0", "alpha1");
  if (symbol == "w-") return strip("-alpha1", "-alpha0");
  if (symbol == "w=") return strip("-alpha2", "-alpha1");
  if (symbol == "w=3") return strip("-alpha3", "-alpha2");
  if (symbol == "D") {
    if (f.b == 0) throw DomainError("box D needs b != 0");
    double h = 1 / (8 * std::fabs(f.b));
    QuadraticLadder L = ladder(f.a);
    Graph beta = fixed_leaf(f, L.beta, 1, -h, h, lat.samples);
    Graph mbeta = pull_back_graph(f, beta, -1, -h, h, lat.samples);
    return vertical_strip(mbeta, beta, -h, h);
  }
  throw DomainError("build_box: unknown symbol '" + symbol + "'");
}

namespace {

constexpr int kBoxSamples = 129;

TameBox image_box(const CrossMapChain& chain, const Piece1D& p, const LeafLattice& lat) {
  const Leaf* l = lat.find_by_value(p.image_lo);
  const Leaf* r = lat.find_by_value(p.image_hi);
  if (!l || !r) throw DomainError("image box: no stable leaf at the image endpoints");
  TameBox b;
  b.phi_minus = l->g;
  b.phi_plus = r->g;
  double x0 = l->g.inf(), x1 = r->g.sup();
  for (int side = 0; side < 2; ++side) {
    Graph g;
    g.t0 = x0;
    g.t1 = x1;
    g.v.resize(65);
    double y0 = side ? lat.y_hi : lat.y_lo;
    for (int i = 0; i < 65; ++i) {
      double x = std::clamp(g.knot(i), p.image_lo, p.image_hi);
      try {
        g.v[i] = eval_cross(chain, x, y0, false).B;
      } catch (const DomainError&) {
        g.v[i] = i ? g.v[i - 1] : NAN;
      }
    }
    (side ? b.psi_plus : b.psi_minus) = g;
  }
  return b;
}

Piece2D elementary_2d(const Symbol& s, const HenonLikeMap& f, const LeafLattice& lat, const ConeSpec& cone) {
  Piece2D p;
  p.word = Word{s};
  p.cone = cone;
  p.chain = factorize_chain(p.word, f);
  p.order = p.chain.order();
  if (s.kind == Sym::BoxMinus || s.kind == Sym::BoxPlus) {
    int j = s.index, sign = s.kind == Sym::BoxMinus ? -1 : 1;
    Piece2D cj = build_piece_2d(c_word(j), f, lat, cone);
    Piece2D cj1 = build_piece_2d(c_word(j + 1), f, lat, cone);
    Graph u = pull_back_graph(f, cj1.domain.phi_plus, sign, lat.y_lo, lat.y_hi, cj1.domain.phi_plus.size());
    Graph v = pull_back_graph(f, cj.domain.phi_plus, sign, lat.y_lo, lat.y_hi, cj.domain.phi_plus.size());
    if (u(0.0) > v(0.0)) std::swap(u, v);
    p.domain = vertical_strip(u, v, lat.y_lo, lat.y_hi);
  } else {
    p.domain = build_box(format_symbol(s), f, lat);
  }
  p.image = image_box(p.chain, p.chain.piece, lat);
  return p;
}

}  // namespace

Piece2D build_piece_2d(const Word& word, const HenonLikeMap& f, const LeafLattice& lat, const ConeSpec& cone) {
  Word ex = expand_word(word);
  if (ex.empty()) throw DomainError("build_piece_2d: empty word");
  Piece2D acc = elementary_2d(ex[0], f, lat, cone);
  for (std::size_t i = 1; i < ex.size(); ++i) acc = star_2d(acc, elementary_2d(ex[i], f, lat, cone), f, lat);
  acc.word = word;
  acc.chain.word = word;
  return acc;
}

Piece2D star_2d(const Piece2D& p, const Piece2D& q, const HenonLikeMap& f, const LeafLattice& lat) {
  for (int j = 0; j < 33; ++j) {
    double y = lat.y_lo + (lat.y_hi - lat.y_lo) * j / 32;
    double tol = 1e-9;
    if (q.domain.phi_minus(y) < p.image.phi_minus(y) - tol)
      throw ProductUndefinedError("star_2d: left stable boundary of " + format_word(q.word) +
                                  " leaves the image of " + format_word(p.word) + " at y=" + std::to_string(y));
    if (q.domain.phi_plus(y) > p.image.phi_plus(y) + tol)
      throw ProductUndefinedError("star_2d: right stable boundary of " + format_word(q.word) +
                                  " leaves the image of " + format_word(p.word) + " at y=" + std::to_string(y));
  }
  Piece2D r;
  r.word = concat(p.word, q.word);
  r.cone = p.cone;
  r.chain = factorize_chain(r.word, f);
  r.order = p.order + q.order;
  Graph side[2];
  const Graph* target[2] = {&q.domain.phi_minus, &q.domain.phi_plus};
  for (int s = 0; s < 2; ++s) {
    side[s].t0 = lat.y_lo;
    side[s].t1 = lat.y_hi;
    side[s].v.resize(kBoxSamples);
    for (int j = 0; j < kBoxSamples; ++j) {
      double y0 = side[s].knot(j);
      double x1 = (*target[s])(0.0);
      CrossMapEval e;
      for (int it = 0; it < 60; ++it) {
        e = eval_cross(p.chain, x1, y0, false);
        double xn = (*target[s])(e.B);
        if (std::fabs(xn - x1) <= 1e-15 * (1 + std::fabs(x1))) {
          x1 = xn;
          break;
        }
        x1 = xn;
      }
      side[s].v[j] = eval_cross(p.chain, x1, y0, false).A;
    }
  }
  if (side[0](0.0) > side[1](0.0)) std::swap(side[0], side[1]);
  r.domain = vertical_strip(side[0], side[1], lat.y_lo, lat.y_hi);
  r.image = q.image;
  return r;
}

ConeCheck verify_cones(const HenonLikeMap& f, const TameBox& box, const ConeSpec& cone, int grid, int steps) {
  ConeCheck out;
  out.margin = HUGE_VAL;
  const double T = 1 / cone.c_v;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      double y = box.y_lo() + (box.y_hi() - box.y_lo()) * j / (grid - 1);
      double l = box.phi_minus(y), r = box.phi_plus(y);
      double x = l + (r - l) * i / (grid - 1);
      Vec2 z{x, y};
      ++out.samples;
      for (int s = 0; s < std::max(1, steps); ++s) {
        bool bad = false;
        double m = HUGE_VAL;
        if (std::fabs(z.x) < cone.eta) {
          bad = true;
          m = 0;
        } else {
          auto e = f.evaluate(z);
          const auto& J = e.jac;
          // directions (1, t), |t| <= 1/c_v, cover the complement of the vertical cone
          if (std::fabs(J[0][0]) <= std::fabs(J[0][1]) * T) {
            bad = true;
            m = 0;
          } else {
            double rmax = 0;
            for (double t : {-T, T}) rmax = std::max(rmax, std::fabs(J[1][0] + J[1][1] * t) / std::fabs(J[0][0] + J[0][1] * t));
            m = rmax > 0 ? cone.c_h / rmax : HUGE_VAL;
            if (!(m > 1)) bad = true;
          }
          z = e.image;
        }
        out.margin = std::min(out.margin, m);
        if (bad) {
          if (out.violations == 0) out.violation = z;
          ++out.violations;
          break;
        }
      }
    }
  out.ok = out.violations == 0;
  return out;
}

ConeCheck verify_piece_cones(const Piece2D& p, int grid) {
  return verify_cones(p.chain.map, p.domain, p.cone, grid, p.order);
}

double boundary_consistency(const Piece2D& p, const HenonLikeMap& f, int samples) {
  double worst = 0;
  const TameBox& d = p.domain;
  for (const Graph* g : {&d.phi_minus, &d.phi_plus})
    for (int j = 0; j < samples; ++j) {
      double y = d.y_lo() + (d.y_hi() - d.y_lo()) * j / (samples - 1);
      Vec2 z{(*g)(y), y};
      for (int i = 0; i < p.order; ++i) z = f(z);
      double e = std::min(std::fabs(z.x - p.image.phi_minus(z.y)), std::fabs(z.x - p.image.phi_plus(z.y)));
      worst = std::max(worst, e);
    }
  return worst;
}

}  // namespace henlab
