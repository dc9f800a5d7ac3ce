#include "henlab/henon.hpp"

#include <algorithm>
#include <cmath>

#include "henlab/errors.hpp"

namespace henlab {

double HenonLikeMap::bm() const {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= b;
  return r;
}

double HenonLikeMap::g(double x, double y) const {
  double v = bm() * y;
  double r = x * x + a - v;
  if (zeta) r += zeta(x, v).f;
  return r;
}

Vec2 HenonLikeMap::operator()(Vec2 z) const {
  double v = bm() * z.y;
  double x1 = z.x * z.x + a - v;
  if (zeta) x1 += zeta(z.x, v).f;
  double y1 = z.x;
  if (xi) y1 += xi(z.x, v).f;
  return {x1, y1};
}

HenonLikeMap::Eval HenonLikeMap::evaluate(Vec2 z) const {
  double B = bm(), v = B * z.y;
  FieldJet zj = zeta_at(z.x, v), xj = xi_at(z.x, v);
  Eval e;
  e.image = {z.x * z.x + a - v + zj.f, z.x + xj.f};
  e.jac = {{{2 * z.x + zj.fx, -B + B * zj.fv}, {1 + xj.fx, B * xj.fv}}};
  e.det = e.jac[0][0] * e.jac[1][1] - e.jac[0][1] * e.jac[1][0];
  return e;
}

std::vector<std::string> registry_names() { return {"standard", "zero", "sine-perturbed"}; }

HenonLikeMap make_map(const std::string& name, double a, double b, int m) {
  if (m < 1) throw ConfigError("multiplicity must be >= 1");
  HenonLikeMap f;
  f.a = a;
  f.b = b;
  f.m = m;
  f.name = name;
  if (name == "standard") return f;
  if (name == "zero") {
    f.zeta = [](double, double) { return FieldJet{}; };
    f.xi = [](double, double) { return FieldJet{}; };
    return f;
  }
  if (name == "sine-perturbed") {
    f.zeta = [](double x, double) {
      FieldJet j;
      j.f = 0.01 * std::sin(x);
      j.fx = 0.01 * std::cos(x);
      j.fxx = -0.01 * std::sin(x);
      return j;
    };
    return f;
  }
  throw ConfigError("unknown map '" + name + "'");
}

Family family(const std::string& name, int m) {
  make_map(name, 0, 0, m);  // validate now
  return [name, m](double a, double b) { return make_map(name, a, b, m); };
}

namespace {

double rho_solve(const Field& xi, double x, double v) {
  double t = xi(x, v).f;
  for (int it = 0; it < 60; ++it) {
    FieldJet j = xi(x - t, v);
    double h = t - j.f, dh = 1 + j.fx;
    double step = h / dh;
    t -= step;
    if (std::fabs(step) <= 1e-16 * (1 + std::fabs(t))) return t;
  }
  FieldJet j = xi(x - t, v);
  if (std::fabs(t - j.f) > 1e-13) throw ConvergenceError("xi_shift: Newton did not converge");
  return t;
}

struct RhoJet {
  double r, rx, rv;
};

RhoJet rho_jet(const Field& xi, double x, double v) {
  double r = rho_solve(xi, x, v);
  FieldJet j = xi(x - r, v);
  return {r, j.fx / (1 + j.fx), j.fv / (1 + j.fx)};
}

}  // namespace

double xi_shift(const HenonLikeMap& f, double x, double v) { return f.xi ? rho_solve(f.xi, x, v) : 0.0; }

Vec2 xi_chart(const HenonLikeMap& f, Vec2 z) { return {z.x - xi_shift(f, z.x, f.bm() * z.y), z.y}; }

Vec2 xi_chart_inverse(const HenonLikeMap& f, Vec2 z) {
  if (!f.xi) return z;
  double v = f.bm() * z.y, X = z.x;
  for (int it = 0; it < 60; ++it) {
    RhoJet r = rho_jet(f.xi, X, v);
    double h = X - r.r - z.x, step = h / (1 - r.rx);
    X -= step;
    if (std::fabs(step) <= 1e-16 * (1 + std::fabs(X))) break;
  }
  return {X, z.y};
}

HenonLikeMap normalize_xi(const HenonLikeMap& f) {
  if (!f.xi) {
    HenonLikeMap out = f;
    out.normalized = true;
    return out;
  }
  double B = f.bm();
  double vmax = std::max(3.0 * std::fabs(B), 1e-12);
  for (int i = 0; i <= 20; ++i)
    for (int k = 0; k <= 20; ++k) {
      double x = -3 + 6.0 * i / 20, v = -vmax + 2 * vmax * k / 20;
      if (std::fabs(f.xi(x, v).fx) >= 0.5)
        throw ConvergenceError("normalize_xi: contraction failure, |d_x xi| >= 1/2 at sampled point");
    }
  Field xi = f.xi, zeta = f.zeta;
  double a = f.a;
  // first partials (X'_X - 2X, X'_v + 1) of the new zeta
  auto first = [xi, zeta, a, B](double X, double v, double* val) {
    RhoJet r0 = rho_jet(xi, X, v);
    double x = X - r0.r;
    FieldJet zj = zeta ? zeta(x, v) : FieldJet{};
    double G = x * x + a - v + zj.f;
    double w = B * X, Xp = G + r0.r;
    RhoJet r1{};
    for (int it = 0; it < 60; ++it) {
      r1 = rho_jet(xi, Xp, w);
      double h = Xp - r1.r - G, step = h / (1 - r1.rx);
      Xp -= step;
      if (std::fabs(step) <= 1e-16 * (1 + std::fabs(Xp))) break;
    }
    r1 = rho_jet(xi, Xp, w);
    double gx = 2 * x + zj.fx;
    double GX = gx * (1 - r0.rx), Gv = -gx * r0.rv - 1 + zj.fv;
    double D = 1 - r1.rx;
    if (val) *val = Xp - X * X - a + v;
    return std::array<double, 2>{(GX + B * r1.rv) / D - 2 * X, Gv / D + 1};
  };
  HenonLikeMap out = f;
  out.xi = nullptr;
  out.normalized = true;
  out.name = f.name + "+normalized";
  out.zeta = [first](double X, double v) {
    FieldJet j;
    auto d = first(X, v, &j.f);
    j.fx = d[0];
    j.fv = d[1];
    const double h = 1e-5;
    auto px = first(X + h, v, nullptr), mx = first(X - h, v, nullptr);
    auto pv = first(X, v + h, nullptr), mv = first(X, v - h, nullptr);
    j.fxx = (px[0] - mx[0]) / (2 * h);
    j.fxv = (pv[0] - mv[0]) / (2 * h);
    j.fvv = (pv[1] - mv[1]) / (2 * h);
    return j;
  };
  return out;
}

OrbitResult orbit_escape(const HenonLikeMap& f, Vec2 z, int n_max, double r_esc, int keep) {
  OrbitResult r;
  r.trajectory.push_back(z);
  for (int k = 1; k <= n_max; ++k) {
    z = f(z);
    if (static_cast<int>(r.trajectory.size()) < keep) r.trajectory.push_back(z);
    if (!(std::max(std::fabs(z.x), std::fabs(z.y)) <= r_esc)) {
      r.escaped = true;
      r.steps = k;
      return r;
    }
  }
  r.steps = n_max;
  return r;
}

int escape_steps(const HenonLikeMap& f, Vec2 z, int n_max, double r_esc) {
  for (int k = 1; k <= n_max; ++k) {
    z = f(z);
    if (!(std::max(std::fabs(z.x), std::fabs(z.y)) <= r_esc)) return k;
  }
  return -1;
}

LyapValue lyapunov(const HenonLikeMap& f, Vec2 z, Vec2 v, int n, double r_esc) {
  LyapValue out;
  double nv = std::hypot(v.x, v.y);
  if (nv == 0) throw DomainError("lyapunov: zero tangent vector");
  v = {v.x / nv, v.y / nv};
  double sum = 0;
  for (int k = 0; k < n; ++k) {
    auto e = f.evaluate(z);
    Vec2 w{e.jac[0][0] * v.x + e.jac[0][1] * v.y, e.jac[1][0] * v.x + e.jac[1][1] * v.y};
    double nw = std::hypot(w.x, w.y);
    if (nw == 0) {
      out.kind = LyapValue::Kind::MinusInf;
      return out;
    }
    sum += std::log(nw);
    v = {w.x / nw, w.y / nw};
    z = e.image;
    if (!(std::max(std::fabs(z.x), std::fabs(z.y)) <= r_esc)) {
      out.kind = LyapValue::Kind::Escape;
      return out;
    }
  }
  out.value = sum / n;
  return out;
}

namespace {

double dist(Vec2 p, Vec2 q) { return std::max(std::fabs(p.x - q.x), std::fabs(p.y - q.y)); }

Mat2 mul(const Mat2& A, const Mat2& B) {
  Mat2 C{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
  return C;
}

// f^p(z) and its Jacobian
Vec2 iterate_jac(const HenonLikeMap& f, Vec2 z, int p, Mat2& J) {
  J = {{{1, 0}, {0, 1}}};
  for (int i = 0; i < p; ++i) {
    auto e = f.evaluate(z);
    J = mul(e.jac, J);
    z = e.image;
  }
  return z;
}

bool refine_cycle(const HenonLikeMap& f, Vec2& z, int p) {
  for (int it = 0; it < 50; ++it) {
    Mat2 J;
    Vec2 w = iterate_jac(f, z, p, J);
    double fx = w.x - z.x, fy = w.y - z.y;
    double a11 = J[0][0] - 1, a12 = J[0][1], a21 = J[1][0], a22 = J[1][1] - 1;
    double det = a11 * a22 - a12 * a21;
    if (det == 0 || !std::isfinite(det)) return std::max(std::fabs(fx), std::fabs(fy)) < 1e-12;
    double dx = (fx * a22 - fy * a12) / det, dy = (a11 * fy - a21 * fx) / det;
    z.x -= dx;
    z.y -= dy;
    if (!std::isfinite(z.x) || !std::isfinite(z.y)) return false;
    if (std::max(std::fabs(dx), std::fabs(dy)) < 1e-14 * (1 + std::fabs(z.x) + std::fabs(z.y))) break;
  }
  Mat2 J;
  return dist(iterate_jac(f, z, p, J), z) < 1e-10;
}

int first_return(const HenonLikeMap& f, Vec2 z0, int max_period, double tol) {
  Vec2 z = z0;
  for (int p = 1; p <= max_period; ++p) {
    z = f(z);
    if (dist(z, z0) < tol) return p;
  }
  return 0;
}

}  // namespace

AttractorSearch find_attractors(const HenonLikeMap& f, const std::vector<Vec2>& seeds, int max_period,
                                int n_transient, double tol, double r_esc) {
  if (max_period < 1) throw DomainError("find_attractors: max_period must be >= 1");
  AttractorSearch out;
  for (Vec2 z : seeds) {
    bool escaped = false;
    int p = 0;
    for (int round = 0; round < 4 && !escaped && p == 0; ++round) {
      for (int k = 0; k < n_transient; ++k) {
        z = f(z);
        if (!(std::max(std::fabs(z.x), std::fabs(z.y)) <= r_esc)) {
          escaped = true;
          break;
        }
      }
      if (!escaped) p = first_return(f, z, max_period, tol);
    }
    if (escaped) {
      ++out.escaped;
      continue;
    }
    if (p == 0) {
      // slow convergence: accept a loose recurrence when Newton confirms it
      Vec2 w = z;
      double best = 1e300;
      for (int q = 1; q <= max_period; ++q) {
        w = f(w);
        double d = dist(w, z);
        if (d < best) {
          best = d;
          p = q;
        }
      }
      if (best > 1e-4) p = 0;
    }
    if (p == 0 || !refine_cycle(f, z, p)) {
      ++out.unresolved;
      continue;
    }
    // minimal period
    Vec2 w = z;
    for (int q = 1; q < p; ++q) {
      w = f(w);
      if (p % q == 0 && dist(w, z) < 1e-8) {
        p = q;
        break;
      }
    }
    Cycle c;
    c.period = p;
    Vec2 u = z;
    for (int i = 0; i < p; ++i) {
      c.points.push_back(u);
      u = f(u);
    }
    Mat2 J;
    iterate_jac(f, z, p, J);
    double tr = J[0][0] + J[1][1], det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    std::complex<double> s = std::sqrt(std::complex<double>(tr * tr - 4 * det, 0));
    c.multipliers = {0.5 * (tr + s), 0.5 * (tr - s)};
    c.spectral_radius = std::max(std::abs(c.multipliers[0]), std::abs(c.multipliers[1]));
    if (!(c.spectral_radius < 1)) continue;
    bool dup = false;
    for (const auto& o : out.cycles) {
      if (o.period != c.period) continue;
      for (const auto& q : o.points)
        if (dist(q, c.points[0]) < 1e-6) dup = true;
    }
    if (!dup) out.cycles.push_back(std::move(c));
  }
  return out;
}

}  // namespace henlab
