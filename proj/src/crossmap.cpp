#include "henlab/crossmap.hpp"

#include <algorithm>
#include <cmath>

#include "henlab/errors.hpp"

namespace henlab {

ChainSolution solve_chain(int n, const FactorFn& fn, double x_end, double y_start, std::vector<double> X,
                          std::vector<double> Y, double tol, int max_sweeps) {
  ChainSolution s;
  X.resize(n + 1);
  Y.resize(n + 1);
  X[n] = x_end;
  Y[0] = y_start;
  s.jets.resize(n);
  if (n == 0) {
    s.X = X;
    s.Y = Y;
    return s;
  }
  double prev = HUGE_VAL;
  int rising = 0;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double change = 0, scale = 1;
    for (int i = n - 1; i >= 0; --i) {
      FactorJet j = fn(i, X[i + 1], Y[i]);
      change = std::max({change, std::fabs(j.A - X[i]), std::fabs(j.B - Y[i + 1])});
      scale = std::max({scale, std::fabs(j.A), std::fabs(j.B)});
      X[i] = j.A;
      Y[i + 1] = j.B;
      s.jets[i] = j;
    }
    s.sweeps = sweep;
    s.change = change;
    if (!std::isfinite(change)) throw ConvergenceError("chain solver: non-finite state");
    if (change <= tol * scale) {
      // jets at the converged state
      for (int i = n - 1; i >= 0; --i) s.jets[i] = fn(i, X[i + 1], Y[i]);
      s.X = std::move(X);
      s.Y = std::move(Y);
      return s;
    }
    rising = change > prev ? rising + 1 : 0;
    if (rising >= 3) throw ConvergenceError("chain solver: sweep change increased 3 times (not hyperbolic)");
    prev = change;
  }
  throw ConvergenceError("chain solver: sweep cap reached");
}

ChainPartials chain_partials(const std::vector<FactorJet>& jets) {
  const int n = static_cast<int>(jets.size());
  ChainPartials out;
  if (n == 0) return out;
  std::vector<double> p(n + 1), den(n), qx(n + 1), qy(n + 1);
  p[n] = 0;
  qx[n] = 1;  // column d/dx1
  qy[n] = 0;  // column d/dy0
  for (int i = n - 1; i >= 0; --i) {
    const FactorJet& j = jets[i];
    den[i] = 1 - j.Bx * p[i + 1];
    p[i] = j.Ay + j.Ax * p[i + 1] * j.By / den[i];
    qx[i] = j.Ax * qx[i + 1] / den[i];
    qy[i] = 0;
  }
  double vx = 0, vy = 1;
  for (int i = 0; i < n; ++i) {
    const FactorJet& j = jets[i];
    vx = (j.Bx * qx[i + 1] + j.By * vx) / den[i];
    vy = (j.Bx * qy[i + 1] + j.By * vy) / den[i];
  }
  out.Ax = qx[0];           // u_0 = p_0 v_0 + q_0 with v_0 = 0
  out.Ay = p[0] + qy[0];    // v_0 = 1
  out.Bx = vx;
  out.By = vy;
  return out;
}

FactorJet CrossMapChain::factor(int i, double xn, double y) const {
  const int s = signs[i];
  const double Bm = map.bm(), v = Bm * y;
  double rad = xn - map.a + v;
  if (rad < 0)
    throw BranchError("factor " + std::to_string(i) + ": negative radicand " + std::to_string(rad));
  double x = s * std::sqrt(rad);
  FieldJet zj;
  if (map.zeta) {
    for (int it = 0; it < 40; ++it) {
      zj = map.zeta(x, v);
      double h = x * x + map.a - v + zj.f - xn, dh = 2 * x + zj.fx;
      double step = h / dh;
      x -= step;
      if (std::fabs(step) <= 1e-16 * (1 + std::fabs(x))) break;
    }
    if (!std::isfinite(x) || (x < 0 ? -1 : 1) != s)
      throw BranchError("factor " + std::to_string(i) + ": Newton left the branch");
    zj = map.zeta(x, v);
  }
  const double gx = 2 * x + zj.fx;
  FactorJet j;
  j.A = x;
  j.Ax = 1 / gx;
  j.Ay = Bm * (1 - zj.fv) / gx;
  if (map.xi) {
    FieldJet xj = map.xi(x, v);
    j.B = x + xj.f;
    j.Bx = (1 + xj.fx) * j.Ax;
    j.By = (1 + xj.fx) * j.Ay + Bm * xj.fv;
  } else {
    j.B = x;
    j.Bx = j.Ax;
    j.By = j.Ay;
  }
  return j;
}

CrossMapChain factorize_chain(const Word& word, const HenonLikeMap& map) {
  CrossMapChain c;
  c.map = map;
  c.word = word;
  c.piece = piece_1d(word, map.a);
  c.signs = c.piece.signs;
  return c;
}

namespace {

double step_residual(const HenonLikeMap& f, const std::vector<double>& X, const std::vector<double>& Y) {
  double r = 0;
  for (std::size_t i = 0; i + 1 < X.size(); ++i) {
    Vec2 w = f(Vec2{X[i], Y[i]});
    r = std::max({r, std::fabs(w.x - X[i + 1]), std::fabs(w.y - Y[i + 1])});
  }
  return r;
}

}  // namespace

CrossMapEval eval_cross(const CrossMapChain& chain, double x1, double y0, bool derivatives) {
  const int n = chain.order();
  std::vector<double> X(n + 1), Y(n + 1);
  // b = 0 radical chain as the seed
  X[n] = x1;
  Y[0] = y0;
  for (int i = n - 1; i >= 0; --i) {
    X[i] = chain.signs[i] * std::sqrt(std::max(0.0, X[i + 1] - chain.map.a));
    Y[i + 1] = X[i];
  }
  auto fn = [&chain](int i, double xn, double y) { return chain.factor(i, xn, y); };
  ChainSolution s = solve_chain(n, fn, x1, y0, X, Y, chain.tol, chain.max_sweeps);
  CrossMapEval e;
  e.A = s.X[0];
  e.B = s.Y[n];
  e.sweeps = s.sweeps;
  e.residual = step_residual(chain.map, s.X, s.Y);
  if (derivatives) {
    ChainPartials d = chain_partials(s.jets);
    e.Ax = d.Ax;
    e.Ay = d.Ay;
    e.Bx = d.Bx;
    e.By = d.By;
  }
  e.X = std::move(s.X);
  e.Y = std::move(s.Y);
  return e;
}

CrossDerivatives eval_cross_derivatives(const CrossMapChain& chain, double x1, double y0) {
  auto e = eval_cross(chain, x1, y0, true);
  return {e.Ax, e.Ay, e.Bx, e.By};
}

ShootResult shoot_oracle(const CrossMapChain& chain, double x1, double y0, int max_order) {
  const int n = chain.order();
  if (n > max_order) throw DomainError("shoot_oracle: order " + std::to_string(n) + " above cap");
  const HenonLikeMap& f = chain.map;
  struct Probe {
    int dir;      // +1: x0 too large, -1: too small
    bool full;    // itinerary respected all the way
    Vec2 end;
  };
  auto probe = [&](double x0) {
    Vec2 z{x0, y0};
    int eps = 1;
    for (int i = 0; i < n; ++i) {
      int si = z.x < 0 ? -1 : 1;
      if (si != chain.signs[i]) {
        bool large = si > chain.signs[i];
        return Probe{(large == (eps > 0)) ? 1 : -1, false, z};
      }
      z = f(z);
      eps *= chain.signs[i];
      if (std::fabs(z.x) > 1e3) return Probe{eps > 0 ? 1 : -1, false, z};
    }
    if (z.x == x1) return Probe{0, true, z};
    bool large = z.x > x1;
    return Probe{(large == (eps > 0)) ? 1 : -1, true, z};
  };
  double lo = -3, hi = 3;
  Probe plo = probe(lo), phi = probe(hi);
  if (plo.dir != -1 || phi.dir != 1) throw ConvergenceError("shoot_oracle: initial bracket does not enclose");
  ShootResult r;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Probe pm = probe(mid);
    r.iterations = it + 1;
    if (pm.dir == 0) {
      r.A = mid;
      r.B = pm.end.y;
      return r;
    }
    if (pm.dir > 0) {
      hi = mid;
      phi = pm;
    } else {
      lo = mid;
      plo = pm;
    }
    if (hi - lo <= 1e-16 * std::max(1.0, std::fabs(lo))) break;
  }
  if (!plo.full || !phi.full || (plo.end.x - x1) * (phi.end.x - x1) > 0)
    throw ConvergenceError("shoot_oracle: non-monotone slice or target outside the image");
  double t = (x1 - plo.end.x) / (phi.end.x - plo.end.x);
  if (!std::isfinite(t)) t = 0.5;
  t = std::clamp(t, 0.0, 1.0);
  r.A = lo + t * (hi - lo);
  r.B = plo.end.y + t * (phi.end.y - plo.end.y);
  return r;
}

double hyperbolicity_lhs(const HyperbolicityInput& d, const ConeSpec& cone) {
  double l1 = std::fabs(d.Ax) / cone.c + std::fabs(d.Ay) / cone.c_v;
  double l2 = std::fabs(d.By) / cone.c + std::fabs(d.Bx) / cone.c_h;
  return std::max(l1, l2);
}

HyperbolicityResult hyperbolicity_check(const CrossMapChain& chain, const ConeSpec& cone, int grid) {
  HyperbolicityResult r;
  double lo = chain.piece.image_lo, hi = chain.piece.image_hi;
  double pad = 1e-6 * (hi - lo);
  double worst = -HUGE_VAL;
  for (int i = 0; i < grid; ++i)
    for (int k = 0; k < grid; ++k) {
      double x1 = lo + pad + (hi - lo - 2 * pad) * i / (grid - 1);
      double y0 = -3 + 6.0 * k / (grid - 1);
      ++r.points;
      double lhs;
      try {
        auto e = eval_cross(chain, x1, y0, true);
        lhs = hyperbolicity_lhs({e.Ax, e.Ay, e.Bx, e.By}, cone);
      } catch (const std::exception&) {
        ++r.failures;
        lhs = HUGE_VAL;
      }
      if (lhs > worst) {
        worst = lhs;
        r.worst_x1 = x1;
        r.worst_y0 = y0;
      }
    }
  r.margin = 1 - worst;
  r.ok = r.failures == 0 && worst <= 1;
  return r;
}

DistortionReport distortion_report(const Word& word, const Family& fam,
                                   const std::vector<std::pair<double, double>>& params, int probe_grid) {
  DistortionReport rep;
  bool bm_ok = true;
  double bm_max = 0;
  const double h = 1e-5, hp = 1e-6;
  for (auto [a, b] : params) {
    CrossMapChain chain = factorize_chain(word, fam(a, b));
    const int n = chain.order();
    double lo = chain.piece.image_lo, hi = chain.piece.image_hi, pad = 0.02 * (hi - lo);
    if (b == 0) bm_ok = false;
    for (int i = 0; i < probe_grid; ++i)
      for (int k = 0; k < probe_grid; ++k) {
        double x1 = lo + pad + (hi - lo - 2 * pad) * i / std::max(1, probe_grid - 1);
        double y0 = -3 + 6.0 * k / std::max(1, probe_grid - 1);
        ++rep.probes;
        auto e = eval_cross(chain, x1, y0, true);
        rep.B0 = std::max({rep.B0, std::fabs(e.A), std::fabs(e.B), std::fabs(e.Ax), std::fabs(e.Ay),
                           std::fabs(e.Bx), std::fabs(e.By)});
        auto ex1p = eval_cross(chain, x1 + h, y0), ex1m = eval_cross(chain, x1 - h, y0);
        auto ey0p = eval_cross(chain, x1, y0 + h), ey0m = eval_cross(chain, x1, y0 - h);
        auto dlog = [&](double p, double m) { return (std::log(std::fabs(p)) - std::log(std::fabs(m))) / (2 * h); };
        double g = std::max(std::fabs(dlog(ex1p.Ax, ex1m.Ax)), std::fabs(dlog(ey0p.Ax, ey0m.Ax)));
        if (b != 0)
          g = std::max({g, std::fabs(dlog(ex1p.By, ex1m.By)), std::fabs(dlog(ey0p.By, ey0m.By))});
        rep.B1 = std::max(rep.B1, g);
        // product of the order-1 slopes along the solved orbit
        double logsum = 0;
        int sgn = 1;
        for (int s = 0; s < n; ++s) {
          double ax = chain.factor(s, e.X[s + 1], e.Y[s]).Ax;
          logsum += std::log(std::fabs(ax));
          sgn *= ax < 0 ? -1 : 1;
        }
        double prod = n ? sgn * std::exp(logsum) : 1.0;
        rep.sum_formula_gap = std::max(rep.sum_formula_gap, std::fabs(prod - e.Ax) / std::fabs(e.Ax));
        if (b != 0 && n > 0) {
          auto lg = [&](double aa, double bb) {
            CrossMapChain c2 = chain;
            c2.map = fam(aa, bb);
            double bb_mn = std::pow(std::fabs(c2.map.bm()), n);
            return std::log(std::fabs(eval_cross(c2, x1, y0).By) / bb_mn);
          };
          double da = (lg(a + hp, b) - lg(a - hp, b)) / (2 * hp);
          double hb = hp * std::fabs(b);
          double db = (lg(a, b + hb) - lg(a, b - hb)) / (2 * hb);
          bm_max = std::max(bm_max, std::max(std::fabs(da), std::fabs(db)) / n);
        }
      }
  }
  if (bm_ok) rep.Bm = bm_max;
  return rep;
}

}  // namespace henlab
