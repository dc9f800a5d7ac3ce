#include "henlab/renorm.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "henlab/errors.hpp"
#include "henlab/roots.hpp"

namespace henlab {

double unit_By(const CrossMapChain& chain, double x1, double y0) {
  auto e = eval_cross(chain, x1, y0, false);
  const HenonLikeMap& f = chain.map;
  const double bm = f.bm();
  const int n = chain.order();
  std::vector<FactorJet> jets(n);
  for (int i = 0; i < n; ++i) {
    double x = e.X[i], v = bm * e.Y[i];
    FieldJet z = f.zeta_at(x, v), s = f.xi_at(x, v);
    double gx = 2 * x + z.fx;
    FactorJet& j = jets[i];
    j.Ax = bm / gx;
    j.Ay = (1 - z.fv) / gx;
    j.Bx = (1 + s.fx) * j.Ax;
    j.By = (1 + s.fx) * j.Ay + s.fv;
  }
  return chain_partials(jets).By;
}

double TangencyData::H(double x) const { return eval_cross(chain, c + x, entry, false).B; }

double TangencyData::V(double y) const { return eval_cross(next, c_next, c + y, false).A; }

double TangencyData::defect(double x) const { return chain.map.g(c + x, H(x)) - V(x); }

double TangencyData::defect_slope(double x) const {
  const HenonLikeMap& f = chain.map;
  const double X = c + x, bm = f.bm();
  auto e = eval_cross(chain, X, entry, true);
  FieldJet z = f.zeta_at(X, bm * e.B);
  double gx = 2 * X + z.fx, gy = -bm * (1 - z.fv);
  auto en = eval_cross(next, c_next, X, true);
  return gx + gy * e.Bx - en.Ay;
}

namespace {

CrossMapChain renorm_chain(const Word& w, const HenonLikeMap& f) {
  CrossMapChain c = factorize_chain(w, f);
  c.tol = 1e-15;
  c.max_sweeps = 2000;
  return c;
}

std::vector<TangencyData> build_cycle(const std::vector<CrossMapChain>& chains, const std::vector<double>& c) {
  const int N = static_cast<int>(chains.size());
  std::vector<TangencyData> t(N);
  for (int i = 0; i < N; ++i) {
    t[i].chain = chains[i];
    t[i].next = chains[(i + 1) % N];
    t[i].c = c[i];
    t[i].entry = c[(i + N - 1) % N];
    t[i].c_next = c[(i + 1) % N];
  }
  return t;
}

std::vector<double> slopes(const std::vector<CrossMapChain>& chains, const std::vector<double>& c) {
  auto t = build_cycle(chains, c);
  std::vector<double> h(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) h[i] = t[i].defect_slope(0.0);
  return h;
}

// small dense solve, partial pivoting
std::vector<double> solve_linear(std::vector<std::vector<double>> A, std::vector<double> r) {
  const int n = static_cast<int>(r.size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(A[i][k]) > std::fabs(A[p][k])) p = i;
    if (A[p][k] == 0) throw ConvergenceError("tangency: singular Jacobian");
    std::swap(A[p], A[k]);
    std::swap(r[p], r[k]);
    for (int i = k + 1; i < n; ++i) {
      double m = A[i][k] / A[k][k];
      for (int j = k; j < n; ++j) A[i][j] -= m * A[k][j];
      r[i] -= m * r[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = k + 1; j < n; ++j) r[k] -= A[k][j] * r[j];
    r[k] /= A[k][k];
  }
  return r;
}

}  // namespace

std::vector<TangencyData> tangency_cycle(const HenonLikeMap& f0, const std::vector<Word>& words) {
  if (words.empty()) throw DomainError("tangency: no pieces");
  const HenonLikeMap f = f0.xi ? normalize_xi(f0) : f0;
  const int N = static_cast<int>(words.size());
  std::vector<CrossMapChain> chains;
  for (const auto& w : words) chains.push_back(renorm_chain(w, f));
  std::vector<double> c(N, 0.0);
  const double h = 1e-7;
  bool done = false;
  for (int it = 0; it < 60 && !done; ++it) {
    auto r = slopes(chains, c);
    double rmax = 0;
    for (double v : r) rmax = std::max(rmax, std::fabs(v));
    if (rmax == 0) break;
    std::vector<std::vector<double>> J(N, std::vector<double>(N));
    for (int k = 0; k < N; ++k) {
      auto cp = c, cm = c;
      cp[k] += h;
      cm[k] -= h;
      auto rp = slopes(chains, cp), rm = slopes(chains, cm);
      for (int i = 0; i < N; ++i) J[i][k] = (rp[i] - rm[i]) / (2 * h);
    }
    auto step = solve_linear(J, r);
    double smax = 0;
    for (int i = 0; i < N; ++i) {
      c[i] -= step[i];
      smax = std::max(smax, std::fabs(step[i]));
    }
    if (!std::isfinite(smax)) throw ConvergenceError("tangency: Newton diverged");
    if (smax <= 1e-15) done = true;
    if (it == 59 && smax > 1e-12) throw ConvergenceError("tangency: Newton did not converge");
  }
  auto t = build_cycle(chains, c);
  const double hq = 1e-5;
  for (auto& d : t) {
    auto e = eval_cross(d.chain, d.c, d.entry, true);
    d.sigma = e.Ax;
    d.lambda = e.By;
    d.lambda_unit = unit_By(d.chain, d.c, d.entry);
    d.mu = f.g(d.c, e.B) - eval_cross(d.next, d.c_next, d.c, false).A;
    d.q = (d.defect_slope(hq) - d.defect_slope(-hq)) / (4 * hq);
    d.d = f.evaluate(Vec2{d.c, e.B}).det;
    if (std::fabs(d.q) < 1e-3) throw DomainError("tangency: degenerate quadratic coefficient");
  }
  return t;
}

TangencyData tangency_data(const HenonLikeMap& f, const Word& word) { return tangency_cycle(f, {word})[0]; }

Vec2 Chart::operator()(Vec2 XY) const {
  double x = c + u * XY.x;
  double y = eval_cross(chain, x, entry, false).B + (yscale_unit * XY.y) * bmn;
  return {x, y};
}

Vec2 Chart::inverse(Vec2 xy) const {
  double X = (xy.x - c) / u;
  double ys = yscale();
  double Y = ys != 0 ? (xy.y - eval_cross(chain, xy.x, entry, false).B) / ys : std::numeric_limits<double>::quiet_NaN();
  return {X, Y};
}

Vec2 renorm_step(const HenonLikeMap& f, const Chart& in, const Chart& out, Vec2 XY) {
  Vec2 z = in(XY);
  Vec2 w = f(z);
  const double x0 = w.x, y0 = w.y;
  const CrossMapChain& ch = out.chain;
  const double lo = ch.piece.image_lo, hi = ch.piece.image_hi, pad = 0.05 * (hi - lo);
  double x1 = out.c;
  double prev = HUGE_VAL;
  for (int it = 0;; ++it) {
    CrossMapEval e;
    try {
      e = eval_cross(ch, x1, y0, true);
    } catch (const BranchError& err) {
      throw DomainError(std::string("renormalized step left the piece: ") + err.what());
    }
    double step = (e.A - x0) / e.Ax;
    x1 -= step;
    if (!(x1 > lo - pad && x1 < hi + pad)) throw DomainError("renormalized step left the piece image");
    double noise = 4e-16 * (1 + std::fabs(x0)) / std::fabs(e.Ax);
    if (std::fabs(step) <= std::max(1e-14 * std::fabs(out.u), noise)) break;
    if (it > 8 && std::fabs(step) >= prev) break;  // stagnated at rounding level
    if (it > 60) throw ConvergenceError("renormalized step: Newton for x1 did not converge");
    prev = std::fabs(step);
  }
  double X1 = (x1 - out.c) / out.u;
  double integral = boost::math::quadrature::gauss<double, 10>::integrate(
      [&](double t) { return unit_By(ch, x1, t); }, out.entry, y0);
  double Y1 = integral / out.yscale_unit;
  return {X1, Y1};
}

double RenormData::y_half_range() const {
  if (bbarM == 0 || !std::isfinite(R / bbarM)) return R;
  return R / std::fabs(bbarM);
}

namespace {

DeviationSample sample_deviation(const std::function<Vec2(Vec2)>& F, const std::function<Vec2(Vec2)>& nf,
                                 double xh, double yh, int grid) {
  DeviationSample d;
  for (int i = 0; i < grid; ++i)
    for (int k = 0; k < grid; ++k) {
      Vec2 XY{-xh + 2 * xh * i / (grid - 1), -yh + 2 * yh * k / (grid - 1)};
      ++d.samples;
      try {
        Vec2 a = F(XY), b = nf(XY);
        d.sup = std::max({d.sup, std::fabs(a.x - b.x), std::fabs(a.y - b.y)});
      } catch (const DomainError&) {
        ++d.skipped;
      } catch (const ConvergenceError&) {
        ++d.skipped;
      }
    }
  if (d.samples > 0 && d.skipped == d.samples) throw DomainError("every deviation sample left the piece");
  return d;
}

}  // namespace

RenormData renormalize(const HenonLikeMap& f0, const Word& word, double R, int grid) {
  const HenonLikeMap f = f0.xi ? normalize_xi(f0) : f0;
  RenormData r;
  r.map = f;
  r.R = R;
  r.tangency = tangency_data(f, word);
  const TangencyData& t = r.tangency;
  if (t.sigma == 0) throw DomainError("renormalize: sigma vanishes");
  r.n = t.chain.order();
  r.M = f.m * (r.n + 1);
  r.abar = t.q * t.mu / (t.sigma * t.sigma);

  auto e = eval_cross(t.chain, t.c, t.entry, false);
  double logsum = 0;
  int sign = 1;
  bool zero = false;
  for (int i = 0; i <= r.n; ++i) {
    double d = f.evaluate(Vec2{e.X[i], e.Y[i]}).det;
    if (d == 0) zero = true;
    if (d < 0) sign = -sign;
    logsum += std::log(std::fabs(d));
  }
  if (zero) {
    r.bbar = 0;
    r.bbarM = 0;
    r.log_abs_det = -HUGE_VAL;
  } else {
    r.log_abs_det = logsum;
    double root = std::exp(logsum / r.M);
    if (r.M % 2 == 1) {
      r.bbar = sign * root;
    } else {
      if (sign < 0) throw DomainError("renormalize: even M with negative determinant (orientation reversing)");
      r.bbar = (f.b < 0 ? -1 : 1) * root;
    }
    r.bbarM = sign * std::exp(logsum);
  }
  const double u = t.sigma / t.q;
  r.chart.c = t.c;
  r.chart.entry = t.entry;
  r.chart.u = u;
  r.chart.yscale_unit = u * t.lambda_unit;
  r.chart.bmn = std::pow(f.bm(), r.n);
  r.chart.chain = t.chain;
  if (grid >= 2) {
    r.delta = sample_deviation([&r](Vec2 XY) { return r.F(XY); }, [&r](Vec2 XY) { return r.normal_form(XY); }, R,
                               r.y_half_range(), grid);
  }
  return r;
}

double renorm_abar(const HenonLikeMap& f, const Word& word) {
  auto t = tangency_data(f, word);
  return t.q * t.mu / (t.sigma * t.sigma);
}

namespace {

double mu_at(const Family& fam, const Word& word, double a, double b) {
  try {
    return tangency_data(fam(a, b), word).mu;
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  } catch (const ConvergenceError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

double solve_mu_zero(const Family& fam, const Word& word, double b) {
  SpecialParameters sp = special_parameters();
  const double lo = sp.a2 - 0.01, hi = sp.a1 - 0.01;
  // roots accumulate at a2, so sample densely there
  std::vector<double> grid;
  for (int i = 0; i <= 120; ++i) grid.push_back(lo + (hi - lo) * i / 120.0);
  for (int e = 2; e <= 14; ++e)
    for (double m : {1.0, 2.0, 5.0}) grid.push_back(sp.a2 + m * std::pow(10.0, -e));
  std::sort(grid.begin(), grid.end());
  double pa = NAN, pm = NAN;
  for (double a : grid) {
    double m = mu_at(fam, word, a, b);
    if (std::isfinite(m) && std::isfinite(pm) && (m == 0 || (pm < 0) != (m < 0))) {
      auto fn = [&](double x) {
        double v = mu_at(fam, word, x, b);
        if (!std::isfinite(v)) throw ConvergenceError("solve_mu_zero: defect undefined inside bracket");
        return v;
      };
      return bracket_root(fn, pa, a, 1e-15, 0.0, "solve_mu_zero");
    }
    if (std::isfinite(m)) {
      pa = a;
      pm = m;
    }
  }
  throw ConvergenceError("solve_mu_zero: no sign change of the tangency defect for " + format_word(word) +
                         " at b=" + std::to_string(b));
}

RenormWindow renorm_window(const Family& fam, const Word& word, double b) {
  RenormWindow w;
  w.a_mu = solve_mu_zero(fam, word, b);
  auto abar = [&](double a) { return renorm_abar(fam(a, b), word); };
  auto t = tangency_data(fam(w.a_mu, b), word);
  double h = 1e-3 * t.sigma * t.sigma;
  double slope = (abar(w.a_mu + h) - abar(w.a_mu - h)) / (2 * h);
  if (!(slope != 0) || !std::isfinite(slope)) throw ConvergenceError("renorm_window: flat abar");
  auto solve = [&](double target) {
    double guess = w.a_mu + target / slope;
    double far = guess + 0.5 * (guess - w.a_mu);
    for (int i = 0; i < 20; ++i) {
      double fa = abar(far) - target;
      if ((fa > 0) == (target > 0) || fa == 0) break;
      far = w.a_mu + 2 * (far - w.a_mu);
    }
    return bracket_root([&](double a) { return abar(a) - target; }, std::min(w.a_mu, far), std::max(w.a_mu, far), 1e-15,
                        0.0, "renorm_window");
  };
  double a_quarter = solve(0.25), a_minus2 = solve(-2.0);
  w.a_lo = std::min(a_quarter, a_minus2);
  w.a_hi = std::max(a_quarter, a_minus2);
  return w;
}

namespace {

bool banded(double a, int period) {
  double x = 0;
  for (int i = 0; i < 20000; ++i) {
    x = x * x + a;
    if (std::fabs(x) > 10) return false;
  }
  std::vector<double> lo(period, HUGE_VAL), hi(period, -HUGE_VAL);
  for (int i = 0; i < 40000 * period / 5 + 40000; ++i) {
    x = x * x + a;
    if (std::fabs(x) > 10) return false;
    int r = i % period;
    lo[r] = std::min(lo[r], x);
    hi[r] = std::max(hi[r], x);
  }
  std::vector<std::pair<double, double>> b;
  for (int r = 0; r < period; ++r) b.push_back({lo[r], hi[r]});
  std::sort(b.begin(), b.end());
  for (int r = 0; r + 1 < period; ++r)
    if (b[r].second >= b[r + 1].first) return false;
  return true;
}

}  // namespace

std::pair<double, double> band_window_scan(double inside, double half_width, int period, int n_grid) {
  std::vector<double> a(n_grid);
  std::vector<char> in(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    a[i] = inside - half_width + 2 * half_width * i / (n_grid - 1);
    in[i] = banded(a[i], period);
  }
  int c = (n_grid - 1) / 2;
  if (!in[c]) throw DomainError("band_window_scan: centre parameter is not banded");
  int l = c, r = c;
  while (l > 0 && in[l - 1]) --l;
  while (r + 1 < n_grid && in[r + 1]) ++r;
  if (l == 0 || r == n_grid - 1) throw DomainError("band_window_scan: window reaches the scan edge");
  return {0.5 * (a[l - 1] + a[l]), 0.5 * (a[r] + a[r + 1])};
}

}  // namespace henlab
