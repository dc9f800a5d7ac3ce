#include "henlab/maps1d.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "henlab/errors.hpp"
#include "henlab/roots.hpp"

namespace henlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sqrt with the flag cleared on a negative radicand
double rung(double radicand, bool& ok) {
  ok = radicand >= 0.0;
  return ok ? std::sqrt(radicand) : kNaN;
}

double alpha_of(double a) { return 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * a)); }
double alpha1_of(double a) { return std::sqrt(std::max(0.0, -alpha_of(a) - a)); }
double alpha2_of(double a) { return std::sqrt(std::max(0.0, alpha1_of(a) - a)); }

double iterate_quad(double a, double x, int n) {
  for (int i = 0; i < n; ++i) x = x * x + a;
  return x;
}

}  // namespace

void QuadraticLadder::check_full() const {
  if (!has_alpha1) throw LadderError("alpha1 undefined at a=" + std::to_string(a));
  if (!has_alpha2) throw LadderError("alpha2 undefined at a=" + std::to_string(a));
  if (!has_alpha3) throw LadderError("alpha3 undefined at a=" + std::to_string(a));
  if (!has_tilde) throw LadderError("tilde alpha2 undefined at a=" + std::to_string(a));
}

QuadraticLadder ladder(double a) {
  if (!(a < 0.25)) throw DomainError("ladder: fixed points are not real for a >= 1/4");
  QuadraticLadder L;
  L.a = a;
  double disc = std::sqrt(1.0 - 4.0 * a);
  L.alpha = 0.5 * (1.0 - disc);
  L.beta = 0.5 * (1.0 + disc);
  L.alpha0 = -L.alpha;
  L.alpha1 = rung(L.alpha0 - a, L.has_alpha1);
  L.alpha2 = L.has_alpha1 ? rung(L.alpha1 - a, L.has_alpha2) : kNaN;
  L.alpha3 = L.has_alpha2 ? rung(L.alpha2 - a, L.has_alpha3) : kNaN;
  L.tilde_alpha2 = L.has_alpha1 ? rung(-L.alpha1 - a, L.has_tilde) : kNaN;
  return L;
}

SpecialParameters special_parameters() {
  SpecialParameters sp;
  sp.a1 = bracket_root([](double a) { return a + alpha1_of(a); }, -1.6, -1.5, 1e-15, 1e-16, "a1");
  sp.a2 = bracket_root([](double a) { return a + alpha2_of(a); }, -1.95, -1.85, 1e-15, 1e-16, "a2");
  sp.a1_orbit = bracket_root([](double a) { return iterate_quad(a, 0.0, 3) - alpha_of(a); }, -1.6, -1.5,
                             1e-15, 1e-16, "a1 orbit");
  sp.a2_orbit = bracket_root([](double a) { return iterate_quad(a, 0.0, 4) - alpha_of(a); }, -1.91, -1.87,
                             1e-15, 1e-16, "a2 orbit");
  return sp;
}

std::vector<int> itinerary(double a, double x, int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = x < 0 ? -1 : 1;
    x = x * x + a;
  }
  return s;
}

double superstable_c1() {
  auto sp = special_parameters();
  auto g = [](double a) { return iterate_quad(a, 0.0, 5); };
  const std::vector<int> want{-1, 1, 1, -1};
  const int n = 400;
  double lo = sp.a2 + 1e-9, hi = sp.a1 - 1e-9;
  double prev = lo, gprev = g(lo);
  for (int i = 1; i <= n; ++i) {
    double a = lo + (hi - lo) * i / n;
    double ga = g(a);
    if (gprev * ga < 0) {
      double r = bracket_root(g, prev, a, 1e-15, 1e-16, "superstable");
      auto it = itinerary(r, r, 4);  // orbit of 0 from Q(0) = a
      if (it == want) return r;
    }
    prev = a;
    gprev = ga;
  }
  throw ConvergenceError("superstable_c1: no period-5 root with the c1 itinerary");
}

namespace {

Piece1D make_piece(const Word& w, double lo, double hi, int order, double a) {
  Piece1D p;
  p.word = w;
  p.lo = std::min(lo, hi);
  p.hi = std::max(lo, hi);
  p.order = order;
  p.signs = itinerary(a, 0.5 * (p.lo + p.hi), order);
  double u = iterate_quad(a, p.lo, order), v = iterate_quad(a, p.hi, order);
  p.image_lo = std::min(u, v);
  p.image_hi = std::max(u, v);
  return p;
}

double pull_back(double y, const std::vector<int>& signs, double a) {
  for (int i = static_cast<int>(signs.size()) - 1; i >= 0; --i) {
    double r = y - a;
    if (r < 0) {
      if (r < -1e-12) throw DomainError("pull_back: point outside the image of a branch");
      r = 0;
    }
    y = signs[i] * std::sqrt(r);
  }
  return y;
}

Piece1D gap_piece(const Symbol& s, double a) {
  int j = s.index;
  Piece1D cj = piece_1d(c_word(j), a);
  Piece1D cj1 = piece_1d(c_word(j + 1), a);
  // closure of R_{c_j} \ R_{c_{j+1}}: both share the left end -alpha2
  double y0 = cj1.hi, y1 = cj.hi;
  if (!(y0 > a))
    throw DomainError("gap piece " + format_symbol(s) + ": critical value lies outside c_" + std::to_string(j + 1));
  double u = std::sqrt(y0 - a), v = std::sqrt(y1 - a);
  Word w{s};
  if (s.kind == Sym::BoxMinus) return make_piece(w, -v, -u, 3 + 2 * j, a);
  return make_piece(w, u, v, 3 + 2 * j, a);
}

}  // namespace

Piece1D elementary_piece(const Symbol& s, double a) {
  QuadraticLadder L = ladder(a);
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw LadderError(std::string("piece ") + format_symbol(s) + ": " + what + " undefined");
  };
  Word w{s};
  switch (s.kind) {
    case Sym::E: return make_piece(w, -L.alpha0, L.alpha0, 0, a);
    case Sym::WPlus: need(L.has_alpha1, "alpha1"); return make_piece(w, L.alpha0, L.alpha1, 1, a);
    case Sym::WMinus: need(L.has_alpha1, "alpha1"); return make_piece(w, -L.alpha1, -L.alpha0, 1, a);
    case Sym::WEq: need(L.has_alpha2, "alpha2"); return make_piece(w, -L.alpha2, -L.alpha1, 2, a);
    case Sym::WTriple: need(L.has_alpha3, "alpha3"); return make_piece(w, -L.alpha3, -L.alpha2, 3, a);
    case Sym::SPlus: need(L.has_tilde, "tilde alpha2"); return make_piece(w, L.tilde_alpha2, L.alpha0, 2, a);
    case Sym::SMinus: need(L.has_tilde, "tilde alpha2"); return make_piece(w, -L.alpha0, -L.tilde_alpha2, 2, a);
    case Sym::C: return piece_1d(w, a);
    case Sym::BoxMinus:
    case Sym::BoxPlus: return gap_piece(s, a);
  }
  throw DomainError("unknown symbol");
}

Piece1D star(const Piece1D& p, const Piece1D& q, double a) {
  const double tol = 1e-12 * std::max(1.0, std::fabs(p.image_hi) + std::fabs(p.image_lo));
  if (q.lo < p.image_lo - tol || q.hi > p.image_hi + tol)
    throw ProductUndefinedError("star: segment of " + format_word(q.word) + " [" + std::to_string(q.lo) + ", " +
                                std::to_string(q.hi) + "] not inside image of " + format_word(p.word) + " [" +
                                std::to_string(p.image_lo) + ", " + std::to_string(p.image_hi) + "]");
  Piece1D r;
  r.word = concat(p.word, q.word);
  double u = pull_back(q.lo, p.signs, a), v = pull_back(q.hi, p.signs, a);
  r.lo = std::min(u, v);
  r.hi = std::max(u, v);
  r.order = p.order + q.order;
  r.image_lo = q.image_lo;
  r.image_hi = q.image_hi;
  r.signs = itinerary(a, 0.5 * (r.lo + r.hi), r.order);
  std::vector<int> expect = p.signs;
  expect.insert(expect.end(), q.signs.begin(), q.signs.end());
  if (r.signs != expect) throw ConvergenceError("star: midpoint itinerary disagrees with the factor signs");
  return r;
}

Piece1D piece_1d(const Word& w, double a) {
  if (w.empty()) throw DomainError("piece_1d: empty word");
  Word ex = expand_word(w);
  Piece1D acc = elementary_piece(ex[0], a);
  for (std::size_t i = 1; i < ex.size(); ++i) acc = star(acc, elementary_piece(ex[i], a), a);
  acc.word = w;
  return acc;
}

double eta_gap(int j, double a) {
  Piece1D u = piece_1d(c_word(j + 1), a), v = piece_1d(c_word(j + 2), a);
  return 0.5 * std::sqrt(u.hi - v.hi);
}

const char* tag_name(SwallowTag t) {
  switch (t) {
    case SwallowTag::Escape: return "escape";
    case SwallowTag::Wing: return "wing";
    case SwallowTag::Body: return "body";
  }
  return "?";
}

namespace {

int composed_escape(double first, double second, int n_max, double r_esc) {
  double x = 0.0;
  for (int k = 1; k <= n_max; ++k) {
    x = x * x + first;
    if (std::fabs(x) > r_esc) return k;
    x = x * x + second;
    if (std::fabs(x) > r_esc) return k;
  }
  return -1;
}

}  // namespace

SwallowClassification swallow_classify(double a, double b, int n_max, double r_esc) {
  SwallowClassification c;
  c.steps_ab = composed_escape(a, b, n_max, r_esc);
  c.steps_ba = composed_escape(b, a, n_max, r_esc);
  int bounded = (c.steps_ab < 0) + (c.steps_ba < 0);
  c.tag = bounded == 2 ? SwallowTag::Body : bounded == 1 ? SwallowTag::Wing : SwallowTag::Escape;
  return c;
}

namespace {

// (X, a) with Q_ab(X) = X, DQ_ab(X) = 1 at fixed b
bool c3_newton(double b, double& X, double& a) {
  for (int it = 0; it < 60; ++it) {
    double u = X * X + a;
    double f1 = u * u + b - X;
    double f2 = 4 * X * u - 1;
    double j11 = 4 * X * u - 1, j12 = 2 * u;
    double j21 = 4 * u + 8 * X * X, j22 = 4 * X;
    double det = j11 * j22 - j12 * j21;
    if (det == 0 || !std::isfinite(det)) return false;
    double dX = (f1 * j22 - f2 * j12) / det;
    double da = (j11 * f2 - j21 * f1) / det;
    X -= dX;
    a -= da;
    if (!std::isfinite(X) || !std::isfinite(a)) return false;
    if (std::fabs(dX) + std::fabs(da) < 1e-15 * (1 + std::fabs(X) + std::fabs(a))) break;
  }
  double u = X * X + a;
  return std::fabs(u * u + b - X) <= 1e-12 && std::fabs(4 * X * u - 1) <= 1e-12 && X > 0;
}

}  // namespace

BoundaryPolyline swallow_boundary(SwallowCurve curve, double lo, double hi, int n_samples) {
  if (n_samples < 2) throw DomainError("swallow_boundary: need at least 2 samples");
  BoundaryPolyline out;
  std::vector<double> ts(n_samples);
  for (int i = 0; i < n_samples; ++i) ts[i] = lo + (hi - lo) * i / (n_samples - 1);
  if (curve == SwallowCurve::C1 || curve == SwallowCurve::C2) {
    for (double t : ts) {
      if (!(t < 0) || !(4 * t * std::sqrt(-2 * t) < -1)) continue;
      double other = std::sqrt(-2 * t) - t * t;
      if (curve == SwallowCurve::C1) out.points.emplace_back(other, t);
      else out.points.emplace_back(t, other);
    }
    return out;
  }
  // C3: continuation in b from the saddle-node seed (X, a) = (1/2, 1/4) at b = 1/4
  std::vector<std::pair<double, double>> solved(n_samples, {kNaN, kNaN});
  std::vector<bool> ok(n_samples, false);
  auto march = [&](int dir) {
    double X = 0.5, a = 0.25, b = 0.25;
    bool alive = true;
    std::vector<int> order;
    for (int i = 0; i < n_samples; ++i)
      if ((dir > 0 && ts[i] >= 0.25) || (dir < 0 && ts[i] < 0.25)) order.push_back(i);
    if (dir < 0) std::reverse(order.begin(), order.end());
    for (int i : order) {
      if (!alive) break;
      double target = ts[i];
      int sub = std::max(1, static_cast<int>(std::ceil(std::fabs(target - b) / 0.01)));
      double b0 = b;
      for (int s = 1; s <= sub && alive; ++s) {
        double bb = b0 + (target - b0) * s / sub;
        double X1 = X, a1 = a;
        if (!c3_newton(bb, X1, a1)) {
          alive = false;
          break;
        }
        X = X1;
        a = a1;
        b = bb;
      }
      if (alive) {
        solved[i] = {a, target};
        ok[i] = true;
      }
    }
  };
  march(+1);
  march(-1);
  for (int i = 0; i < n_samples; ++i) {
    if (ok[i]) out.points.push_back(solved[i]);
    else out.failed.push_back(ts[i]);
  }
  return out;
}

ComposedLyap lyap_composed(double a, double b, int n, double r_esc) {
  auto run = [&](double first, double second, double x) {
    LyapValue v;
    double sum = 0;
    for (int k = 0; k < n; ++k) {
      double y = x * x + first;
      double d = 4 * x * y;
      if (d == 0.0) {
        v.kind = LyapValue::Kind::MinusInf;
        return v;
      }
      sum += std::log(std::fabs(d));
      if (std::fabs(y) > r_esc) {
        v.kind = LyapValue::Kind::Escape;
        return v;
      }
      x = y * y + second;
      if (std::fabs(x) > r_esc) {
        v.kind = LyapValue::Kind::Escape;
        return v;
      }
    }
    v.value = sum / n;
    return v;
  };
  ComposedLyap r;
  r.ba = run(b, a, b);  // Q_ba = Q_a o Q_b, DQ_ba(x) = 4 x Q_b(x)
  r.ab = run(a, b, a);
  return r;
}

}  // namespace henlab
