#include <algorithm>
#include <cmath>
#include <limits>

#include "henlab/errors.hpp"
#include "henlab/renorm.hpp"
#include "henlab/roots.hpp"

namespace henlab {

std::vector<double> gamma_chain(const std::vector<double>& s) {
  const int N = static_cast<int>(s.size());
  if (N == 0) throw DomainError("gamma_chain: empty cycle");
  for (double v : s)
    if (v == 0 || !std::isfinite(v)) throw DomainError("gamma_chain: vanishing scale");
  std::vector<double> g(N);
  if (N == 2) {
    g[0] = std::copysign(std::cbrt(s[1] * s[1] * std::fabs(s[0])), s[0]);
    g[1] = std::copysign(std::cbrt(s[0] * s[0] * std::fabs(s[1])), s[1]);
    return g;
  }
  // log|g_i| = sum_m 2^-o / (1 - 2^-N) log|s_m|, o = (m - i) mod N in 1..N
  for (int i = 0; i < N; ++i) {
    double lg = 0;
    for (int m = 0; m < N; ++m) {
      int o = ((m - i) % N + N) % N;
      if (o == 0) o = N;
      lg += std::ldexp(1.0, -o) / (1 - std::ldexp(1.0, -N)) * std::log(std::fabs(s[m]));
    }
    g[i] = std::copysign(std::exp(lg), s[i]);
  }
  return g;
}

Vec2 MultiRenormData::F(int i, Vec2 XY) const { return renorm_step(map, charts[i], charts[(i + 1) % N], XY); }

double MultiRenormData::gamma_defect() const {
  double worst = 0;
  for (int i = 0; i < N; ++i) {
    int j = (i + 1) % N;
    worst = std::max(worst, std::fabs(gamma[i] * gamma[i] - gamma[j] * s[j]) / (gamma[i] * gamma[i]));
  }
  return worst;
}

namespace {

struct CycleScales {
  std::vector<double> s, gamma, u;
};

// x-scales after folding each q_i into the chart: s_i = sigma_i q_{i-1} / q_i
CycleScales cycle_scales(const std::vector<TangencyData>& t) {
  const int N = static_cast<int>(t.size());
  CycleScales r;
  r.s.resize(N);
  for (int i = 0; i < N; ++i) r.s[i] = t[i].sigma * t[(i + N - 1) % N].q / t[i].q;
  r.gamma = gamma_chain(r.s);
  r.u.resize(N);
  for (int i = 0; i < N; ++i) r.u[i] = r.gamma[i] / t[i].q;
  return r;
}

}  // namespace

MultiRenormData multi_renormalize(const HenonLikeMap& f0, const std::vector<Word>& words) {
  const HenonLikeMap f = f0.xi ? normalize_xi(f0) : f0;
  MultiRenormData m;
  m.N = static_cast<int>(words.size());
  if (m.N < 2) throw DomainError("multi_renormalize: need at least two pieces");
  m.map = f;
  m.tangency = tangency_cycle(f, words);
  auto sc = cycle_scales(m.tangency);
  m.s = sc.s;
  m.gamma = sc.gamma;
  const double bm = f.bm();
  for (int i = 0; i < m.N; ++i) {
    const TangencyData& t = m.tangency[i];
    const int prev = (i + m.N - 1) % m.N;
    m.sigma.push_back(t.sigma);
    m.lambda_unit.push_back(t.lambda_unit);
    m.q.push_back(t.q);
    m.n.push_back(t.chain.order());
    m.abar.push_back(t.q * t.mu / (m.gamma[i] * m.gamma[i]));
    double bmn = std::pow(bm, t.chain.order());
    m.bbar.push_back(t.d * sc.u[prev] * t.lambda_unit * bmn / (t.q * sc.u[i] * sc.u[i]));
    Chart ch;
    ch.c = t.c;
    ch.entry = t.entry;
    ch.u = sc.u[i];
    ch.yscale_unit = sc.u[prev] * t.lambda_unit;
    ch.bmn = bmn;
    ch.chain = t.chain;
    m.charts.push_back(ch);
  }
  return m;
}

SwallowComparison compare_swallow(const MultiRenormData& m, double half, int grid) {
  if (m.N != 2) throw DomainError("compare_swallow: needs a 2-cycle");
  SwallowComparison r;
  double bmax = std::max(std::fabs(m.bbar[0]), std::fabs(m.bbar[1]));
  r.eps = std::sqrt(bmax);
  for (int i = 0; i < grid; ++i)
    for (int k = 0; k < grid; ++k) {
      double x = -half + 2 * half * i / (grid - 1), y = -half + 2 * half * k / (grid - 1);
      ++r.samples;
      try {
        Vec2 XY{x, r.eps > 0 ? y / r.eps : 0.0};
        Vec2 W = m.F(1, m.F(0, XY));
        double p = x * x + m.abar[0];
        double nx = p * p + m.abar[1];
        r.sup = std::max({r.sup, std::fabs(W.x - nx), std::fabs(r.eps * W.y)});
      } catch (const DomainError&) {
        ++r.skipped;
      } catch (const ConvergenceError&) {
        ++r.skipped;
      }
    }
  if (r.skipped == r.samples) throw DomainError("compare_swallow: every sample left the pieces");
  return r;
}

std::vector<Word> swallow_words(int k, int sign) {
  Word d = parse_word("c" + std::to_string(k));
  Word e = d;
  e.push_back(Symbol{sign < 0 ? Sym::SMinus : Sym::SPlus});
  e.push_back(Symbol{Sym::BoxMinus, 0});
  return {d, e};
}

namespace {

double cycle_mu(const Family& fam, const std::vector<Word>& w, double a, double b, int i) {
  try {
    return tangency_cycle(fam(a, b), w)[i].mu;
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  } catch (const ConvergenceError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// root in a of mu_0 near guess, bracket grown geometrically
double a_on_curve(const Family& fam, const std::vector<Word>& w, double b, double guess, double step) {
  auto fn = [&](double a) {
    double v = cycle_mu(fam, w, a, b, 0);
    if (!std::isfinite(v)) throw ConvergenceError("double tangency: defect undefined");
    return v;
  };
  double f0 = fn(guess);
  if (f0 == 0) return guess;
  for (int i = 0; i < 40; ++i) {
    for (double sgn : {1.0, -1.0}) {
      double a = guess + sgn * step;
      double v = cycle_mu(fam, w, a, b, 0);
      if (std::isfinite(v) && (v < 0) != (f0 < 0))
        return bracket_root(fn, std::min(a, guess), std::max(a, guess), 1e-15, 0.0, "double tangency");
    }
    step *= 2;
  }
  throw ConvergenceError("double tangency: no root of the first defect near the guess");
}

}  // namespace

DoubleTangency double_tangency(const Family& fam, const std::vector<Word>& words, double b_lo, double b_hi,
                               int scan) {
  if (words.size() != 2) throw DomainError("double_tangency: needs two words");
  if (b_lo == 0 || b_hi == 0 || (b_lo < 0) != (b_hi < 0)) throw DomainError("double_tangency: b bracket must be one-signed");
  DoubleTangency r;
  r.words = words;
  double guess = solve_mu_zero(fam, words[0], b_lo);
  auto gap = [&](double b, double& a) {
    a = a_on_curve(fam, words, b, guess, 1e-6);
    return cycle_mu(fam, words, a, b, 1);
  };
  std::vector<double> bs, gs, as;
  for (int i = 0; i < scan; ++i) {
    double b = b_lo * std::pow(b_hi / b_lo, static_cast<double>(i) / (scan - 1));
    double a = NAN, g = NAN;
    try {
      g = gap(b, a);
      guess = a;
    } catch (const ConvergenceError&) {
    } catch (const DomainError&) {
    }
    bs.push_back(b);
    gs.push_back(g);
    as.push_back(a);
  }
  int hit = -1;
  for (int i = 0; i + 1 < scan; ++i)
    if (std::isfinite(gs[i]) && std::isfinite(gs[i + 1]) && (gs[i] < 0) != (gs[i + 1] < 0)) {
      hit = i;
      break;
    }
  if (hit < 0) {
    std::string diag = "double_tangency: no crossing of the tangency curves; samples (b, a, mu1):";
    for (int i = 0; i < scan; ++i)
      diag += " (" + std::to_string(bs[i]) + ", " + std::to_string(as[i]) + ", " + std::to_string(gs[i]) + ")";
    throw ConvergenceError(diag);
  }
  guess = as[hit];
  double a_cur = guess;
  double b0 = bracket_root(
      [&](double b) {
        double v = gap(b, a_cur);
        guess = a_cur;
        if (!std::isfinite(v)) throw ConvergenceError("double tangency: second defect undefined");
        return v;
      },
      std::min(bs[hit], bs[hit + 1]), std::max(bs[hit], bs[hit + 1]), 1e-14, 0.0, "double tangency");
  double a0 = a_on_curve(fam, words, b0, guess, 1e-9);
  // polish both defects jointly
  for (int it = 0; it < 8; ++it) {
    double m0 = cycle_mu(fam, words, a0, b0, 0), m1 = cycle_mu(fam, words, a0, b0, 1);
    if (std::fabs(m0) <= 1e-13 && std::fabs(m1) <= 1e-13) break;
    double ha = 1e-8, hb = 1e-6 * std::fabs(b0);
    double J[2][2];
    J[0][0] = (cycle_mu(fam, words, a0 + ha, b0, 0) - cycle_mu(fam, words, a0 - ha, b0, 0)) / (2 * ha);
    J[1][0] = (cycle_mu(fam, words, a0 + ha, b0, 1) - cycle_mu(fam, words, a0 - ha, b0, 1)) / (2 * ha);
    J[0][1] = (cycle_mu(fam, words, a0, b0 + hb, 0) - cycle_mu(fam, words, a0, b0 - hb, 0)) / (2 * hb);
    J[1][1] = (cycle_mu(fam, words, a0, b0 + hb, 1) - cycle_mu(fam, words, a0, b0 - hb, 1)) / (2 * hb);
    double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (!std::isfinite(det) || det == 0) break;
    a0 -= (J[1][1] * m0 - J[0][1] * m1) / det;
    b0 -= (-J[1][0] * m0 + J[0][0] * m1) / det;
  }
  r.a = a0;
  r.b = b0;
  r.mu0 = cycle_mu(fam, words, a0, b0, 0);
  r.mu1 = cycle_mu(fam, words, a0, b0, 1);
  if (!(std::fabs(r.mu0) <= 1e-9 && std::fabs(r.mu1) <= 1e-9))
    throw ConvergenceError("double_tangency: polish did not reach 1e-9");
  // derivative of mu1 - mu0 in b along mu0 = 0
  double hb = 1e-4 * std::fabs(b0);
  double ap = a_on_curve(fam, words, b0 + hb, a0, 1e-9), am = a_on_curve(fam, words, b0 - hb, a0, 1e-9);
  r.transversality = ((cycle_mu(fam, words, ap, b0 + hb, 1) - cycle_mu(fam, words, am, b0 - hb, 1))) / (2 * hb);
  return r;
}

std::pair<double, double> swallow_params(const HenonLikeMap& f, const std::vector<Word>& words) {
  auto t = tangency_cycle(f.xi ? normalize_xi(f) : f, words);
  auto sc = cycle_scales(t);
  return {t[0].q * t[0].mu / (sc.gamma[0] * sc.gamma[0]), t[1].q * t[1].mu / (sc.gamma[1] * sc.gamma[1])};
}

std::optional<std::pair<double, double>> swallow_parameter(const Family& fam, const std::vector<Word>& words,
                                                           const DoubleTangency& p0, double abar0, double abar1,
                                                           const double jac_inv[2][2]) {
  double a = p0.a, b = p0.b;
  for (int it = 0; it < 12; ++it) {
    std::pair<double, double> v;
    try {
      v = swallow_params(fam(a, b), words);
    } catch (const DomainError&) {
      return std::nullopt;
    } catch (const ConvergenceError&) {
      return std::nullopt;
    }
    double r0 = abar0 - v.first, r1 = abar1 - v.second;
    if (std::fabs(r0) <= 1e-6 && std::fabs(r1) <= 1e-6) return std::make_pair(a, b);
    a += jac_inv[0][0] * r0 + jac_inv[0][1] * r1;
    b += jac_inv[1][0] * r0 + jac_inv[1][1] * r1;
    if (!std::isfinite(a) || !std::isfinite(b) || (b < 0) != (p0.b < 0)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace henlab
