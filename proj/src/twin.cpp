#include <algorithm>
#include <cmath>
#include <limits>

#include "henlab/errors.hpp"
#include "henlab/renorm.hpp"
#include "henlab/roots.hpp"

namespace henlab {

Word twin_word(int k, int j, int box_sign) {
  Word w = c_word(k);
  w.push_back(Symbol{box_sign < 0 ? Sym::BoxMinus : Sym::BoxPlus, j});
  w.push_back(Symbol{Sym::BoxMinus, 0});
  return w;
}

// measured: the two tangency curves cross only with the minus box for b > 0
int twin_box_sign(double b) { return b > 0 ? -1 : 1; }

int choose_twin_k(const Family& fam, int j, double b_hat, int k_max) {
  for (int i = 1; i <= k_max; ++i) {
    try {
      double a = solve_mu_zero(fam, c_word(i), b_hat);
      double sigma = tangency_data(fam(a, b_hat), c_word(i)).sigma;
      if (std::fabs(sigma) <= std::fabs(b_hat) / eta_gap(j, a)) return i;
    } catch (const DomainError&) {
    } catch (const ConvergenceError&) {
    }
  }
  throw DomainError("choose_twin_k: no k with sigma_k <= b_hat / eta_j up to k_max");
}

namespace {

double single_mu(const Family& fam, const Word& w, double a, double b) {
  return tangency_data(fam(a, b), w).mu;
}

}  // namespace

TwinResult twin_find(const Family& fam, const TwinConfig& cfg) {
  TwinResult r;
  r.j = cfg.j;
  r.k = cfg.k > 0 ? cfg.k : choose_twin_k(fam, cfg.j, cfg.b_hat);
  r.word_minus = c_word(r.k);
  r.word_plus = twin_word(r.k, cfg.j, twin_box_sign(cfg.b_lo));
  const Word& wm = r.word_minus;
  const Word& wp = r.word_plus;

  auto gap = [&](double b) { return solve_mu_zero(fam, wm, b) - solve_mu_zero(fam, wp, b); };
  const int scan = 16;
  double pb = NAN, pg = NAN, lo = NAN, hi = NAN;
  std::string diag;
  for (int i = 0; i < scan; ++i) {
    double b = cfg.b_lo * std::pow(cfg.b_hi / cfg.b_lo, static_cast<double>(i) / (scan - 1));
    double g = NAN;
    try {
      g = gap(b);
    } catch (const ConvergenceError&) {
    } catch (const DomainError&) {
    }
    diag += " (" + std::to_string(b) + ", " + std::to_string(g) + ")";
    if (std::isfinite(g) && std::isfinite(pg) && (g < 0) != (pg < 0)) {
      lo = pb;
      hi = b;
      break;
    }
    if (std::isfinite(g)) {
      pb = b;
      pg = g;
    }
  }
  if (!std::isfinite(lo)) throw ConvergenceError("twin_find: tangency curves do not cross; samples (b, gap):" + diag);
  double b0 = bracket_root(gap, std::min(lo, hi), std::max(lo, hi), 1e-13, 0.0, "twin_find");
  double a0 = solve_mu_zero(fam, wm, b0);

  for (int it = 0; it < 8; ++it) {
    double m0 = single_mu(fam, wm, a0, b0), m1 = single_mu(fam, wp, a0, b0);
    if (std::fabs(m0) <= 1e-14 && std::fabs(m1) <= 1e-14) break;
    double ha = 1e-9, hb = 1e-6 * std::fabs(b0);
    double J00 = (single_mu(fam, wm, a0 + ha, b0) - single_mu(fam, wm, a0 - ha, b0)) / (2 * ha);
    double J10 = (single_mu(fam, wp, a0 + ha, b0) - single_mu(fam, wp, a0 - ha, b0)) / (2 * ha);
    double J01 = (single_mu(fam, wm, a0, b0 + hb) - single_mu(fam, wm, a0, b0 - hb)) / (2 * hb);
    double J11 = (single_mu(fam, wp, a0, b0 + hb) - single_mu(fam, wp, a0, b0 - hb)) / (2 * hb);
    double det = J00 * J11 - J01 * J10;
    if (!std::isfinite(det) || det == 0) break;
    double da = (J11 * m0 - J01 * m1) / det, db = (-J10 * m0 + J00 * m1) / det;
    a0 -= da;
    b0 -= db;
    if (std::fabs(da) <= 1e-16 && std::fabs(db) <= 1e-16 * std::fabs(b0)) break;
  }
  r.a0 = a0;
  r.b0 = b0;
  r.mu = single_mu(fam, wm, a0, b0);
  r.mu_plus = single_mu(fam, wp, a0, b0);
  if (!(std::fabs(r.mu) <= 1e-9 && std::fabs(r.mu_plus) <= 1e-9))
    throw ConvergenceError("twin_find: polish did not reach 1e-9");
  r.eta = eta_gap(cfg.j, a0);

  // D: |abar_+| <= 3 along b = b0
  auto abar_plus = [&](double a) { return renorm_abar(fam(a, b0), wp); };
  auto tp = tangency_data(fam(a0, b0), wp);
  double scale = tp.sigma * tp.sigma / tp.q;
  auto solve_plus = [&](double target) {
    double far = a0 + 2 * target * scale;
    return bracket_root([&](double a) { return abar_plus(a) - target; }, std::min(a0, far), std::max(a0, far), 1e-15,
                        0.0, "twin_find");
  };
  double d1 = solve_plus(3.0), d2 = solve_plus(-3.0);
  double dlo = std::min(d1, d2), dhi = std::max(d1, d2);
  for (int i = 0; i < cfg.samples; ++i) {
    double a = dlo + (dhi - dlo) * i / std::max(1, cfg.samples - 1);
    auto f = fam(a, b0);
    auto rm = renormalize(f, wm, 2.5, 0), rp = renormalize(f, wp, 2.5, 0);
    r.D_a.push_back(a);
    r.P_minus.push_back({rm.abar, rm.bbar});
    r.P_plus.push_back({rp.abar, rp.bbar});
  }
  r.a_selected = solve_plus(cfg.a_plus);
  auto f = fam(r.a_selected, b0);
  auto rm = renormalize(f, wm, 2.5, 0), rp = renormalize(f, wp, 2.5, 0);
  r.a_minus = rm.abar;

  std::vector<Vec2> seeds;
  for (int i = 0; i < 9; ++i)
    for (int k = 0; k < 9; ++k) seeds.push_back({-1.6 + 3.2 * i / 8, -1.6 + 3.2 * k / 8});
  for (const auto* rd : {&rm, &rp})
    for (double X : {-0.6, -0.3, 0.0, 0.3, 0.6}) {
      try {
        seeds.push_back(rd->chart(Vec2{X, 0.0}));
      } catch (const DomainError&) {
      }
    }
  r.attractors = find_attractors(f, seeds, cfg.max_period);
  r.predicted_periods = {rm.n + 1, rp.n + 1};
  return r;
}

ConeExpansionReport certify_cone_expansion(const Family& fam, const TwinResult& twin, int grid) {
  ConeExpansionReport rep;
  rep.eta = twin.eta;
  const double eta2 = twin.eta * twin.eta;
  auto f = fam(twin.a_selected, twin.b0);
  rep.min_expansion = HUGE_VAL;
  for (const Word* w : {&twin.word_minus, &twin.word_plus}) {
    RenormData rd = renormalize(f, *w, 2.5, 0);
    const HenonLikeMap& g = rd.map;
    double disc = 1 - 4 * rd.abar;
    if (disc < 0) continue;
    double beta = 0.5 * (1 + std::sqrt(disc));
    // K3: beyond the beta fixed point of the renormalized quadratic
    for (int i = 0; i < grid; ++i) {
      double mag = beta * (1.02 + 0.5 * i / std::max(1, grid - 1));
      for (double X : {-mag, mag}) {
        try {
          Vec2 z = rd.chart(Vec2{X, 0.0});
          double slope0 = eval_cross(rd.chart.chain, z.x, rd.chart.entry, true).Bx;
          for (double side : {-1.0, 1.0}) {
            Vec2 v{1.0, slope0 + side * eta2};
            double n0 = std::hypot(v.x, v.y);
            Vec2 p = z;
            for (int t = 0; t <= rd.n; ++t) {
              auto e = g.evaluate(p);
              v = Vec2{e.jac[0][0] * v.x + e.jac[0][1] * v.y, e.jac[1][0] * v.x + e.jac[1][1] * v.y};
              p = e.image;
            }
            double slope1 = eval_cross(rd.chart.chain, p.x, rd.chart.entry, true).Bx;
            double u1 = v.x, v1 = v.y - slope1 * v.x;
            ++rep.k3_samples;
            if (std::fabs(v1) > eta2 * std::fabs(u1)) ++rep.k3_violations;
            rep.min_expansion = std::min(rep.min_expansion, std::hypot(v.x, v.y) / n0);
          }
        } catch (const DomainError&) {
        } catch (const ConvergenceError&) {
        }
      }
    }
  }
  // K1: blocks of the unrenormalized dynamics staying outside |x| < eta
  std::vector<double> Ns, Gs;
  for (int N = 4; N <= 32; N += 4) {
    double worst = HUGE_VAL;
    for (int i = 0; i < 401; ++i) {
      Vec2 p{-1.9 + 3.8 * i / 400, 0.0};
      p.y = p.x;
      Vec2 v{1.0, 0.0};
      double lg = 0;
      bool ok = true;
      for (int t = 0; t < N && ok; ++t) {
        if (std::fabs(p.x) < twin.eta || std::fabs(p.x) > 3) {
          ok = false;
          break;
        }
        auto e = f.evaluate(p);
        v = Vec2{e.jac[0][0] * v.x + e.jac[0][1] * v.y, e.jac[1][0] * v.x + e.jac[1][1] * v.y};
        double nv = std::hypot(v.x, v.y);
        lg += std::log(nv);
        v = Vec2{v.x / nv, v.y / nv};
        p = e.image;
      }
      if (ok) {
        worst = std::min(worst, lg);
        ++rep.k1_samples;
      }
    }
    if (std::isfinite(worst)) {
      Ns.push_back(N);
      Gs.push_back(worst);
    }
  }
  if (Ns.size() >= 2) {
    double mn = 0, mg = 0;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      mn += Ns[i];
      mg += Gs[i];
    }
    mn /= Ns.size();
    mg /= Ns.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      sxy += (Ns[i] - mn) * (Gs[i] - mg);
      sxx += (Ns[i] - mn) * (Ns[i] - mn);
    }
    double slope = sxy / sxx;
    rep.kappa = std::exp(-slope);
    rep.log_C = mg - slope * mn;
  }
  if (rep.k3_samples == 0) rep.min_expansion = 0;
  return rep;
}

}  // namespace henlab
