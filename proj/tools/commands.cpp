#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "henlab/atlas.hpp"
#include "henlab/config.hpp"
#include "henlab/crossmap.hpp"
#include "henlab/errors.hpp"
#include "henlab/maps1d.hpp"
#include "henlab/renorm.hpp"
#include "henlab/strips.hpp"

namespace henlab {

namespace {

void put(std::ostream& out, const char* fmt, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out << buf;
}

// string-valued options of one subcommand; the map doubles as the effective config
struct Sub {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> vals;
  std::function<void(Sub&, std::ostream&)> action;

  void opt(const std::string& name, const std::string& def, const std::string& help) {
    vals[name] = def;
    app->add_option("--" + name, vals[name], help)->capture_default_str();
  }
  const std::string& s(const std::string& k) const { return vals.at(k); }
  double d(const std::string& k) const { return parse_real(vals.at(k), k); }
  int i(const std::string& k) const { return parse_int(vals.at(k), k); }
  Word w(const std::string& k) const { return parse_word(vals.at(k)); }
  bool given(const std::string& k) const { return app->get_option("--" + k)->count() > 0; }
};

void write_raster(const Raster& r, const std::string& format, const std::string& path, std::ostream& out) {
  if (path == "-") {
    if (format == "ppm")
      write_ppm(r, out);
    else if (format == "csv")
      write_csv(r, out);
    else
      throw ConfigError("unknown format '" + format + "'");
    return;
  }
  emit(r, format, path);
}

Region region_of(const Sub& c, const std::string& a_key, const std::string& b_key) {
  auto a = parse_range(c.s(a_key)), b = parse_range(c.s(b_key));
  return {a.first, a.second, b.first, b.second};
}

void cmd_special(Sub&, std::ostream& out) {
  auto sp = special_parameters();
  put(out, "a1 = %.12f  (orbit identity %.12f)\n", sp.a1, sp.a1_orbit);
  put(out, "a2 = %.12f  (orbit identity %.12f)\n", sp.a2, sp.a2_orbit);
  put(out, "a* = %.12f  (superstable, itinerary -,+,+,-)\n", superstable_c1());
  out << "a,alpha,beta,alpha0,alpha1,alpha2,alpha3,tilde_alpha2\n";
  for (double a : {sp.a1, sp.a2, -2.0}) {
    auto L = ladder(a);
    put(out, "%.12f,%.12f,%.12f,%.12f,%.12f,%.12f,%.12f,%.12f\n", a, L.alpha, L.beta, L.alpha0, L.alpha1, L.alpha2,
        L.alpha3, L.tilde_alpha2);
  }
}

void cmd_swallow(Sub& c, std::ostream& out) {
  KernelParams p;
  p.n_escape = c.i("n");
  p.n_lyap = c.i("n-lyap");
  Kernel k = parse_kernel(c.s("kernel"));
  if (k != Kernel::SwallowEscape && k != Kernel::SwallowLyap) throw ConfigError("swallow: kernel must be swallow-*");
  auto g = parse_grid(c.s("grid"));
  auto r = sweep(region_of(c, "a-range", "b-range"), k, g.first, g.second, p, c.i("workers"));
  write_raster(r, c.s("format"), c.s("out"), out);
}

void cmd_henon_atlas(Sub& c, std::ostream& out) {
  KernelParams p;
  p.map = c.s("map");
  p.n_escape = c.i("n");
  p.n_lyap = c.i("n-lyap");
  p.word = c.w("word");
  Kernel k = parse_kernel(c.s("kernel"));
  if (k != Kernel::HenonEscape && k != Kernel::HenonLyap && k != Kernel::RenormStrip)
    throw ConfigError("henon-atlas: kernel must be henon-escape, henon-lyap or renorm-strip");
  make_map(p.map, 0, 0);  // validates the name
  auto g = parse_grid(c.s("grid"));
  auto r = sweep(region_of(c, "a-range", "b-range"), k, g.first, g.second, p, c.i("workers"));
  write_raster(r, c.s("format"), c.s("out"), out);
}

void cmd_crossmap(Sub& c, std::ostream& out) {
  auto chain = factorize_chain(c.w("word"), make_map(c.s("map"), c.d("a"), c.d("b")));
  auto e = eval_cross(chain, c.d("x1"), c.d("y0"), true);
  put(out, "word = %s\norder = %d\n", format_word(chain.word).c_str(), chain.order());
  put(out, "A = %.15g\nB = %.15g\n", e.A, e.B);
  put(out, "Ax = %.15g\nAy = %.15g\nBx = %.15g\nBy = %.15g\n", e.Ax, e.Ay, e.Bx, e.By);
  put(out, "residual = %.3g\nsweeps = %d\n", e.residual, e.sweeps);
}

void cmd_piece(Sub& c, std::ostream& out) {
  Word w = c.w("word");
  double a = c.d("a"), b = c.d("b");
  auto p1 = piece_1d(w, a);
  put(out, "word = %s\norder = %d\n", format_word(w).c_str(), p1.order);
  put(out, "segment = [%.15g, %.15g]\nimage = [%.15g, %.15g]\n", p1.lo, p1.hi, p1.image_lo, p1.image_hi);
  if (b == 0) return;
  auto f = make_map(c.s("map"), a, b);
  auto lat = stable_leaf_lattice(f);
  auto p2 = build_piece_2d(w, f, lat, ConeSpec::from_eta(c.d("eta")));
  const TameBox& d = p2.domain;
  out << "y,x_left,x_right\n";
  const int n = c.i("samples");
  for (int i = 0; i < n; ++i) {
    double y = d.y_lo() + (d.y_hi() - d.y_lo()) * i / (n - 1);
    put(out, "%.15g,%.15g,%.15g\n", y, d.phi_minus(y), d.phi_plus(y));
  }
}

void cmd_renorm(Sub& c, std::ostream& out) {
  Word w = c.w("word");
  double b = c.d("b");
  auto fam = family(c.s("map"));
  double a = c.s("a") == "auto" ? solve_mu_zero(fam, w, b) : c.d("a");
  auto r = renormalize(fam(a, b), w, c.d("R"), c.i("grid"));
  const auto& t = r.tangency;
  put(out, "word = %s\na = %.17g\nb = %.17g\nn = %d\nM = %d\n", format_word(w).c_str(), a, b, r.n, r.M);
  put(out, "c = %.17g\nsigma = %.17g\nlambda = %.17g\nmu = %.17g\nq = %.17g\nd = %.17g\n", t.c, t.sigma, t.lambda,
      t.mu, t.q, t.d);
  put(out, "abar = %.17g\nbbar = %.17g\nbbar^M = %.17g\n", r.abar, r.bbar, r.bbarM);
  put(out, "delta_star = %.6g\nsamples = %d\nskipped = %d\n", r.delta_star(), r.delta.samples, r.delta.skipped);
  if (!c.s("probe-out").empty()) {
    std::ofstream o(c.s("probe-out"));
    if (!o) throw ConfigError("cannot open '" + c.s("probe-out") + "'");
    o << "X,Y,FX,FY,NX,NY\n";
    const int g = 17;
    double yh = r.y_half_range();
    for (int i = 0; i < g; ++i)
      for (int k = 0; k < g; ++k) {
        Vec2 XY{-r.R + 2 * r.R * i / (g - 1), -yh + 2 * yh * k / (g - 1)};
        try {
          Vec2 F = r.F(XY), N = r.normal_form(XY);
          put(o, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", XY.x, XY.y, F.x, F.y, N.x, N.y);
        } catch (const DomainError&) {
        }
      }
  }
}

void cmd_window(Sub& c, std::ostream& out) {
  Word w = c.w("word");
  double b = c.d("b");
  auto win = renorm_window(family(c.s("map")), w, b);
  out << "word,b,a_mu,a_lo,a_hi,width,midpoint\n";
  put(out, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", format_word(w).c_str(), b, win.a_mu, win.a_lo, win.a_hi,
      win.width(), win.midpoint());
  if (c.s("oracle") == "1") {
    if (b != 0) throw ConfigError("renorm-window: the band oracle is a b = 0 check");
    auto band = band_window_scan(win.midpoint(), 1.5 * win.width(), piece_1d(w, win.a_mu).order + 1);
    put(out, "# band oracle: [%.12g, %.12g], endpoint errors %.3g %.3g of the width\n", band.first, band.second,
        std::fabs(band.first - win.a_lo) / win.width(), std::fabs(band.second - win.a_hi) / win.width());
  }
}

void add_twin_opts(Sub& s) {
  s.opt("map", "standard", "map family");
  s.opt("j", "1", "gap index of the second piece");
  s.opt("k", "0", "c_k index (0 chooses it from sigma_k and eta_j)");
  s.opt("b-hat", "2e-4", "scale b_hat");
  s.opt("b-range", "auto", "b bracket lo:hi (auto: b_hat*1e-2 : b_hat*2)");
  s.opt("a-plus", "-0.2", "abar of the second piece at the selected parameter");
  s.opt("max-period", "40", "longest period searched");
  s.opt("samples", "9", "parameters sampled across D");
}

TwinResult run_twin(const Sub& c, TwinConfig& cfg) {
  cfg.j = c.i("j");
  cfg.k = c.i("k");
  cfg.b_hat = c.d("b-hat");
  if (c.s("b-range") == "auto") {
    cfg.b_lo = cfg.b_hat * 1e-2;
    cfg.b_hi = cfg.b_hat * 2;
  } else {
    auto r = parse_range(c.s("b-range"));
    cfg.b_lo = r.first;
    cfg.b_hi = r.second;
  }
  cfg.a_plus = c.d("a-plus");
  cfg.max_period = c.i("max-period");
  cfg.samples = c.i("samples");
  return twin_find(family(c.s("map")), cfg);
}

void cmd_twin(Sub& c, std::ostream& out) {
  TwinConfig cfg;
  auto r = run_twin(c, cfg);
  put(out, "k = %d\nj = %d\nwords = %s | %s\n", r.k, r.j, format_word(r.word_minus).c_str(),
      format_word(r.word_plus).c_str());
  put(out, "b0 = %.17g\na0 = %.17g\nmu = %.3g\nmu' = %.3g\neta_j = %.6g\n", r.b0, r.a0, r.mu, r.mu_plus, r.eta);
  put(out, "b0 bracket = [%.3g, %.3g]\n", cfg.b_hat * std::pow(r.eta, 1.5), cfg.b_hat * std::sqrt(r.eta));
  put(out, "a_selected = %.17g\na_minus = %.6g\n", r.a_selected, r.a_minus);
  out << "a,abar_minus,bbar_minus,abar_plus,bbar_plus\n";
  for (std::size_t i = 0; i < r.D_a.size(); ++i)
    put(out, "%.17g,%.9g,%.9g,%.9g,%.9g\n", r.D_a[i], r.P_minus[i].first, r.P_minus[i].second, r.P_plus[i].first,
        r.P_plus[i].second);
  put(out, "predicted periods = %d %d\n", r.predicted_periods[0], r.predicted_periods[1]);
  put(out, "attracting cycles = %zu (escaped seeds %d, unresolved %d)\n", r.attractors.cycles.size(),
      r.attractors.escaped, r.attractors.unresolved);
  for (const auto& cy : r.attractors.cycles)
    put(out, "  period %d  spectral radius %.6g  point (%.12g, %.12g)\n", cy.period, cy.spectral_radius,
        cy.points[0].x, cy.points[0].y);
}

void cmd_certify(Sub& c, std::ostream& out) {
  TwinConfig cfg;
  auto r = run_twin(c, cfg);
  auto rep = certify_cone_expansion(family(c.s("map")), r, c.i("grid"));
  put(out, "parameter = (%.17g, %.17g)\neta = %.6g\n", r.a_selected, r.b0, rep.eta);
  put(out, "K3 samples = %d\nK3 cone violations = %d\nmin expansion = %.6g\n", rep.k3_samples, rep.k3_violations,
      rep.min_expansion);
  put(out, "K1 samples = %d\nkappa = %.6g\nlog C = %.6g\n", rep.k1_samples, rep.kappa, rep.log_C);
}

void cmd_embed(Sub& c, std::ostream& out) {
  auto br = parse_range(c.s("b-range"));
  auto e = std::make_shared<EmbedSetup>(embed_setup(c.s("map"), c.i("k"), br.first, br.second));
  e->returns = c.i("returns");
  KernelParams p;
  p.embed = e;
  p.n_escape = c.i("n");
  auto g = parse_grid(c.s("grid"));
  auto r = sweep(region_of(c, "abar0-range", "abar1-range"), Kernel::EmbedCompare, g.first, g.second, p,
                 c.i("workers"));
  auto st = compare_stats(r);
  std::ostream& rep = c.s("out") == "-" ? std::cerr : out;
  put(rep, "double tangency a = %.17g b = %.17g\n", e->p0.a, e->p0.b);
  put(rep, "words = %s | %s\n", format_word(e->words[0]).c_str(), format_word(e->words[1]).c_str());
  put(rep, "agree = %d\ndisagree = %d\nunclassified = %d\nagreement = %.4f\n", st.agree, st.disagree, st.errors,
      st.fraction());
  if (!c.s("out").empty()) write_raster(r, c.s("format"), c.s("out"), out);
}

void cmd_attractors(Sub& c, std::ostream& out) {
  auto f = make_map(c.s("map"), c.d("a"), c.d("b"));
  auto g = parse_grid(c.s("seeds"));
  auto rg = parse_range(c.s("range"));
  std::vector<Vec2> seeds;
  for (int i = 0; i < g.first; ++i)
    for (int k = 0; k < g.second; ++k)
      seeds.push_back({rg.first + (rg.second - rg.first) * i / (g.first - 1),
                       rg.first + (rg.second - rg.first) * k / (g.second - 1)});
  auto r = find_attractors(f, seeds, c.i("max-period"));
  put(out, "attracting cycles = %zu\nescaped seeds = %d\nunresolved seeds = %d\n", r.cycles.size(), r.escaped,
      r.unresolved);
  for (const auto& cy : r.cycles)
    put(out, "  period %d  spectral radius %.6g  point (%.12g, %.12g)\n", cy.period, cy.spectral_radius,
        cy.points[0].x, cy.points[0].y);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Henon-like maps: pieces, cross maps, renormalization and parameter atlases", "henlab"};
  app.require_subcommand(1);
  std::string config_path;
  bool dump = false;
  app.add_option("--config", config_path, "key=value file; flags override it")->capture_default_str();
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  std::vector<std::unique_ptr<Sub>> subs;
  auto sub = [&](const std::string& name, const std::string& help, auto action) {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, help);
    s->app->fallthrough();
    s->action = action;
    subs.push_back(std::move(s));
    return subs.back().get();
  };

  sub("special-params", "a1, a2, a* and ladder table", cmd_special);

  auto* sw = sub("swallow", "swallow raster of the composed quadratics", cmd_swallow);
  sw->opt("grid", "400x400", "raster size WxH");
  sw->opt("a-range", "-2.2:0.6", "a interval lo:hi");
  sw->opt("b-range", "-2.2:0.6", "b interval lo:hi");
  sw->opt("kernel", "swallow-escape", "swallow-escape or swallow-lyap");
  sw->opt("n", "2000", "escape iteration cap");
  sw->opt("n-lyap", "10000", "Lyapunov iterations");
  sw->opt("format", "ppm", "ppm or csv");
  sw->opt("out", "swallow.ppm", "output path, - for stdout");
  sw->opt("workers", "0", "worker threads, 0 = available parallelism");

  auto* ha = sub("henon-atlas", "parameter-plane raster of the Henon-like family", cmd_henon_atlas);
  ha->opt("grid", "400x400", "raster size WxH");
  ha->opt("a-range", "-2.2:0.6", "a interval lo:hi");
  ha->opt("b-range", "-0.6:0.6", "b interval lo:hi");
  ha->opt("kernel", "henon-lyap", "henon-lyap, henon-escape or renorm-strip");
  ha->opt("map", "standard", "map family");
  ha->opt("word", "c1", "piece word for renorm-strip");
  ha->opt("n", "2000", "escape iteration cap");
  ha->opt("n-lyap", "10000", "Lyapunov iterations");
  ha->opt("format", "ppm", "ppm or csv");
  ha->opt("out", "henon.ppm", "output path, - for stdout");
  ha->opt("workers", "0", "worker threads, 0 = available parallelism");

  auto* cm = sub("crossmap", "evaluate the cross map of a piece", cmd_crossmap);
  cm->opt("word", "s-", "piece word");
  cm->opt("a", "-2", "parameter a");
  cm->opt("b", "0", "parameter b");
  cm->opt("x1", "0", "exit x");
  cm->opt("y0", "0", "entry y");
  cm->opt("map", "standard", "map family");

  auto* pc = sub("piece", "1-D segment and 2-D domain of a piece", cmd_piece);
  pc->opt("word", "c1", "piece word");
  pc->opt("a", "-1.86", "parameter a");
  pc->opt("b", "0", "parameter b (0: segment only)");
  pc->opt("map", "standard", "map family");
  pc->opt("eta", "0.5", "cone parameter");
  pc->opt("samples", "9", "rows of the domain boundary table");

  auto* rn = sub("renorm", "renormalize at a tangency", cmd_renorm);
  rn->opt("word", "c1", "piece word");
  rn->opt("a", "auto", "parameter a, auto = tangency root");
  rn->opt("b", "0", "parameter b");
  rn->opt("map", "standard", "map family");
  rn->opt("R", "2.5", "sample window radius");
  rn->opt("grid", "33", "deviation sample grid per side");
  rn->opt("probe-out", "", "CSV of F and its normal form on a 17x17 grid");

  auto* rw = sub("renorm-window", "a-interval where abar spans [-2, 1/4]", cmd_window);
  rw->opt("word", "c1", "piece word");
  rw->opt("b", "0", "parameter b");
  rw->opt("map", "standard", "map family");
  rw->opt("oracle", "0", "1: compare with the banded-orbit scan (b = 0)");

  auto* tw = sub("twin", "two simultaneous renormalizations", cmd_twin);
  add_twin_opts(*tw);

  auto* es = sub("embed-swallow", "renormalized swallow prediction against direct orbits", cmd_embed);
  es->opt("k", "3", "c_k index");
  es->opt("b-range", "1.9e-4:8.6e-4", "b bracket of the double tangency");
  es->opt("map", "standard", "map family");
  es->opt("grid", "101x101", "raster size WxH");
  es->opt("abar0-range", "-2.1:0.4", "first renormalized parameter");
  es->opt("abar1-range", "-2.1:0.4", "second renormalized parameter");
  es->opt("returns", "200", "composite returns of the direct orbit");
  es->opt("n", "2000", "escape cap of the predicted classification");
  es->opt("format", "ppm", "ppm or csv");
  es->opt("out", "", "raster path, - for stdout, empty for none");
  es->opt("workers", "0", "worker threads, 0 = available parallelism");

  auto* at = sub("attractors", "attracting cycles from a grid of seeds", cmd_attractors);
  at->opt("a", "-1.4", "parameter a");
  at->opt("b", "0.3", "parameter b");
  at->opt("map", "standard", "map family");
  at->opt("seeds", "9x9", "seed grid");
  at->opt("range", "-1.6:1.6", "seed square side lo:hi");
  at->opt("max-period", "40", "longest period searched");

  auto* ce = sub("certify", "cone-expansion diagnostic at the twin parameter", cmd_certify);
  add_twin_opts(*ce);
  ce->opt("grid", "21", "K3 samples per side");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Sub* active = nullptr;
    for (auto& s : subs)
      if (s->app->parsed()) active = s.get();
    RunConfig file;
    if (!config_path.empty()) file = load_config(config_path);
    if (!file.subcommand.empty() && file.subcommand != active->app->get_name())
      throw ConfigError("config file is for '" + file.subcommand + "', not '" + active->app->get_name() + "'");
    for (const auto& [k, v] : file.values) {
      if (!active->vals.count(k)) throw ConfigError("unknown configuration key '" + k + "'");
      if (!active->given(k)) active->vals[k] = v;
    }
    if (dump) {
      RunConfig eff;
      eff.subcommand = active->app->get_name();
      eff.values = active->vals;
      out << eff.canonical();
      return 0;
    }
    active->action(*active, out);
    return 0;
  } catch (const ConvergenceError& e) {
    err << "henlab: convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "henlab: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "henlab: domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "henlab: error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace henlab
