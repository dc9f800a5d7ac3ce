#pragma once
#include <optional>
#include <string>
#include <vector>

#include "henlab/cone.hpp"
#include "henlab/crossmap.hpp"
#include "henlab/henon.hpp"
#include "henlab/maps1d.hpp"
#include "henlab/word.hpp"

namespace henlab {

// d_yB / (b^m)^n: finite at b = 0, no underflow for long words
double unit_By(const CrossMapChain& chain, double x1, double y0);

// Tangency between the unstable curve of `chain` (exit x = c, entry y = entry)
// and the stable curve of `next` (exit x = c_next) after one step of the map.
struct TangencyData {
  double c = 0, entry = 0, c_next = 0;
  double sigma = 0;        // d_xA at (c, entry)
  double lambda = 0;       // d_yB at (c, entry), may underflow
  double lambda_unit = 0;  // lambda / (b^m)^n
  double mu = 0;           // defect at x = c
  double q = 0;            // half the second x-derivative of the defect
  double d = 0;            // det Df at z1 = (c, B(c, entry))
  CrossMapChain chain, next;

  double H(double x) const;  // B(c + x, entry)
  double V(double y) const;  // A_next(c_next, c + y)
  double defect(double x) const;        // g(c+x, H(x)) - V(x)
  double defect_slope(double x) const;  // d/dx of the defect, analytic chain partials
};

TangencyData tangency_data(const HenonLikeMap& f, const Word& word);
// cyclic tangencies i -> i+1 for a list of words (N = words.size())
std::vector<TangencyData> tangency_cycle(const HenonLikeMap& f, const std::vector<Word>& words);

// (X, Y) -> (c + u X, H(u X) + yscale Y), H from the piece ending at this chart
struct Chart {
  double c = 0, entry = 0, u = 0;
  double yscale_unit = 0;  // yscale / (b^m)^n
  double bmn = 0;          // (b^m)^n, 0 when it underflows
  CrossMapChain chain;

  double yscale() const { return yscale_unit * bmn; }
  Vec2 operator()(Vec2 XY) const;
  Vec2 inverse(Vec2 xy) const;
};

// chart_out^-1 o f^(n_out + 1) o chart_in; DomainError when the image leaves the piece
Vec2 renorm_step(const HenonLikeMap& f, const Chart& in, const Chart& out, Vec2 XY);

struct DeviationSample {
  double sup = 0;
  int samples = 0, skipped = 0;
};

struct RenormData {
  TangencyData tangency;
  HenonLikeMap map;
  int n = 0, M = 0;
  double abar = 0, bbar = 0;
  double bbarM = 0;        // signed det D f^(n+1) at z0, 0 when it underflows
  double log_abs_det = 0;  // log |det D f^(n+1)| along the solved orbit
  double R = 2.5;
  Chart chart;
  DeviationSample delta;

  Vec2 F(Vec2 XY) const { return renorm_step(map, chart, chart, XY); }
  Vec2 normal_form(Vec2 XY) const { return {XY.x * XY.x + abar - bbarM * XY.y, XY.x}; }
  double delta_star() const { return delta.sup; }
  double y_half_range() const;  // R / bbar^M, R when bbar = 0
};

RenormData renormalize(const HenonLikeMap& f, const Word& word, double R = 2.5, int grid = 33);

// abar only (tangency + sigma), used inside parameter searches
double renorm_abar(const HenonLikeMap& f, const Word& word);

double solve_mu_zero(const Family& fam, const Word& word, double b);

struct RenormWindow {
  double a_mu = 0, a_lo = 0, a_hi = 0;  // abar(a_lo) = -2, abar(a_hi) = 1/4
  double width() const { return a_hi - a_lo; }
  double midpoint() const { return 0.5 * (a_lo + a_hi); }
};
RenormWindow renorm_window(const Family& fam, const Word& word, double b);

// b = 0 oracle: interval of a around `inside` where the critical orbit of Q_a stays in
// `period` pairwise disjoint bands
std::pair<double, double> band_window_scan(double inside, double half_width, int period, int n_grid = 801);

struct MultiRenormData {
  int N = 0;
  HenonLikeMap map;
  std::vector<TangencyData> tangency;
  std::vector<double> sigma, lambda_unit, q, s, gamma, abar, bbar;
  std::vector<Chart> charts;
  std::vector<int> n;

  // chart_{i+1}^-1 o f^(n_{i+1}+1) o chart_i
  Vec2 F(int i, Vec2 XY) const;
  double gamma_defect() const;  // max_i |gamma_i^2 - gamma_{i+1} s_{i+1}| / gamma_i^2
};

MultiRenormData multi_renormalize(const HenonLikeMap& f, const std::vector<Word>& words);

// closed form of the geometric product for N = 2; general N by the infinite product
std::vector<double> gamma_chain(const std::vector<double>& s);

// Composite F_1 o F_0 against the swallow normal form after (x, y) -> (x, eps y)
struct SwallowComparison {
  double eps = 0, sup = 0;
  int samples = 0, skipped = 0;
};
SwallowComparison compare_swallow(const MultiRenormData& m, double half = 1.5, int grid = 31);

// Words of the swallow construction: c_k and c_k * s(sign) * bm0
std::vector<Word> swallow_words(int k, int sign);

struct DoubleTangency {
  double a = 0, b = 0;
  double mu0 = 0, mu1 = 0;
  double transversality = 0;  // d/db (mu1 - mu0) along the mu0 = 0 curve
  std::vector<Word> words;
};

// 2-D root of (mu_0, mu_1) = 0, b searched in [b_lo, b_hi] (same sign)
DoubleTangency double_tangency(const Family& fam, const std::vector<Word>& words, double b_lo, double b_hi,
                               int scan = 24);

// (abar_0, abar_1) at p
std::pair<double, double> swallow_params(const HenonLikeMap& f, const std::vector<Word>& words);

// p with (abar_0, abar_1)(p) = target, Newton from p0 with a fixed Jacobian
std::optional<std::pair<double, double>> swallow_parameter(const Family& fam, const std::vector<Word>& words,
                                                           const DoubleTangency& p0, double abar0, double abar1,
                                                           const double jac_inv[2][2]);

struct TwinConfig {
  int k = 0;  // 0: choose from sigma_k and eta_j at b_hat
  int j = 1;
  double b_hat = 2e-4;
  double b_lo = 2e-6, b_hi = 4e-4;  // signed bracket for b
  double a_plus = -0.2;
  int max_period = 40;
  int samples = 9;  // parameters sampled across D
};

struct TwinResult {
  int k = 0, j = 0;
  Word word_minus, word_plus;
  double b0 = 0, a0 = 0;
  double mu = 0, mu_plus = 0;
  double eta = 0;
  double a_minus = 0;                             // at the selected parameter
  std::vector<std::pair<double, double>> P_minus, P_plus;  // (abar, bbar) sampled over D
  std::vector<double> D_a;                        // a values of the samples (b = b0)
  double a_selected = 0;
  AttractorSearch attractors;
  std::vector<int> predicted_periods;
};

// words for the twin: c_k and c_k * box(j) * bm0 with the box sign picked per sign of b
Word twin_word(int k, int j, int box_sign);
int twin_box_sign(double b);
int choose_twin_k(const Family& fam, int j, double b_hat, int k_max = 12);

TwinResult twin_find(const Family& fam, const TwinConfig& cfg);

struct ConeExpansionReport {
  double min_expansion = 0;   // over K3 samples, |u1| / |u0|
  int k3_samples = 0, k3_violations = 0;
  double kappa = 0, log_C = 0;  // fitted on K1 blocks: log|Dv| ~ log C - N log kappa
  int k1_samples = 0;
  double eta = 0;
};

ConeExpansionReport certify_cone_expansion(const Family& fam, const TwinResult& twin, int grid = 21);

}  // namespace henlab
