#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "henlab/cone.hpp"
#include "henlab/henon.hpp"
#include "henlab/maps1d.hpp"
#include "henlab/word.hpp"

namespace henlab {

// one order-1 factor: x_i = A(x_{i+1}, y_i), y_{i+1} = B(x_{i+1}, y_i)
struct FactorJet {
  double A = 0, B = 0, Ax = 0, Ay = 0, Bx = 0, By = 0;
};

using FactorFn = std::function<FactorJet(int i, double x_next, double y_this)>;

struct ChainSolution {
  std::vector<double> X, Y;  // X[0..n], Y[0..n]
  std::vector<FactorJet> jets;
  int sweeps = 0;
  double change = 0;
};

// Fixed-point sweeps of the chain system. X_seed/Y_seed have n+1 entries;
// X[n] and Y[0] are overwritten by x_end and y_start.
ChainSolution solve_chain(int n, const FactorFn& fn, double x_end, double y_start, std::vector<double> X_seed,
                          std::vector<double> Y_seed, double tol = 1e-12, int max_sweeps = 500);

struct ChainPartials {
  double Ax = 1, Ay = 0, Bx = 0, By = 1;
};

// Exact solution of the linear derivative chain
//   DX_i = Ax_i DX_{i+1} + Ay_i DY_i,  DY_{i+1} = Bx_i DX_{i+1} + By_i DY_i
// with DX_n = (1,0), DY_0 = (0,1), by forward/backward elimination.
ChainPartials chain_partials(const std::vector<FactorJet>& jets);

struct CrossMapChain {
  HenonLikeMap map;
  Word word;
  Piece1D piece;  // 1-D piece at the same a (b = 0 skeleton)
  std::vector<int> signs;
  double tol = 1e-12;
  int max_sweeps = 500;

  int order() const { return static_cast<int>(signs.size()); }
  FactorJet factor(int i, double x_next, double y_this) const;
};

CrossMapChain factorize_chain(const Word& word, const HenonLikeMap& map);

struct CrossMapEval {
  double A = 0, B = 0;
  double Ax = 0, Ay = 0, Bx = 0, By = 0;
  std::vector<double> X, Y;
  double residual = 0;  // max one-step defect |f(X_i,Y_i) - (X_{i+1},Y_{i+1})|
  int sweeps = 0;
};

CrossMapEval eval_cross(const CrossMapChain& chain, double x1, double y0, bool derivatives = true);

struct CrossDerivatives {
  double Ax, Ay, Bx, By;
};
CrossDerivatives eval_cross_derivatives(const CrossMapChain& chain, double x1, double y0);

struct ShootResult {
  double A = 0, B = 0;
  int iterations = 0;
};

// Itinerary-guided bisection on x0 in [-3, 3]; independent of the chain solver.
ShootResult shoot_oracle(const CrossMapChain& chain, double x1, double y0, int max_order = 12);

struct HyperbolicityResult {
  bool ok = false;
  double margin = 0;  // 1 - worst left-hand side
  double worst_x1 = 0, worst_y0 = 0;
  int points = 0;
  int failures = 0;  // grid points where the chain could not be solved
};

struct HyperbolicityInput {
  double Ax, Ay, Bx, By;
};
// both inequalities at one point; returns the larger left-hand side
double hyperbolicity_lhs(const HyperbolicityInput& d, const ConeSpec& cone);

HyperbolicityResult hyperbolicity_check(const CrossMapChain& chain, const ConeSpec& cone, int grid = 33);

struct DistortionReport {
  double B0 = 0, B1 = 0;
  std::optional<double> Bm;  // empty when b = 0 anywhere in the sample
  double sum_formula_gap = 0;
  int probes = 0;
};

DistortionReport distortion_report(const Word& word, const Family& fam,
                                   const std::vector<std::pair<double, double>>& params, int probe_grid = 9);

}  // namespace henlab
