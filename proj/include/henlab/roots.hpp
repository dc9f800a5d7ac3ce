#pragma once
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "henlab/errors.hpp"

namespace henlab {

inline constexpr int kRootMaxIter = 200;

// Bracketed root of f on [lo, hi]; stops when the bracket is below
// rel*max(|lo|,|hi|) + abs_tol.
template <class F>
double bracket_root(F&& f, double lo, double hi, double rel = 1e-12, double abs_tol = 1e-15,
                    const char* what = "root") {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0))
    throw ConvergenceError(std::string(what) + ": bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "] does not change sign");
  auto tol = [rel, abs_tol](double u, double v) {
    return std::fabs(u - v) <= rel * std::fmax(std::fabs(u), std::fabs(v)) + abs_tol;
  };
  std::uintmax_t iters = kRootMaxIter;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  if (iters >= static_cast<std::uintmax_t>(kRootMaxIter))
    throw ConvergenceError(std::string(what) + ": iteration cap reached");
  return 0.5 * (r.first + r.second);
}

// Safeguarded Newton: fd returns std::pair{f, f'}; the bracket must change sign.
template <class FD>
double newton_root(FD&& fd, double guess, double lo, double hi, const char* what = "newton") {
  double flo = fd(lo).first, fhi = fd(hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0))
    throw ConvergenceError(std::string(what) + ": bracket does not change sign");
  std::uintmax_t iters = kRootMaxIter;
  double r = boost::math::tools::newton_raphson_iterate(
      [&](double x) {
        auto v = fd(x);
        return std::make_tuple(v.first, v.second);
      },
      guess, lo, hi, 42, iters);
  if (iters >= static_cast<std::uintmax_t>(kRootMaxIter))
    throw ConvergenceError(std::string(what) + ": iteration cap reached");
  return r;
}

}  // namespace henlab
