#pragma once
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "henlab/word.hpp"

namespace henlab {

inline double quad(double a, double x) { return x * x + a; }

struct QuadraticLadder {
  double a = 0, alpha = 0, beta = 0;
  double alpha0 = 0, alpha1 = 0, alpha2 = 0, alpha3 = 0, tilde_alpha2 = 0;
  // rungs whose radicand is negative are NaN with the flag cleared
  bool has_alpha1 = false, has_alpha2 = false, has_alpha3 = false, has_tilde = false;
  void check_full() const;  // LadderError if any rung is missing
};

QuadraticLadder ladder(double a);

struct SpecialParameters {
  double a1 = 0, a2 = 0;              // ladder equations a = -alpha1(a), a = -alpha2(a)
  double a1_orbit = 0, a2_orbit = 0;  // Q^3(0) = alpha and Q^4(0) = alpha
};

SpecialParameters special_parameters();

// a* in (a2, a1): Q^5(0) = 0 with itinerary (-,+,+,-) of 0's forward orbit.
double superstable_c1();

struct Piece1D {
  Word word;
  double lo = 0, hi = 0;
  int order = 0;
  std::vector<int> signs;  // sign of Q^i(midpoint), i < order
  double image_lo = 0, image_hi = 0;
  double width() const { return hi - lo; }
};

Piece1D elementary_piece(const Symbol& s, double a);
Piece1D star(const Piece1D& p, const Piece1D& q, double a);
Piece1D piece_1d(const Word& w, double a);

// half the square root of the gap |R_{c_{j+1}} \ R_{c_{j+2}}| at a
double eta_gap(int j, double a);

std::vector<int> itinerary(double a, double x, int n);

enum class SwallowTag { Escape, Wing, Body };
const char* tag_name(SwallowTag t);

struct SwallowClassification {
  SwallowTag tag = SwallowTag::Escape;
  int steps_ab = -1;  // composed steps until escape, -1 when bounded
  int steps_ba = -1;
};

// Q_ab = Q_b o Q_a, Q_ba = Q_a o Q_b, both from 0
SwallowClassification swallow_classify(double a, double b, int n_max = 2000, double r_esc = 10.0);

enum class SwallowCurve { C1, C2, C3 };

struct BoundaryPolyline {
  std::vector<std::pair<double, double>> points;  // (a, b)
  std::vector<double> failed;                     // sample parameters skipped
};

// C1/C3: parameter is b; C2: parameter is a.
BoundaryPolyline swallow_boundary(SwallowCurve curve, double lo, double hi, int n_samples);

struct LyapValue {
  enum class Kind { Finite, MinusInf, Escape } kind = Kind::Finite;
  double value = 0;
  bool finite() const { return kind == Kind::Finite; }
};

struct ComposedLyap {
  LyapValue ab, ba;
};

// Q_ba orbit from b with DQ_ba(x) = 4x Q_b(x); Q_ab orbit from a with DQ_ab(x) = 4x Q_a(x).
ComposedLyap lyap_composed(double a, double b, int n, double r_esc = 10.0);

}  // namespace henlab
