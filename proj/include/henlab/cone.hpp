#pragma once
#include <cmath>

#include "henlab/errors.hpp"

namespace henlab {

// horizontal cone |v_y| <= c_h |v_x|, vertical cone |v_x| <= c_v |v_y|
struct ConeSpec {
  double eta = 0.5, c_h = 2.0, c_v = 0.25, c = 1 / std::sqrt(2.0);

  static ConeSpec from_eta(double eta) {
    if (!(eta > 0)) throw DomainError("cone: eta must be positive");
    ConeSpec s;
    s.eta = eta;
    s.c_h = 1 / eta;
    s.c_v = eta / 2;
    s.c = std::sqrt(s.c_h * s.c_v);
    return s;
  }
};

}  // namespace henlab
