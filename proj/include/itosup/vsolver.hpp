#pragma once

#include "itosup/bounds.hpp"

namespace itosup {

// Solution of the implicit equation defining the optimal auxiliary
// function v(x). residual is the absolute imbalance of the rearranged
// monotone form of the equation at the returned v.
struct VSolution {
    double x;
    double v;
    double residual;
};

// alpha in [0,1): unique v >= 1 with
//   sqrt(v) (v^{(1-alpha)/2} - 1) = x sqrt(c) (1-alpha) / sigma^{2-alpha}
VSolution solve_v_lt1(double x, const BoundParams& p);

// alpha = 1: unique v >= 1 with  sqrt(v) ln v = 2 sqrt(c) x / sigma
VSolution solve_v_eq1(double x, const BoundParams& p);

// alpha = 0 closed form  v = (sigma + sqrt(sigma^2 + 4 sqrt(c) x))^2 / (4 sigma^2)
VSolution closed_form_v_alpha0(double x, const BoundParams& p);

// wraps the appropriate solver for p.alpha as a VFunction (alpha in [0,1]);
// rejects alpha < 0, whose balance equation is not one of the two above
VFunction make_v_function(const BoundParams& p);

} // namespace itosup
