#pragma once

#include <functional>
#include <memory>
#include <string>

#include "parakern/common.hpp"

namespace parakern {

/// A scalar coefficient of the operator, with the regularity metadata the
/// kernel bounds depend on. The Lipschitz/sup constants are exact for
/// hand-built fields and sampled estimates for parsed expressions.
struct CoefficientField {
  std::function<double(const Vec&, double)> eval;
  double lipschitz_x = 0.0;
  double sup_bound = 0.0;
  std::string source;  // pretty-printed expression, empty for native fields
  bool time_dependent = false;

  double operator()(const Vec& x, double t) const { return eval(x, t); }
};

CoefficientField constant_field(double v);

/// Parse the coefficient mini-language: variables x1..x3, t; literals;
/// + - * / ^; sin, cos, exp, sqrt, tanh; parentheses. Lipschitz and sup
/// constants are estimated by dense sampling of `box` x [t0,t1] (32^n x 32
/// grid, inflated by 10%) and are estimates, not certified bounds.
CoefficientField parse_coefficient(const std::string& expr,
                                   const Box& box = Box{},
                                   double t0 = 0.0, double t1 = 1.0);

/// Re-estimate lipschitz_x / sup_bound of an existing field by sampling.
void estimate_field_bounds(CoefficientField& f, const Box& box, double t0,
                           double t1);

}  // namespace parakern
