#pragma once

#include "ocolab/feasible_set.hpp"
#include "ocolab/vec.hpp"

namespace ocolab {

// Loss families the experiments exercise: linear <g, x>, the alpha-strongly
// convex quadratic (alpha/2)||x - theta||^2, and the exp-concave squared
// linear (<a, x> - b)^2.
struct LossFn {
  enum class Kind { Linear, Quadratic, SquaredLinear };

  static LossFn linear(Vec g);
  static LossFn quadratic(Vec theta, double alpha);
  static LossFn squared_linear(Vec a, double b);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  // Upper bound on sup_K ||grad f||_2 (closed form per kind).
  double lipschitz_bound(const FeasibleSet& K) const;

  Kind kind;
  int dim = 0;
  Vec g;        // Linear
  Vec theta;    // Quadratic
  double alpha = 0.0;
  Vec a;        // SquaredLinear
  double b = 0.0;
};

}  // namespace ocolab
