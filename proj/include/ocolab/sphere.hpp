#pragma once

#include "ocolab/feasible_set.hpp"

namespace ocolab {

// Smallest sphere through the anchor u that encloses K with the anchor
// gradient pointing at its center. `enclosed == false` means the defining
// supremum diverges (flat boundary through u orthogonal to the gradient).
struct SphereFacing {
  bool enclosed = false;
  Vec center;
  double radius = 0.0;
};

struct SpherePrecondition : GeometryError {
  using GeometryError::GeometryError;
};

// Sampled estimate of sup_{x in K} ||x-u||^2 / (2 <g_hat, x-u>) plus local
// refinement; 4096 boundary angles in 2-D, 65536 random directions (and
// Nelder-Mead polish) above. Preconditions: u on bd(K), g != 0, and
// <g, x-u> >= 0 over K up to 1e-9.
SphereFacing min_enclosing_sphere_facing(const FeasibleSet& K, const Vec& u, const Vec& g);

// Largest gamma with K inside the ball of radius ||grad||/(2 gamma) through
// x_star; 0 when the set is not sphere-enclosed facing x_star.
double gamma_star(const FeasibleSet& K, const Vec& x_star, const Vec& grad);

}  // namespace ocolab
